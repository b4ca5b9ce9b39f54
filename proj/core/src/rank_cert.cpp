#include "cellprobe/rank_cert.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace cellprobe {

RankTable rank_build(const RankInstance& instance, unsigned width) {
  check_width(width);
  if (instance.universe == 0) throw Error(Errc::invalid_instance, "universe must be positive");
  // w > lg U  <=>  U < 2^w
  if (width < kMaxCellWidth && instance.universe >= (std::uint64_t{1} << width)) {
    throw Error(Errc::width_too_small,
                "universe " + std::to_string(instance.universe) + " needs more than " + std::to_string(width) +
                    " bits");
  }
  std::vector<std::uint64_t> sorted = instance.elements;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(Errc::invalid_instance, "duplicate element");
  }
  if (!sorted.empty() && sorted.back() >= instance.universe) {
    throw Error(Errc::invalid_instance, "element " + std::to_string(sorted.back()) + " outside universe");
  }
  std::vector<CellWord> cells;
  cells.reserve(sorted.size());
  for (std::uint64_t v : sorted) cells.emplace_back(v);
  return RankTable(instance.universe, CertificateTable(width, std::move(cells)));
}

std::vector<std::size_t> rank_prove(const RankTable& table, std::uint64_t x) {
  if (x >= table.universe()) {
    throw Error(Errc::query_out_of_range,
                std::to_string(x) + " outside universe [0, " + std::to_string(table.universe()) + ")");
  }
  const std::size_t n = table.size();
  if (n == 0) return {};
  auto entries = table.cells().entries();
  const auto rank = static_cast<std::size_t>(
      std::upper_bound(entries.begin(), entries.end(), CellWord{x}) - entries.begin());
  if (rank == 0) return {1};
  if (rank == n) return {n};
  return {rank, rank + 1};
}

Verdict<std::size_t> rank_verify(std::size_t table_size, std::uint64_t x, const ProbeSet& probes) {
  return rank_verify_by(table_size, x, probes, [](CellWord w) { return w.value(); });
}

Verdict<std::size_t> rank_verify(const RankTable& table, std::uint64_t x, const ProbeSet& probes) {
  if (x >= table.universe()) return reject;
  return rank_verify(table.size(), x, probes);
}

}  // namespace cellprobe
