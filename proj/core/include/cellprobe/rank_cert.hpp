#pragma once

// Two-cell rank certificates over a sorted table.
//
// The table stores the elements of S in increasing order. A rank query x is
// certified either by two adjacent cells (i, l), (i+1, u) with l <= x < u,
// or at the boundaries by the single cell 1 (x below the minimum) or the
// single cell n (x at or above the maximum).

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cellprobe/cell_model.hpp"

namespace cellprobe {

struct RankInstance {
  std::uint64_t universe = 1;          // elements and queries live in [0, universe)
  std::vector<std::uint64_t> elements;  // distinct, any order
};

class RankTable {
 public:
  RankTable() = default;
  RankTable(std::uint64_t universe, CertificateTable cells) : universe_(universe), cells_(std::move(cells)) {}

  std::uint64_t universe() const { return universe_; }
  std::size_t size() const { return cells_.size(); }
  unsigned width() const { return cells_.width(); }
  CellWord at(std::size_t index) const { return cells_.at(index); }
  const CertificateTable& cells() const { return cells_; }

  ProbeSet probe(std::span<const std::size_t> indices) const { return cells_.probe(indices); }

 private:
  std::uint64_t universe_ = 1;
  CertificateTable cells_;
};

// Throws width_too_small when width <= lg(universe), invalid_instance on
// duplicate or out-of-universe elements.
RankTable rank_build(const RankInstance& instance, unsigned width = kMaxCellWidth);

// Prover side: at most two 1-based indices whose cells certify rank(x).
// Throws query_out_of_range unless 0 <= x < universe.
std::vector<std::size_t> rank_prove(const RankTable& table, std::uint64_t x);

// Verifier core, parameterised by how a key is read out of a cell so that
// packed tables (key in the high bits) can reuse it. `table_size` is the
// public length n of the table.
template <class KeyOf>
Verdict<std::size_t> rank_verify_by(std::size_t table_size, std::uint64_t x, const ProbeSet& probes, KeyOf key_of) {
  if (probes.size() > 2) return reject;
  for (const Probe& p : probes) {
    if (p.index == 0 || p.index > table_size) return reject;
  }
  if (table_size == 0) return std::size_t{0};

  if (probes.size() == 2) {
    const Probe& lo = probes[0];
    const Probe& hi = probes[1];
    const std::uint64_t lo_key = key_of(lo.word);
    const std::uint64_t hi_key = key_of(hi.word);
    // A sorted table never shows a larger key at a smaller index.
    if (lo_key >= hi_key) return reject;
    if (lo.index + 1 == hi.index && lo_key <= x && x < hi_key) return lo.index;
  }
  for (const Probe& p : probes) {
    const std::uint64_t key = key_of(p.word);
    if (p.index == 1 && x < key) return std::size_t{0};
    if (p.index == table_size && x >= key) return table_size;
  }
  return reject;
}

Verdict<std::size_t> rank_verify(std::size_t table_size, std::uint64_t x, const ProbeSet& probes);

// Rejects queries outside the table's universe.
Verdict<std::size_t> rank_verify(const RankTable& table, std::uint64_t x, const ProbeSet& probes);

// Function-object form for use with verify().
struct RankVerifier {
  std::size_t table_size = 0;

  Verdict<std::size_t> operator()(std::uint64_t x, const ProbeSet& probes) const {
    return rank_verify(table_size, x, probes);
  }
};

}  // namespace cellprobe
