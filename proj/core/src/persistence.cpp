#include "cellprobe/persistence.hpp"

#include <algorithm>
#include <bit>

namespace cellprobe {

CellEventTable::CellEventTable(unsigned inner_width, unsigned width) : inner_width_(inner_width), width_(width) {
  check_width(width);
  check_width(inner_width);
  if (inner_width >= width) throw Error(Errc::width_too_small, "no room for event times");
}

void CellEventTable::append(std::uint64_t time, CellWord contents) {
  if (!entries_.empty() && time <= time_of(entries_.back())) {
    throw Error(Errc::invalid_instance, "event times must increase");
  }
  if (!fits_width(contents, inner_width_)) throw Error(Errc::value_too_wide, "event contents too wide");
  if (bit_length(time) > width_ - inner_width_) throw Error(Errc::width_too_small, "event time too wide");
  entries_.emplace_back((time << inner_width_) | contents.value());
}

CellWord CellEventTable::entry(std::size_t index) const {
  if (index == 0 || index > entries_.size()) {
    throw Error(Errc::index_out_of_bounds, "event " + std::to_string(index) + " outside table");
  }
  return entries_[index - 1];
}

CellEvent CellEventTable::event(std::size_t index) const {
  const CellWord packed = entry(index);
  return {time_of(packed), contents_of(packed)};
}

std::vector<CellEvent> CellEventTable::events() const {
  std::vector<CellEvent> out;
  out.reserve(entries_.size());
  for (CellWord packed : entries_) out.push_back({time_of(packed), contents_of(packed)});
  return out;
}

std::vector<std::uint64_t> CellEventTable::times() const {
  std::vector<std::uint64_t> out;
  out.reserve(entries_.size());
  for (CellWord packed : entries_) out.push_back(time_of(packed));
  return out;
}

CellWord CellEventTable::contents_of(CellWord packed) const {
  const std::uint64_t mask = inner_width_ >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << inner_width_) - 1;
  return CellWord{packed.value() & mask};
}

ProbeSet CellEventTable::probe(std::span<const std::size_t> indices) const {
  std::vector<Probe> items;
  items.reserve(indices.size());
  for (std::size_t i : indices) items.push_back({i, entry(i)});
  return ProbeSet(std::move(items));
}

unsigned bit_length(std::uint64_t value) { return static_cast<unsigned>(std::bit_width(value)); }

unsigned default_store_width(std::uint64_t update_count) {
  // ceil(lg(2m)) == bit_width(2m - 1) for m >= 1
  const unsigned lg = update_count == 0 ? 0 : bit_length(2 * update_count - 1);
  const unsigned width = std::max(64u, 2 * lg);
  check_width(width);
  return width;
}

unsigned required_store_width(std::size_t version_count, unsigned inner_width) {
  return bit_length(2 * static_cast<std::uint64_t>(version_count)) + inner_width;
}

std::uint64_t PersistentStore::measured_s() const {
  std::uint64_t s = discovery_.size();
  for (const auto& [address, table] : tables_) s += table.size();
  return s;
}

std::uint64_t PersistentStore::discovery_time(VersionId v) const {
  if (v >= discovery_.size()) throw Error(Errc::node_out_of_bounds, "version " + std::to_string(v) + " not in store");
  return discovery_[v].value();
}

std::uint64_t PersistentStore::lookup_discovery(VersionId v, QueryStats& stats) const {
  ++stats.probes;
  return discovery_time(v);
}

const CellEventTable& PersistentStore::table(Address address) const {
  auto it = tables_.find(address);
  return it == tables_.end() ? empty_ : it->second;
}

StoreBuilder::StoreBuilder(std::size_t version_count, unsigned inner_width, unsigned width,
                           std::uint64_t update_count) {
  store_.width_ = width;
  store_.inner_width_ = inner_width;
  store_.update_count_ = update_count;
  store_.discovery_.assign(version_count, CellWord{});
  store_.empty_ = CellEventTable(inner_width, width);
}

CellEventTable& StoreBuilder::table_for(Address address) {
  auto [it, inserted] = store_.tables_.try_emplace(address, store_.inner_width_, store_.width_);
  return it->second;
}

void StoreBuilder::discovered(VersionId v, std::uint64_t time, std::span<const CellChange> changes) {
  store_.discovery_.at(v) = CellWord{time};
  for (const CellChange& c : changes) {
    if (c.before != c.after) table_for(c.address).append(time, c.after);
  }
}

void StoreBuilder::finished(std::uint64_t time, std::span<const CellChange> reverted) {
  for (const CellChange& c : reverted) {
    if (c.before != c.after) table_for(c.address).append(time, c.before);
  }
}

void StoreBuilder::note_update_probes(std::uint64_t probes) {
  store_.max_update_probes_ = std::max(store_.max_update_probes_, probes);
}

std::vector<std::size_t> prove_cell(const CellEventTable& table, std::uint64_t discovery_time) {
  const std::size_t n = table.size();
  if (n == 0) return {};
  std::size_t lo = 0, hi = n;  // rank = number of times <= d_u
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (table.event(mid + 1).time <= discovery_time) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo == 0) return {1};
  if (lo == n) return {n};
  return {lo, lo + 1};
}

Verdict<CellWord> verify_cell(const CellEventTable& table, std::uint64_t discovery_time, const ProbeSet& probes) {
  const auto rank = rank_verify_by(table.size(), discovery_time, probes,
                                   [&](CellWord packed) { return table.time_of(packed); });
  if (!rank) return reject;
  if (*rank == 0) return CellWord{};
  const auto packed = probes.find(*rank);
  if (!packed) return reject;
  return table.contents_of(*packed);
}

Verdict<CellWord> cell_at_version(const PersistentStore& store, Address address, VersionId version,
                                  QueryStats* stats, const CellProver& prover) {
  QueryStats local;
  QueryStats& s = stats ? *stats : local;
  const std::uint64_t d_u = store.lookup_discovery(version, s);
  const CellEventTable& table = store.table(address);
  const auto indices = prover(table, d_u);
  const ProbeSet probes = table.probe(indices);
  s.probes += probes.size();
  return verify_cell(table, d_u, probes);
}

VersionReader::VersionReader(const PersistentStore& store, VersionId version, QueryStats& stats,
                             const CellProver& prover)
    : store_(&store), stats_(&stats), prover_(prover), discovery_time_(store.lookup_discovery(version, stats)) {}

CellWord VersionReader::read(Address address) {
  const CellEventTable& table = store_->table(address);
  const ProbeSet probes = table.probe(prover_(table, discovery_time_));
  stats_->probes += probes.size();
  const auto word = verify_cell(table, discovery_time_, probes);
  if (!word) throw Error(Errc::rejected, "certificate for cell " + std::to_string(address) + " rejected");
  return *word;
}

}  // namespace cellprobe
