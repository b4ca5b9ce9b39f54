#pragma once

// Static full persistence by non-deterministic lookup.
//
// A depth-first traversal of the version tree applies each node's updates
// at its discovery time and reverts them at its finish time. Every cell c
// keeps one table entry per traversal time at which its contents change,
// packed as (time, contents). The contents of c at version u are the
// contents recorded at the predecessor of u's discovery time, which a
// two-cell rank certificate over the time column proves.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cellprobe/cell_model.hpp"
#include "cellprobe/dynamic_ds.hpp"
#include "cellprobe/rank_cert.hpp"

namespace cellprobe {

using VersionId = std::uint32_t;

template <class Update>
class VersionTree {
 public:
  VersionTree() : nodes_(1) {}

  static constexpr VersionId root() { return 0; }

  std::size_t size() const { return nodes_.size(); }
  bool contains(VersionId v) const { return v < nodes_.size(); }

  VersionId add_child(VersionId parent) {
    check(parent);
    const auto id = static_cast<VersionId>(nodes_.size());
    nodes_.push_back(Node{parent, {}, {}});
    nodes_[parent].children.push_back(id);
    return id;
  }

  void add_update(VersionId node, Update update) {
    check(node);
    nodes_[node].updates.push_back(std::move(update));
    ++update_count_;
  }

  VersionId parent(VersionId v) const { return check(v), nodes_[v].parent; }
  std::span<const VersionId> children(VersionId v) const { return check(v), std::span(nodes_[v].children); }
  std::span<const Update> updates(VersionId v) const { return check(v), std::span(nodes_[v].updates); }
  std::size_t total_updates() const { return update_count_; }

  // Root first.
  std::vector<VersionId> path_from_root(VersionId v) const {
    check(v);
    std::vector<VersionId> path{v};
    while (v != root()) {
      v = nodes_[v].parent;
      path.push_back(v);
    }
    return {path.rbegin(), path.rend()};
  }

 private:
  struct Node {
    VersionId parent = 0;
    std::vector<VersionId> children;
    std::vector<Update> updates;
  };

  void check(VersionId v) const {
    if (!contains(v)) throw Error(Errc::node_out_of_bounds, "version " + std::to_string(v) + " not in tree");
  }

  std::vector<Node> nodes_;
  std::size_t update_count_ = 0;
};

// Iterative DFS with a single clock starting at 1; children in insertion
// order. on_discover(v, time) and on_finish(v, time) receive every node
// once each, so times run 1..2|R|.
template <class Update, class OnDiscover, class OnFinish>
void depth_first(const VersionTree<Update>& tree, OnDiscover&& on_discover, OnFinish&& on_finish) {
  std::uint64_t clock = 1;
  std::vector<std::pair<VersionId, std::size_t>> stack;
  on_discover(tree.root(), clock++);
  stack.emplace_back(tree.root(), 0);
  while (!stack.empty()) {
    auto& [node, next_child] = stack.back();
    const auto kids = tree.children(node);
    if (next_child < kids.size()) {
      const VersionId child = kids[next_child++];
      on_discover(child, clock++);
      stack.emplace_back(child, 0);
    } else {
      on_finish(node, clock++);
      stack.pop_back();
    }
  }
}

struct TraversalClock {
  std::vector<std::uint64_t> discovery;  // indexed by VersionId
  std::vector<std::uint64_t> finish;
};

template <class Update>
TraversalClock traverse(const VersionTree<Update>& tree) {
  TraversalClock clock{std::vector<std::uint64_t>(tree.size()), std::vector<std::uint64_t>(tree.size())};
  depth_first(
      tree, [&](VersionId v, std::uint64_t t) { clock.discovery[v] = t; },
      [&](VersionId v, std::uint64_t t) { clock.finish[v] = t; });
  return clock;
}

struct CellEvent {
  std::uint64_t time;
  CellWord contents;

  friend bool operator==(const CellEvent&, const CellEvent&) = default;
};

// Event table of one cell. Entry i is a single w-bit cell holding
// (time << inner_width) | contents of the i-th event.
class CellEventTable {
 public:
  CellEventTable() = default;
  CellEventTable(unsigned inner_width, unsigned width);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  unsigned inner_width() const { return inner_width_; }

  // Times must be strictly increasing.
  void append(std::uint64_t time, CellWord contents);

  CellWord entry(std::size_t index) const;  // packed cell, 1-based
  CellEvent event(std::size_t index) const;
  std::vector<CellEvent> events() const;
  std::vector<std::uint64_t> times() const;

  std::uint64_t time_of(CellWord packed) const { return packed.value() >> inner_width_; }
  CellWord contents_of(CellWord packed) const;

  ProbeSet probe(std::span<const std::size_t> indices) const;

 private:
  unsigned inner_width_ = 1;
  unsigned width_ = kMaxCellWidth;
  std::vector<CellWord> entries_;
};

// bits needed to write `value` in binary (0 for 0).
unsigned bit_length(std::uint64_t value);

// max(64, 2 * ceil(lg(2m))); throws width_unsupported when that exceeds 64.
unsigned default_store_width(std::uint64_t update_count);

// Minimum store width for a tree with `version_count` nodes over cells of
// `inner_width` bits.
unsigned required_store_width(std::size_t version_count, unsigned inner_width);

class PersistentStore {
 public:
  unsigned width() const { return width_; }
  unsigned inner_width() const { return inner_width_; }
  std::size_t version_count() const { return discovery_.size(); }
  std::uint64_t update_count() const { return update_count_; }
  std::uint64_t measured_update_probes() const { return max_update_probes_; }

  // Event cells plus one discovery cell per version.
  std::uint64_t measured_s() const;

  // Uncounted; for reports and tests.
  std::uint64_t discovery_time(VersionId v) const;

  // Counted: one probe into the discovery table.
  std::uint64_t lookup_discovery(VersionId v, QueryStats& stats) const;

  // Empty table for cells no update ever changed.
  const CellEventTable& table(Address address) const;
  const std::unordered_map<Address, CellEventTable>& tables() const { return tables_; }

 private:
  friend class StoreBuilder;

  unsigned width_ = kMaxCellWidth;
  unsigned inner_width_ = 1;
  std::uint64_t update_count_ = 0;
  std::uint64_t max_update_probes_ = 0;
  std::vector<CellWord> discovery_;  // direct-indexed by VersionId
  std::unordered_map<Address, CellEventTable> tables_;
  CellEventTable empty_;
};

// Records traversal events into a PersistentStore. Driven by build_store.
class StoreBuilder {
 public:
  StoreBuilder(std::size_t version_count, unsigned inner_width, unsigned width, std::uint64_t update_count);

  void discovered(VersionId v, std::uint64_t time, std::span<const CellChange> changes);
  void finished(std::uint64_t time, std::span<const CellChange> reverted);
  void note_update_probes(std::uint64_t probes);

  PersistentStore take() { return std::move(store_); }

 private:
  CellEventTable& table_for(Address address);

  PersistentStore store_;
};

// Throws width_too_small when width < required_store_width. width 0 means
// default_store_width(m), raised to the required width when that fits.
template <DynamicStructure DS>
PersistentStore build_store(const VersionTree<typename DS::update_type>& tree, const DS& ds, unsigned width = 0) {
  const unsigned inner_width = ds.cell_width();
  const unsigned required = required_store_width(tree.size(), inner_width);
  if (width == 0) width = std::max(default_store_width(tree.total_updates()), required);
  check_width(width);
  if (width < required) {
    throw Error(Errc::width_too_small, "store width " + std::to_string(width) + " below required " +
                                           std::to_string(required));
  }

  InstrumentedMemory memory(inner_width);
  StoreBuilder builder(tree.size(), inner_width, width, tree.total_updates());
  depth_first(
      tree,
      [&](VersionId v, std::uint64_t time) {
        memory.push_frame();
        for (const auto& update : tree.updates(v)) {
          const std::uint64_t before = memory.probe_count();
          ds.apply_update(memory, update);
          builder.note_update_probes(memory.probe_count() - before);
        }
        const auto changes = memory.top_frame_changes();
        builder.discovered(v, time, changes);
      },
      [&](VersionId, std::uint64_t time) {
        const auto changes = memory.top_frame_changes();
        memory.pop_frame();
        builder.finished(time, changes);
      });
  return builder.take();
}

// Chooses which entries of an event table to show the verifier for a
// lookup at discovery time d_u.
using CellProver = std::function<std::vector<std::size_t>(const CellEventTable&, std::uint64_t discovery_time)>;

// Binary search for the predecessor of d_u: at most two indices.
std::vector<std::size_t> prove_cell(const CellEventTable& table, std::uint64_t discovery_time);

// Rank certificate over the time column; returns the contents field of the
// predecessor entry, the zero word at rank 0, or reject.
Verdict<CellWord> verify_cell(const CellEventTable& table, std::uint64_t discovery_time, const ProbeSet& probes);

// Contents of `address` at `version`: one discovery probe plus at most two
// table probes.
Verdict<CellWord> cell_at_version(const PersistentStore& store, Address address, VersionId version,
                                  QueryStats* stats = nullptr, const CellProver& prover = prove_cell);

// CellReader that resolves every read at one version. The discovery lookup
// happens once, at construction. A rejected lookup throws Errc::rejected.
class VersionReader {
 public:
  VersionReader(const PersistentStore& store, VersionId version, QueryStats& stats,
                const CellProver& prover = prove_cell);

  CellWord read(Address address);

 private:
  const PersistentStore* store_;
  QueryStats* stats_;
  CellProver prover_;
  std::uint64_t discovery_time_;
};

template <class Query>
struct PersistentQuery {
  Query query;
  VersionId version = 0;
};

template <DynamicStructure DS>
typename DS::answer_type persistent_query(const PersistentStore& store, const DS& ds,
                                          const PersistentQuery<typename DS::query_type>& pq,
                                          QueryStats* stats = nullptr, const CellProver& prover = prove_cell) {
  if (pq.version >= store.version_count()) {
    throw Error(Errc::node_out_of_bounds, "version " + std::to_string(pq.version) + " not in store");
  }
  QueryStats local;
  QueryStats& s = stats ? *stats : local;
  VersionReader reader(store, pq.version, s, prover);
  return ds.answer_query(reader, pq.query);
}

// Ground truth: replay the root-to-version updates on a fresh memory and
// ask directly. `direct_stats` receives the query's own probe count.
template <DynamicStructure DS>
typename DS::answer_type replay_oracle(const VersionTree<typename DS::update_type>& tree, const DS& ds,
                                       const PersistentQuery<typename DS::query_type>& pq,
                                       QueryStats* direct_stats = nullptr) {
  InstrumentedMemory memory(ds.cell_width());
  for (VersionId v : tree.path_from_root(pq.version)) {
    for (const auto& update : tree.updates(v)) ds.apply_update(memory, update);
  }
  MemoryReader reader(memory);
  auto answer = ds.answer_query(reader, pq.query);
  if (direct_stats) direct_stats->probes += reader.probes();
  return answer;
}

}  // namespace cellprobe
