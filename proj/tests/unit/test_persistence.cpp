#include <algorithm>
#include <random>
#include <vector>

#include "cellprobe/fixtures.hpp"
#include "cellprobe/persistence.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cellprobe;

namespace {

CellWord contents_at(const PersistentStore& store, Address a, VersionId v) {
  QueryStats stats;
  const auto word = cell_at_version(store, a, v, &stats);
  REQUIRE(word.has_value());
  CHECK(stats.probes <= 3);
  return *word;
}

// Contents after the last event at or before `time`, by linear scan.
CellWord scan_predecessor(const std::vector<CellEvent>& events, std::uint64_t time) {
  CellWord out{};
  for (const CellEvent& e : events) {
    if (e.time <= time) out = e.contents;
  }
  return out;
}

}  // namespace

TEST_CASE("traversal example: event table and lookups") {
  const TraversalExample ex = traversal_example();
  const TraversalClock clock = traverse(ex.tree);
  CHECK(clock.discovery[ex.root] == 1);
  CHECK(clock.finish[ex.root] == 8);
  CHECK(clock.discovery[ex.middle] == 2);
  CHECK(clock.finish[ex.middle] == 7);
  CHECK(clock.discovery[ex.writer] == 3);
  CHECK(clock.finish[ex.writer] == 4);
  CHECK(clock.discovery[ex.reader] == 5);
  CHECK(clock.finish[ex.reader] == 6);

  const PersistentStore store = build_store(ex.tree, ex.registers);
  const CellEventTable& table = store.table(ex.cell);
  CHECK(table.times() == std::vector<std::uint64_t>{1, 3, 4, 8});
  const std::vector<CellEvent> expected{{1, ex.x}, {3, ex.y}, {4, ex.x}, {8, ex.z}};
  CHECK(table.events() == expected);

  CHECK(contents_at(store, ex.cell, ex.reader) == ex.x);
  CHECK(contents_at(store, ex.cell, ex.writer) == ex.y);
  CHECK(contents_at(store, ex.cell, ex.root) == ex.x);

  // Predecessor of 2 in {1,3,4,8} is 1; replaying root -> middle gives the same.
  CHECK(contents_at(store, ex.cell, ex.middle) == ex.x);
  CHECK(replay_oracle(ex.tree, ex.registers, PersistentQuery<RegisterRead>{{ex.cell}, ex.middle}) == ex.x);

  for (VersionId v = 0; v < ex.tree.size(); ++v) CHECK(contents_at(store, 12345, v) == CellWord{0});
}

TEST_CASE("single update-free node") {
  const VersionTree<MarkUpdate> tree;
  const MarkedAncestorTree ma(2, 2);
  const PersistentStore store = build_store(tree, ma);
  CHECK(store.tables().empty());
  CHECK(store.version_count() == 1);
  CHECK(store.discovery_time(0) == 1);
  CHECK(store.measured_s() == 1);

  QueryStats stats;
  CHECK_FALSE(persistent_query(store, ma, PersistentQuery<AncestorQuery>{{{2, 3}}, 0}, &stats));
  // Never-written cells have empty tables: the empty certificate costs nothing.
  CHECK(stats.probes == 1);
}

TEST_CASE("chain of three marking versions") {
  // Hand-simulated schedule: root marks (1,0) at t=1, child marks (1,1) at
  // t=2, grandchild marks (2,0) at t=3; finishes at 4, 5, 6.
  VersionTree<MarkUpdate> tree;
  const VersionId a = tree.add_child(0);
  const VersionId b = tree.add_child(a);
  tree.add_update(0, {{1, 0}, MarkAction::mark});
  tree.add_update(a, {{1, 1}, MarkAction::mark});
  tree.add_update(b, {{2, 0}, MarkAction::mark});
  const MarkedAncestorTree ma(2, 2);
  const PersistentStore store = build_store(tree, ma);

  REQUIRE(store.tables().size() == 3);
  CHECK(store.table(ma.address_of({1, 0})).events() == std::vector<CellEvent>{{1, CellWord{1}}, {6, CellWord{0}}});
  CHECK(store.table(ma.address_of({1, 1})).events() == std::vector<CellEvent>{{2, CellWord{1}}, {5, CellWord{0}}});
  CHECK(store.table(ma.address_of({2, 0})).events() == std::vector<CellEvent>{{3, CellWord{1}}, {4, CellWord{0}}});
  CHECK(store.measured_s() == 6 + 3);
  CHECK(store.measured_update_probes() == 1);
}

TEST_CASE("repeated writes in one version collapse to one event; no-op writes vanish") {
  const RegisterFile regs(8);
  VersionTree<RegisterWrite> tree;
  const VersionId child = tree.add_child(0);
  tree.add_update(0, {1, CellWord{5}});
  tree.add_update(0, {1, CellWord{6}});
  tree.add_update(child, {2, CellWord{9}});
  tree.add_update(child, {2, CellWord{0}});  // back to the prior value
  tree.add_update(child, {1, CellWord{6}});  // same as inherited
  const PersistentStore store = build_store(tree, regs);
  CHECK(store.table(1).events() == std::vector<CellEvent>{{1, CellWord{6}}, {4, CellWord{0}}});
  CHECK(store.table(2).empty());
}

TEST_CASE("unmark and remark across versions") {
  const MarkedAncestorTree ma(2, 1);
  VersionTree<MarkUpdate> tree;
  const VersionId left = tree.add_child(0);
  const VersionId right = tree.add_child(0);
  tree.add_update(0, {{1, 0}, MarkAction::mark});
  tree.add_update(left, {{1, 0}, MarkAction::unmark});
  tree.add_update(right, {{0, 0}, MarkAction::mark});
  const PersistentStore store = build_store(tree, ma);
  for (VersionId v : {VersionId{0}, left, right}) {
    for (std::uint64_t i = 0; i < 2; ++i) {
      const PersistentQuery<AncestorQuery> q{{{1, i}}, v};
      CHECK(persistent_query(store, ma, q) == replay_oracle(tree, ma, q));
    }
  }
  CHECK(persistent_query(store, ma, PersistentQuery<AncestorQuery>{{{1, 0}}, left}) == false);
  CHECK(persistent_query(store, ma, PersistentQuery<AncestorQuery>{{{1, 1}}, right}) == true);
}

TEST_CASE("store width checks") {
  VersionTree<MarkUpdate> tree;
  for (int k = 0; k < 3; ++k) tree.add_child(0);
  const MarkedAncestorTree ma(2, 1);
  // 4 versions: times up to 8 need 4 bits, plus 1 contents bit.
  CHECK(required_store_width(4, 1) == 5);
  try {
    build_store(tree, ma, 4);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::width_too_small);
  }
  CHECK(build_store(tree, ma, 5).width() == 5);
  CHECK(build_store(tree, ma).width() == 64);

  CHECK(default_store_width(0) == 64);
  CHECK(default_store_width(1) == 64);
  CHECK(default_store_width(std::uint64_t{1} << 31) == 64);
  CHECK_THROWS_AS(default_store_width(std::uint64_t{1} << 40), Error);
}

TEST_CASE("DFS clock is a properly nested permutation of 1..2|R|") {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 100; ++round) {
    auto c = cellprobe::testing::random_persistence_case(rng);
    const TraversalClock clock = traverse(c.tree);
    const std::size_t n = c.tree.size();
    std::vector<int> seen(2 * n + 1, 0);
    for (VersionId v = 0; v < n; ++v) {
      REQUIRE(clock.discovery[v] >= 1);
      REQUIRE(clock.finish[v] <= 2 * n);
      CHECK(clock.discovery[v] < clock.finish[v]);
      ++seen[clock.discovery[v]];
      ++seen[clock.finish[v]];
      if (v != 0) {
        const VersionId p = c.tree.parent(v);
        CHECK(clock.discovery[p] < clock.discovery[v]);
        CHECK(clock.finish[v] < clock.finish[p]);
      }
    }
    CHECK(std::count(seen.begin() + 1, seen.end(), 1) == static_cast<long>(2 * n));
  }
}

TEST_CASE("random version trees agree with replay and the shadow model") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 40; ++round) {
    auto c = cellprobe::testing::random_persistence_case(rng);
    const MarkedAncestorTree ma(c.degree, c.depth);
    const PersistentStore store = build_store(c.tree, ma);
    const std::uint64_t m = c.tree.total_updates();
    CHECK(store.measured_s() <= 4 * (m * store.measured_update_probes() + c.tree.size()));
    for (VersionId v = 0; v < c.tree.size(); ++v) {
      for (unsigned layer = 0; layer <= c.depth; ++layer) {
        for (std::uint64_t i = 0; i < ma.layer_size(layer); ++i) {
          const PersistentQuery<AncestorQuery> q{{{layer, i}}, v};
          QueryStats persistent, direct;
          const bool got = persistent_query(store, ma, q, &persistent);
          const bool want = replay_oracle(c.tree, ma, q, &direct);
          REQUIRE(got == want);
          REQUIRE(want == cellprobe::testing::shadow_answer(c, v, {layer, i}));
          CHECK(persistent.probes <= 2 * direct.probes + 2);
        }
      }
    }
  }
}

TEST_CASE("every probe subset of size <= 2 yields the right contents or a rejection") {
  std::mt19937_64 rng(99);
  for (int round = 0; round < 300; ++round) {
    const std::size_t len = rng() % 9;  // 0..8 entries
    CellEventTable table(6, 20);
    std::uint64_t t = 0;
    for (std::size_t k = 0; k < len; ++k) {
      t += 1 + rng() % 3;
      table.append(t, CellWord{rng() % 64});
    }
    const auto events = table.events();
    std::vector<std::vector<std::size_t>> subsets{{}};
    for (std::size_t i = 1; i <= len; ++i) {
      subsets.push_back({i});
      for (std::size_t j = i + 1; j <= len; ++j) subsets.push_back({i, j});
    }
    for (std::uint64_t d_u = 0; d_u <= t + 2; ++d_u) {
      const CellWord truth = scan_predecessor(events, d_u);
      bool accepted_any = false;
      for (const auto& subset : subsets) {
        const auto got = verify_cell(table, d_u, table.probe(subset));
        if (got) {
          REQUIRE(*got == truth);
          accepted_any = true;
        }
      }
      CHECK(accepted_any);
      REQUIRE(verify_cell(table, d_u, table.probe(prove_cell(table, d_u))) == truth);
    }
  }
}

TEST_CASE("a lying prover is caught or harmless") {
  std::mt19937_64 rng(3);
  std::size_t rejections = 0;
  for (int round = 0; round < 30; ++round) {
    auto c = cellprobe::testing::random_persistence_case(rng, 20, 60);
    const MarkedAncestorTree ma(c.degree, c.depth);
    const PersistentStore store = build_store(c.tree, ma);
    // Shows a random index set of size <= 2 instead of the certificate.
    const CellProver liar = [&](const CellEventTable& table, std::uint64_t) {
      std::vector<std::size_t> out;
      if (table.empty()) return out;
      const std::size_t k = rng() % 3;
      for (std::size_t i = 0; i < k; ++i) {
        const std::size_t idx = 1 + rng() % table.size();
        if (std::find(out.begin(), out.end(), idx) == out.end()) out.push_back(idx);
      }
      return out;
    };
    for (VersionId v = 0; v < c.tree.size(); ++v) {
      const TreeNode leaf{c.depth, rng() % ma.layer_size(c.depth)};
      const PersistentQuery<AncestorQuery> q{{leaf}, v};
      bool got = false;
      try {
        got = persistent_query(store, ma, q, nullptr, liar);
      } catch (const Error& e) {
        CHECK(e.code() == Errc::rejected);
        ++rejections;
        continue;
      }
      CHECK(got == replay_oracle(c.tree, ma, q));
    }
  }
  CHECK(rejections > 0);
}

TEST_CASE("cell_at_version surfaces rejection as a value") {
  const TraversalExample ex = traversal_example();
  const PersistentStore store = build_store(ex.tree, ex.registers);
  const CellProver gap = [](const CellEventTable&, std::uint64_t) { return std::vector<std::size_t>{1, 3}; };
  CHECK(cell_at_version(store, ex.cell, ex.reader, nullptr, gap) == reject);
  CHECK_THROWS_AS(cell_at_version(store, ex.cell, 17), Error);
}
