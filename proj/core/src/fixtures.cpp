#include "cellprobe/fixtures.hpp"

namespace cellprobe {

ReductionExample reduction_example() {
  ReductionExample ex{ButterflySubgraph(ButterflyShape(2, 2)), {}};
  ex.missing = {
      {"e_1", {0, 0, 1}},  // s_1 -> middle node 1
      {"e_2", {0, 2, 2}},  // s_3 -> middle node 2
      {"e_3", {1, 0, 0}},  // middle node 0 -> t_1
      {"e_4", {1, 1, 1}},  // middle node 1 -> t_2
      {"e_5", {1, 3, 1}},  // middle node 3 -> t_2
  };
  for (const LabeledEdge& e : ex.missing) ex.graph.remove_edge(e.edge);
  return ex;
}

TraversalExample traversal_example() {
  TraversalExample ex;
  ex.registers = RegisterFile(16);
  ex.cell = 7;
  ex.x = CellWord{0x2a};
  ex.y = CellWord{0x11};
  ex.z = CellWord{0};
  ex.root = ex.tree.root();
  ex.middle = ex.tree.add_child(ex.root);
  ex.writer = ex.tree.add_child(ex.middle);
  ex.reader = ex.tree.add_child(ex.middle);
  ex.tree.add_update(ex.root, {ex.cell, ex.x});
  ex.tree.add_update(ex.writer, {ex.cell, ex.y});
  return ex;
}

}  // namespace cellprobe
