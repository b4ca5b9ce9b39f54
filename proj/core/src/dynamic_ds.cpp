#include "cellprobe/dynamic_ds.hpp"

#include <string>

namespace cellprobe {

std::uint64_t checked_pow(std::uint64_t base, unsigned exponent) {
  constexpr std::uint64_t kLimit = std::uint64_t{1} << 62;
  std::uint64_t result = 1;
  for (unsigned i = 0; i < exponent; ++i) {
    if (base != 0 && result > kLimit / base) {
      throw Error(Errc::invalid_params,
                  std::to_string(base) + "^" + std::to_string(exponent) + " is too large");
    }
    result *= base;
  }
  return result;
}

std::uint64_t layer_offset(std::uint64_t degree, unsigned layer) {
  std::uint64_t offset = 0;
  std::uint64_t width = 1;
  for (unsigned l = 0; l < layer; ++l) {
    offset += width;
    width = checked_pow(degree, l + 1);
  }
  return offset;
}

MarkedAncestorTree::MarkedAncestorTree(unsigned degree, unsigned depth, Address base)
    : degree_(degree), depth_(depth), base_(base) {
  if (degree < 2) throw Error(Errc::invalid_params, "degree must be at least 2");
  checked_pow(degree, depth + 1);
}

std::uint64_t MarkedAncestorTree::layer_size(unsigned layer) const { return checked_pow(degree_, layer); }

std::uint64_t MarkedAncestorTree::node_count() const { return layer_offset(degree_, depth_ + 1); }

bool MarkedAncestorTree::contains(TreeNode node) const {
  return node.layer <= depth_ && node.index < layer_size(node.layer);
}

Address MarkedAncestorTree::address_of(TreeNode node) const {
  if (!contains(node)) {
    throw Error(Errc::node_out_of_bounds,
                "(" + std::to_string(node.layer) + ", " + std::to_string(node.index) + ") not in tree of depth " +
                    std::to_string(depth_));
  }
  return base_ + layer_offset(degree_, node.layer) + node.index;
}

TreeNode MarkedAncestorTree::parent(TreeNode node) const {
  if (node.layer == 0) throw Error(Errc::node_out_of_bounds, "root has no parent");
  return {node.layer - 1, node.index / degree_};
}

void MarkedAncestorTree::apply_update(InstrumentedMemory& memory, const MarkUpdate& update) const {
  memory.write(address_of(update.node), CellWord{update.action == MarkAction::mark ? 1u : 0u});
}

}  // namespace cellprobe
