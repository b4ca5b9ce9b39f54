#pragma once

// Dynamic structures that live in an InstrumentedMemory, and the contract
// the persistence transform relies on.

#include <compare>
#include <concepts>
#include <cstdint>

#include "cellprobe/cell_model.hpp"

namespace cellprobe {

template <class R>
concept CellReader = requires(R& reader, Address address) {
  { reader.read(address) } -> std::same_as<CellWord>;
};

// Updates write through an InstrumentedMemory; queries only ever see a
// CellReader, so they cannot write.
template <class D>
concept DynamicStructure = requires(const D& ds, InstrumentedMemory& memory, MemoryReader& reader,
                                    const typename D::update_type& update, const typename D::query_type& query) {
  typename D::answer_type;
  { ds.cell_width() } -> std::convertible_to<unsigned>;
  ds.apply_update(memory, update);
  { ds.answer_query(reader, query) } -> std::same_as<typename D::answer_type>;
};

// Node of a complete b-ary tree, addressed by layer (root = 0) and position
// within the layer.
struct TreeNode {
  unsigned layer = 0;
  std::uint64_t index = 0;

  friend auto operator<=>(const TreeNode&, const TreeNode&) = default;
};

// Checked b^e; throws invalid_params past 2^62.
std::uint64_t checked_pow(std::uint64_t base, unsigned exponent);

// Nodes above layer L in a complete b-ary tree: (b^L - 1) / (b - 1).
std::uint64_t layer_offset(std::uint64_t degree, unsigned layer);

enum class MarkAction { mark, unmark };

struct MarkUpdate {
  TreeNode node;
  MarkAction action = MarkAction::mark;

  friend bool operator==(const MarkUpdate&, const MarkUpdate&) = default;
};

struct AncestorQuery {
  TreeNode node;
};

// Marked ancestor over a complete tree of degree b and depth d, one mark
// bit per cell. Node (L, i) lives at base + offset(L) + i. A node counts as
// its own ancestor.
class MarkedAncestorTree {
 public:
  using update_type = MarkUpdate;
  using query_type = AncestorQuery;
  using answer_type = bool;

  MarkedAncestorTree(unsigned degree, unsigned depth, Address base = 0);

  unsigned degree() const { return degree_; }
  unsigned depth() const { return depth_; }
  std::uint64_t layer_size(unsigned layer) const;
  std::uint64_t node_count() const;
  unsigned cell_width() const { return 1; }

  bool contains(TreeNode node) const;
  Address address_of(TreeNode node) const;  // throws node_out_of_bounds
  TreeNode parent(TreeNode node) const;     // layer must be >= 1

  // One write.
  void apply_update(InstrumentedMemory& memory, const MarkUpdate& update) const;

  // Reads every cell from the node up to the root: exactly layer + 1 probes.
  template <CellReader R>
  bool answer_query(R& reader, const AncestorQuery& query) const {
    TreeNode node = query.node;
    Address addr = address_of(node);
    bool marked = false;
    for (;;) {
      marked = (reader.read(addr).value() != 0) || marked;
      if (node.layer == 0) break;
      node = parent(node);
      addr = address_of(node);
    }
    return marked;
  }

 private:
  unsigned degree_;
  unsigned depth_;
  Address base_;
};

// A bank of independent registers: an update stores a word, a query reads
// one back. The smallest structure with arbitrary cell contents.
struct RegisterWrite {
  Address address = 0;
  CellWord value;

  friend bool operator==(const RegisterWrite&, const RegisterWrite&) = default;
};

struct RegisterRead {
  Address address = 0;
};

class RegisterFile {
 public:
  using update_type = RegisterWrite;
  using query_type = RegisterRead;
  using answer_type = CellWord;

  explicit RegisterFile(unsigned width = 16) : width_(width) { check_width(width); }

  unsigned cell_width() const { return width_; }

  void apply_update(InstrumentedMemory& memory, const RegisterWrite& update) const {
    memory.write(update.address, update.value);
  }

  template <CellReader R>
  CellWord answer_query(R& reader, const RegisterRead& query) const {
    return reader.read(query.address);
  }

 private:
  unsigned width_;
};

static_assert(DynamicStructure<MarkedAncestorTree>);
static_assert(DynamicStructure<RegisterFile>);

}  // namespace cellprobe
