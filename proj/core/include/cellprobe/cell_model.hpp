#pragma once

// The simulated cell-probe machine: w-bit cells, probe accounting, a
// revertible change log, and the prover/verifier certificate contract.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "cellprobe/error.hpp"

namespace cellprobe {

using Address = std::uint64_t;

inline constexpr unsigned kMaxCellWidth = 64;

class CellWord {
 public:
  constexpr CellWord() = default;
  constexpr explicit CellWord(std::uint64_t value) : value_(value) {}

  constexpr std::uint64_t value() const { return value_; }

  friend constexpr auto operator<=>(CellWord, CellWord) = default;

 private:
  std::uint64_t value_ = 0;
};

// True when `word` is representable in `width` bits.
constexpr bool fits_width(CellWord word, unsigned width) {
  return width >= kMaxCellWidth || (word.value() >> width) == 0;
}

// Throws width_unsupported unless 1 <= width <= 64.
void check_width(unsigned width);

// A rejection is a value, not an error: std::nullopt plays the role of the
// verifier's failure symbol.
template <class T>
using Verdict = std::optional<T>;

inline constexpr std::nullopt_t reject = std::nullopt;

struct CellChange {
  Address address;
  CellWord before;
  CellWord after;
};

class InstrumentedMemory {
 public:
  explicit InstrumentedMemory(unsigned width = kMaxCellWidth);

  unsigned width() const { return width_; }

  // Counted accesses.
  CellWord read(Address address);
  void write(Address address, CellWord value);

  void push_frame();
  void pop_frame();
  std::size_t open_frames() const { return frames_.size(); }

  std::uint64_t probe_count() const { return probes_; }

  // Uncounted inspection, used by instrumentation and tests only.
  CellWord peek(Address address) const;
  std::size_t materialized_cells() const { return cells_.size(); }

  // Distinct addresses written since the innermost push_frame, in order of
  // first write, with their contents at the push and now.
  std::vector<CellChange> top_frame_changes() const;

  // Order-independent digest over all non-zero cells.
  std::uint64_t content_hash() const;

  // Non-zero cells only, so that never-written and zero-written compare equal.
  std::unordered_map<Address, CellWord> nonzero_cells() const;

 private:
  struct LogRecord {
    Address address;
    std::optional<CellWord> previous;
  };

  unsigned width_;
  std::unordered_map<Address, CellWord> cells_;
  std::vector<LogRecord> log_;
  std::vector<std::size_t> frames_;
  std::uint64_t probes_ = 0;
};

// Read-only façade handed to query procedures. Counts its own probes and
// forwards to the memory's counter.
class MemoryReader {
 public:
  explicit MemoryReader(InstrumentedMemory& memory) : memory_(&memory) {}

  CellWord read(Address address) {
    ++probes_;
    return memory_->read(address);
  }

  std::uint64_t probes() const { return probes_; }

 private:
  InstrumentedMemory* memory_;
  std::uint64_t probes_ = 0;
};

struct Probe {
  std::size_t index;  // 1-based cell index into the table
  CellWord word;

  friend bool operator==(const Probe&, const Probe&) = default;
};

// The cells a verifier gets to see. Items are kept sorted by index.
class ProbeSet {
 public:
  ProbeSet() = default;
  // Throws duplicate_probe when two items share an index.
  explicit ProbeSet(std::vector<Probe> items);

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }
  const Probe& operator[](std::size_t i) const { return items_[i]; }

  std::optional<CellWord> find(std::size_t index) const;

 private:
  std::vector<Probe> items_;
};

// Static code T(d): s cells of w bits, addressed 1..s.
class CertificateTable {
 public:
  CertificateTable() = default;
  CertificateTable(unsigned width, std::vector<CellWord> entries);

  std::size_t size() const { return entries_.size(); }
  unsigned width() const { return width_; }
  std::span<const CellWord> entries() const { return entries_; }

  CellWord at(std::size_t index) const;

  // T_d(P) for the given 1-based indices.
  ProbeSet probe(std::span<const std::size_t> indices) const;

 private:
  unsigned width_ = kMaxCellWidth;
  std::vector<CellWord> entries_;
};

template <class V, class Query>
concept CertificateVerifier = requires(const V& verifier, const Query& query, const ProbeSet& probes) {
  { verifier(query, probes) };
};

// Runs a query-specific verifier. Soundness (answer or reject, never a
// wrong answer) is the concrete verifier's obligation.
template <class Query, CertificateVerifier<Query> V>
auto verify(const V& verifier, const Query& query, const ProbeSet& probes) {
  return verifier(query, probes);
}

// Per-query probe accumulator for non-deterministic lookups.
struct QueryStats {
  std::uint64_t probes = 0;
};

}  // namespace cellprobe
