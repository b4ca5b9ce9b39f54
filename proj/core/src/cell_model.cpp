#include "cellprobe/cell_model.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

namespace cellprobe {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::value_too_wide: return "ValueTooWide";
    case Errc::no_open_frame: return "NoOpenFrame";
    case Errc::width_too_small: return "WidthTooSmall";
    case Errc::width_unsupported: return "WidthUnsupported";
    case Errc::index_out_of_bounds: return "IndexOutOfBounds";
    case Errc::duplicate_probe: return "DuplicateProbe";
    case Errc::query_out_of_range: return "QueryOutOfRange";
    case Errc::invalid_instance: return "InvalidInstance";
    case Errc::node_out_of_bounds: return "NodeOutOfBounds";
    case Errc::invalid_edge: return "InvalidEdge";
    case Errc::invalid_params: return "InvalidParams";
    case Errc::rejected: return "Rejected";
    case Errc::instance_parse_error: return "InstanceParseError";
    case Errc::verification_failure: return "VerificationFailure";
  }
  return "Unknown";
}

void check_width(unsigned width) {
  if (width == 0 || width > kMaxCellWidth) {
    throw Error(Errc::width_unsupported, "cell width must be in [1, 64], got " + std::to_string(width));
  }
}

InstrumentedMemory::InstrumentedMemory(unsigned width) : width_(width) { check_width(width); }

CellWord InstrumentedMemory::read(Address address) {
  ++probes_;
  return peek(address);
}

void InstrumentedMemory::write(Address address, CellWord value) {
  if (!fits_width(value, width_)) {
    throw Error(Errc::value_too_wide,
                std::to_string(value.value()) + " does not fit in " + std::to_string(width_) + " bits");
  }
  ++probes_;
  auto it = cells_.find(address);
  if (!frames_.empty()) {
    log_.push_back({address, it == cells_.end() ? std::nullopt : std::optional<CellWord>(it->second)});
  }
  if (it == cells_.end()) {
    cells_.emplace(address, value);
  } else {
    it->second = value;
  }
}

void InstrumentedMemory::push_frame() { frames_.push_back(log_.size()); }

void InstrumentedMemory::pop_frame() {
  if (frames_.empty()) throw Error(Errc::no_open_frame, "pop_frame without matching push_frame");
  const std::size_t start = frames_.back();
  frames_.pop_back();
  while (log_.size() > start) {
    const LogRecord& rec = log_.back();
    if (rec.previous) {
      cells_[rec.address] = *rec.previous;
    } else {
      cells_.erase(rec.address);
    }
    log_.pop_back();
  }
}

CellWord InstrumentedMemory::peek(Address address) const {
  auto it = cells_.find(address);
  return it == cells_.end() ? CellWord{} : it->second;
}

std::vector<CellChange> InstrumentedMemory::top_frame_changes() const {
  std::vector<CellChange> changes;
  if (frames_.empty()) return changes;
  std::unordered_set<Address> seen;
  for (std::size_t i = frames_.back(); i < log_.size(); ++i) {
    const LogRecord& rec = log_[i];
    if (!seen.insert(rec.address).second) continue;
    changes.push_back({rec.address, rec.previous.value_or(CellWord{}), CellWord{}});
  }
  for (CellChange& c : changes) c.after = peek(c.address);
  return changes;
}

namespace {

std::uint64_t mix(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t InstrumentedMemory::content_hash() const {
  std::uint64_t h = 0;
  for (const auto& [address, word] : cells_) {
    if (word.value() == 0) continue;
    h += mix(mix(address) ^ word.value());
  }
  return h;
}

std::unordered_map<Address, CellWord> InstrumentedMemory::nonzero_cells() const {
  std::unordered_map<Address, CellWord> out;
  for (const auto& [address, word] : cells_) {
    if (word.value() != 0) out.emplace(address, word);
  }
  return out;
}

ProbeSet::ProbeSet(std::vector<Probe> items) : items_(std::move(items)) {
  std::sort(items_.begin(), items_.end(), [](const Probe& a, const Probe& b) { return a.index < b.index; });
  for (std::size_t i = 1; i < items_.size(); ++i) {
    if (items_[i].index == items_[i - 1].index) {
      throw Error(Errc::duplicate_probe, "cell " + std::to_string(items_[i].index) + " probed twice");
    }
  }
}

std::optional<CellWord> ProbeSet::find(std::size_t index) const {
  for (const Probe& p : items_) {
    if (p.index == index) return p.word;
  }
  return std::nullopt;
}

CertificateTable::CertificateTable(unsigned width, std::vector<CellWord> entries)
    : width_(width), entries_(std::move(entries)) {
  check_width(width);
  for (CellWord w : entries_) {
    if (!fits_width(w, width_)) {
      throw Error(Errc::value_too_wide, "table entry " + std::to_string(w.value()) + " exceeds cell width");
    }
  }
}

CellWord CertificateTable::at(std::size_t index) const {
  if (index == 0 || index > entries_.size()) {
    throw Error(Errc::index_out_of_bounds,
                "cell " + std::to_string(index) + " outside 1.." + std::to_string(entries_.size()));
  }
  return entries_[index - 1];
}

ProbeSet CertificateTable::probe(std::span<const std::size_t> indices) const {
  std::vector<Probe> items;
  items.reserve(indices.size());
  for (std::size_t i : indices) items.push_back({i, at(i)});
  return ProbeSet(std::move(items));
}

}  // namespace cellprobe
