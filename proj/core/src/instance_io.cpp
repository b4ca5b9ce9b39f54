#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "cellprobe/butterfly.hpp"
#include "json.hpp"

namespace cellprobe {

using nlohmann::json;

std::string subgraph_to_json(const ButterflySubgraph& graph) {
  json edges = json::array();
  for (const ButterflyEdge& e : graph.missing_edges()) {
    edges.push_back({{"layer", e.layer}, {"lower_index", e.lower_index}, {"upper_index", e.upper_index}});
  }
  json doc;
  doc["degree"] = graph.shape().degree();
  doc["depth"] = graph.shape().depth();
  doc["missing_edges"] = std::move(edges);
  return doc.dump(2) + "\n";
}

namespace {

std::uint64_t unsigned_field(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw Error(Errc::instance_parse_error, std::string("missing field \"") + key + "\"");
  }
  const json& v = obj.at(key);
  if (!v.is_number_unsigned()) {
    throw Error(Errc::instance_parse_error, std::string("field \"") + key + "\" must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

}  // namespace

ButterflySubgraph subgraph_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::instance_parse_error, e.what());
  }
  const std::uint64_t degree = unsigned_field(doc, "degree");
  const std::uint64_t depth = unsigned_field(doc, "depth");
  if (degree > 1u << 24 || depth > 64) throw Error(Errc::instance_parse_error, "shape out of range");

  std::optional<ButterflySubgraph> graph;
  try {
    graph.emplace(ButterflyShape(static_cast<unsigned>(degree), static_cast<unsigned>(depth)));
  } catch (const Error& e) {
    throw Error(Errc::instance_parse_error, e.what());
  }

  if (!doc.contains("missing_edges") || !doc["missing_edges"].is_array()) {
    throw Error(Errc::instance_parse_error, "\"missing_edges\" must be an array");
  }
  for (const json& item : doc["missing_edges"]) {
    const std::uint64_t layer = unsigned_field(item, "layer");
    const ButterflyEdge edge{static_cast<unsigned>(std::min<std::uint64_t>(layer, depth)),
                             unsigned_field(item, "lower_index"), unsigned_field(item, "upper_index")};
    if (layer >= depth || !is_valid_edge(graph->shape(), edge)) {
      throw Error(Errc::instance_parse_error, "edge (" + std::to_string(layer) + ", " +
                                                  std::to_string(edge.lower_index) + ", " +
                                                  std::to_string(edge.upper_index) + ") is not a butterfly edge");
    }
    if (graph->is_missing(edge)) throw Error(Errc::instance_parse_error, "duplicate missing edge");
    graph->remove_edge(edge);
  }
  return std::move(*graph);
}

ButterflySubgraph load_subgraph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::instance_parse_error, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return subgraph_from_json(buf.str());
}

}  // namespace cellprobe
