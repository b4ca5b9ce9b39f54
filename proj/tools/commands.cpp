#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "cellprobe/fixtures.hpp"

namespace cellprobe::cli {

std::string generate_instance(const GenOptions& options) {
  const ButterflyShape shape(options.degree, options.depth);
  return subgraph_to_json(random_subgraph(shape, options.missing_prob, options.seed));
}

VerifyReport verify_instance(const ButterflySubgraph& graph, bool exhaustive, std::uint64_t seed,
                             std::uint64_t sample_pairs) {
  const ButterflyShape& shape = graph.shape();
  const ReductionInstance instance = build_instance(graph);
  const PersistentStore store = build_reduction_store(instance);

  VerifyReport report;
  report.degree = shape.degree();
  report.depth = shape.depth();
  report.present_edges = graph.present_count();
  report.updates = instance.version_tree().total_updates();
  report.measured_s = store.measured_s();
  report.width = store.width();
  report.update_probes = store.measured_update_probes();
  report.probe_bound = 2 * (std::uint64_t{shape.depth()} + 1) + 2;

  std::uint64_t total_probes = 0;
  const auto check = [&](std::uint64_t source, std::uint64_t sink) {
    QueryStats stats;
    const bool answer = answer_reachability(instance, store, source, sink, &stats);
    const bool truth = oracle_reachable(graph, source, sink);
    ++report.pairs_checked;
    report.reachable_pairs += truth ? 1 : 0;
    report.mismatches += answer != truth ? 1 : 0;
    report.max_probes = std::max(report.max_probes, stats.probes);
    total_probes += stats.probes;
  };

  const std::uint64_t nodes = shape.nodes_per_layer();
  report.exhaustive = exhaustive || nodes * nodes <= sample_pairs;
  if (report.exhaustive) {
    for (std::uint64_t source = 0; source < nodes; ++source) {
      for (std::uint64_t sink = 0; sink < nodes; ++sink) check(source, sink);
    }
  } else {
    std::mt19937_64 rng(seed);
    for (std::uint64_t i = 0; i < sample_pairs; ++i) {
      const std::uint64_t source = rng() % nodes;
      const std::uint64_t sink = rng() % nodes;
      check(source, sink);
    }
  }
  if (report.pairs_checked > 0) {
    report.mean_probes = static_cast<double>(total_probes) / static_cast<double>(report.pairs_checked);
  }
  return report;
}

void print_report(std::ostream& out, const VerifyReport& r) {
  out << "instance: b=" << r.degree << " d=" << r.depth << " present_edges=" << r.present_edges
      << " updates=" << r.updates << "\n";
  out << "store: s=" << r.measured_s << " cells, w=" << r.width << " bits, t_u=" << r.update_probes << "\n";
  out << "pairs checked: " << r.pairs_checked << (r.exhaustive ? " (exhaustive)" : " (sampled)") << "\n";
  out << "reachable: " << r.reachable_pairs << "\n";
  out << "mismatches: " << r.mismatches << "\n";
  out << "probes per query: max " << r.max_probes << ", mean " << std::fixed << std::setprecision(3)
      << r.mean_probes << std::defaultfloat << ", bound " << r.probe_bound << "\n";
  out << "result: " << (r.mismatches == 0 ? "OK" : "MISMATCH") << "\n";
}

std::optional<double> bound_curve(std::uint64_t n, std::uint64_t s, unsigned w) {
  if (n < 2) return std::nullopt;
  const double sw = static_cast<double>(s) * static_cast<double>(w);
  if (!(sw > static_cast<double>(n))) return std::nullopt;
  return std::log2(static_cast<double>(n)) / std::log2(sw / static_cast<double>(n));
}

BenchRecord bench_trial(const ButterflyShape& shape, double missing_prob, std::uint64_t seed) {
  const ButterflySubgraph graph = random_subgraph(shape, missing_prob, seed);
  const VerifyReport report = verify_instance(graph, true, seed);
  if (report.mismatches != 0) {
    throw Error(Errc::verification_failure, std::to_string(report.mismatches) + " mismatches in bench trial");
  }
  BenchRecord rec;
  rec.b = shape.degree();
  rec.d = shape.depth();
  rec.n = report.present_edges;
  rec.m = report.updates;
  rec.s = report.measured_s;
  rec.w = report.width;
  rec.t_max = report.max_probes;
  rec.bound_curve = bound_curve(rec.n, rec.s, rec.w);
  return rec;
}

std::uint64_t trial_seed(std::uint64_t seed, unsigned b, unsigned d, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), b, d,
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (std::uint64_t{words[0]} << 32) | words[1];
}

std::string format_csv_row(const BenchRecord& r) {
  std::ostringstream row;
  row << r.b << ',' << r.d << ',' << r.n << ',' << r.m << ',' << r.s << ',' << r.w << ',' << r.t_max << ',';
  if (r.bound_curve) row << std::setprecision(17) << *r.bound_curve;
  return row.str();
}

void write_bench_csv(std::ostream& out, const BenchOptions& options) {
  out << kBenchHeader << "\n";
  for (unsigned b : options.degrees) {
    for (unsigned d : options.depths) {
      const ButterflyShape shape(b, d);
      for (std::uint64_t trial = 0; trial < options.trials; ++trial) {
        out << format_csv_row(bench_trial(shape, options.missing_prob, trial_seed(options.seed, b, d, trial)))
            << "\n";
      }
    }
  }
}

namespace {

std::string digit_vector(const ButterflyShape& shape, std::uint64_t index) {
  std::string s = "(";
  const auto digits = shape.digits(index);
  for (std::size_t k = 0; k < digits.size(); ++k) s += (k ? "," : "") + std::to_string(digits[k]);
  return s + ")";
}

std::string node_text(const TreeNode& node) {
  return "layer " + std::to_string(node.layer) + " index " + std::to_string(node.index);
}

}  // namespace

Figure3Demo figure3_demo() {
  const ReductionExample ex = reduction_example();
  const ButterflyShape& shape = ex.graph.shape();
  const ReductionInstance instance = build_instance(ex.graph);
  const PersistentStore store = build_reduction_store(instance);

  Figure3Demo demo;
  for (const LabeledEdge& e : ex.missing) demo.placements.emplace_back(e.label, edge_to_update(shape, e.edge));

  for (VersionId v = 0; v < instance.version_tree().size(); ++v) {
    std::vector<std::string> labels;
    for (const auto& [label, placement] : demo.placements) {
      if (instance.version_id(placement.version_node) == v) labels.push_back(label);
    }
    demo.version_groups.emplace_back(instance.version_position(v), std::move(labels));
  }

  const QueryPlacement s1 = query_map(shape, 0, 0);
  const MarkedAncestorTree& tree = instance.marked_tree();
  for (unsigned layer = 0; layer <= tree.depth(); ++layer) {
    for (std::uint64_t i = 0; i < tree.layer_size(layer); ++i) {
      const TreeNode node{layer, i};
      const auto word = cell_at_version(store, tree.address_of(node), s1.version);
      if (word && word->value() != 0) demo.source1_marks.push_back(node);
    }
  }
  for (std::uint64_t sink = 0; sink < shape.nodes_per_layer(); ++sink) {
    demo.source1_reaches.push_back(answer_reachability(instance, store, 0, sink));
  }
  return demo;
}

void print_figure3_demo(std::ostream& out, const Figure3Demo& demo) {
  const ReductionExample ex = reduction_example();
  const ButterflyShape& shape = ex.graph.shape();
  out << "butterfly b=" << shape.degree() << " d=" << shape.depth() << ", missing edges e_1..e_"
      << ex.missing.size() << "\n\n";

  const ButterflyEdge& e1 = ex.missing.front().edge;
  const auto lower = shape.digits(e1.lower_index);
  const auto upper = shape.digits(e1.upper_index);
  const unsigned i = e1.layer;
  const unsigned d = shape.depth();
  out << "e_1 starts at v_l = " << digit_vector(shape, e1.lower_index) << " in layer i = " << i
      << " and ends at v_u = " << digit_vector(shape, e1.upper_index) << " in layer i+1 = " << i + 1 << "\n";
  out << "  version index = sum_{k=0}^{" << d - i - 1 << "} b^k v_l[" << i << "+k] =";
  std::uint64_t version_index = 0;
  for (unsigned k = 0; k + i < d; ++k) {
    out << (k ? " +" : "") << " " << lower[i + k] << "*b^" << k;
    version_index += lower[i + k] * shape.power(k);
  }
  out << " = " << version_index << ", in layer d-i = " << d - i << "\n";
  out << "  mark index = sum_{k=0}^{" << i << "} b^(" << i << "-k) v_u[k] =";
  std::uint64_t mark_index = 0;
  for (unsigned k = 0; k <= i; ++k) {
    out << (k ? " +" : "") << " " << upper[k] << "*b^" << i - k;
    mark_index += upper[k] * shape.power(i - k);
  }
  out << " = " << mark_index << ", in layer i+1 = " << i + 1 << "\n\n";

  out << "placements:\n";
  for (const auto& [label, p] : demo.placements) {
    out << label << ": version " << node_text(p.version_node) << "; mark " << node_text(p.mark_target) << "\n";
  }

  out << "\nversion tree updates:\n";
  for (const auto& [node, labels] : demo.version_groups) {
    out << "  " << node_text(node);
    if (node.layer == d) out << " (s_" << node.index + 1 << ")";
    out << ": {";
    for (std::size_t k = 0; k < labels.size(); ++k) out << (k ? ", " : "") << labels[k];
    out << "}\n";
  }

  out << "\nmarks at version s_1:";
  for (std::size_t k = 0; k < demo.source1_marks.size(); ++k) {
    out << (k ? ";" : "") << " " << node_text(demo.source1_marks[k]);
  }
  out << "\n";

  out << "reachability from s_1:";
  for (std::size_t t = 0; t < demo.source1_reaches.size(); ++t) {
    out << " t_" << t + 1 << "=" << (demo.source1_reaches[t] ? "yes" : "no");
  }
  out << "\n";
}

namespace {

// Writes to --out when given, else to `fallback`.
template <class Fn>
void emit(const std::string& path, std::ostream& fallback, Fn&& fn) {
  if (path.empty()) {
    fn(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(Errc::invalid_params, "cannot write " + path);
  fn(file);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"cell-probe reduction laboratory"};
  app.require_subcommand(1);

  GenOptions gen_opts;
  std::string out_path;
  auto* gen = app.add_subcommand("gen", "generate a random butterfly subgraph instance (JSON)");
  gen->add_option("--degree", gen_opts.degree, "butterfly degree b (>= 2)");
  gen->add_option("--depth", gen_opts.depth, "butterfly depth d (>= 1)");
  gen->add_option("--missing-prob", gen_opts.missing_prob, "probability that each edge is missing");
  gen->add_option("--seed", gen_opts.seed, "PRNG seed");
  gen->add_option("--out", out_path, "output file (default stdout)");

  std::string instance_path;
  bool exhaustive = false;
  std::uint64_t verify_seed = 0;
  auto* verify = app.add_subcommand("verify", "check reduction answers against the reachability oracle");
  verify->add_option("instance", instance_path, "instance JSON file")->required();
  verify->add_flag("--exhaustive-pairs", exhaustive, "check every source-sink pair");
  verify->add_option("--seed", verify_seed, "seed for sampled pairs");
  verify->add_option("--out", out_path, "report file (default stdout)");

  BenchOptions bench_opts;
  auto* bench = app.add_subcommand("bench", "emit probe and space measurements as CSV");
  bench->add_option("--degree", bench_opts.degrees, "comma-separated degrees")->delimiter(',');
  bench->add_option("--depth", bench_opts.depths, "comma-separated depths")->delimiter(',');
  bench->add_option("--trials", bench_opts.trials, "instances per (degree, depth)");
  bench->add_option("--missing-prob", bench_opts.missing_prob, "probability that each edge is missing");
  bench->add_option("--seed", bench_opts.seed, "base seed");
  bench->add_option("--out", out_path, "CSV file (default stdout)");

  auto* demo = app.add_subcommand("demo-figure3", "walk through the worked b=2, d=2 reduction example");
  demo->add_option("--out", out_path, "transcript file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInputError;
  }

  try {
    if (*gen) {
      const std::string text = generate_instance(gen_opts);
      emit(out_path, out, [&](std::ostream& os) { os << text; });
      return kSuccess;
    }
    if (*verify) {
      const ButterflySubgraph graph = load_subgraph(instance_path);
      const VerifyReport report = verify_instance(graph, exhaustive, verify_seed);
      emit(out_path, out, [&](std::ostream& os) { print_report(os, report); });
      return report.mismatches == 0 ? kSuccess : kVerificationFailure;
    }
    if (*bench) {
      std::ostringstream csv;
      write_bench_csv(csv, bench_opts);
      emit(out_path, out, [&](std::ostream& os) { os << csv.str(); });
      return kSuccess;
    }
    if (*demo) {
      const Figure3Demo result = figure3_demo();
      emit(out_path, out, [&](std::ostream& os) { print_figure3_demo(os, result); });
      return kSuccess;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == Errc::verification_failure ? kVerificationFailure : kInputError;
  }
  return kInputError;
}

}  // namespace cellprobe::cli
