#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cellprobe/butterfly.hpp"
#include "cellprobe/reduction.hpp"

namespace cellprobe::cli {

enum ExitCode : int { kSuccess = 0, kVerificationFailure = 1, kInputError = 2 };

struct GenOptions {
  unsigned degree = 2;
  unsigned depth = 2;
  double missing_prob = 0.3;
  std::uint64_t seed = 0;
};

// JSON text of a random instance; throws invalid_params on bad options.
std::string generate_instance(const GenOptions& options);

struct VerifyReport {
  unsigned degree = 0;
  unsigned depth = 0;
  std::uint64_t present_edges = 0;
  std::uint64_t updates = 0;
  std::uint64_t measured_s = 0;
  unsigned width = 0;
  std::uint64_t update_probes = 0;
  bool exhaustive = false;
  std::uint64_t pairs_checked = 0;
  std::uint64_t reachable_pairs = 0;
  std::uint64_t mismatches = 0;
  std::uint64_t max_probes = 0;
  double mean_probes = 0.0;
  std::uint64_t probe_bound = 0;  // 2 * (d + 1) + 2
};

// Checks answer_reachability against oracle_reachable on every pair, or on
// `sample_pairs` pairs drawn with `seed` when not exhaustive.
VerifyReport verify_instance(const ButterflySubgraph& graph, bool exhaustive, std::uint64_t seed,
                             std::uint64_t sample_pairs = 256);

void print_report(std::ostream& out, const VerifyReport& report);

// One CSV row.
struct BenchRecord {
  unsigned b = 0;
  unsigned d = 0;
  std::uint64_t n = 0;  // present edges
  std::uint64_t m = 0;  // updates = missing edges
  std::uint64_t s = 0;  // cells in the certificate store
  unsigned w = 0;
  std::uint64_t t_max = 0;
  std::optional<double> bound_curve;
};

inline constexpr const char* kBenchHeader = "b,d,n,m,s,w,t_max,bound_curve";

// lg n / lg(s w / n); empty unless n >= 2 and s w > n.
std::optional<double> bound_curve(std::uint64_t n, std::uint64_t s, unsigned w);

BenchRecord bench_trial(const ButterflyShape& shape, double missing_prob, std::uint64_t seed);

// Seed for (b, d, trial) derived from the base seed.
std::uint64_t trial_seed(std::uint64_t seed, unsigned b, unsigned d, std::uint64_t trial);

struct BenchOptions {
  std::vector<unsigned> degrees{2};
  std::vector<unsigned> depths{1, 2, 3};
  std::uint64_t trials = 3;
  double missing_prob = 0.3;
  std::uint64_t seed = 0;
};

std::string format_csv_row(const BenchRecord& record);
void write_bench_csv(std::ostream& out, const BenchOptions& options);

struct Figure3Demo {
  std::vector<std::pair<std::string, UpdatePlacement>> placements;           // e_1..e_5
  std::vector<std::pair<TreeNode, std::vector<std::string>>> version_groups;  // BFS order
  std::vector<TreeNode> source1_marks;                                        // marks seen at version s_1
  std::vector<bool> source1_reaches;                                          // t_1..t_4
};

Figure3Demo figure3_demo();
void print_figure3_demo(std::ostream& out, const Figure3Demo& demo);

// Whole command line; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cellprobe::cli
