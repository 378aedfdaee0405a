#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "oscpert/eigenfreq.hpp"
#include "oscpert/three_mode.hpp"

namespace oscpert::experiments {

enum class BenchmarkId { num_ex_m, num_ex_s, num_ex_l };
inline constexpr std::array<BenchmarkId, 3> kAllBenchmarks{BenchmarkId::num_ex_m, BenchmarkId::num_ex_s,
                                                           BenchmarkId::num_ex_l};

/// Accepts "m", "s", "l" and the long forms "num_ex_m" etc.
BenchmarkId parse_benchmark(std::string_view id);
std::string_view benchmark_name(BenchmarkId id);

/// Frozen benchmark parameters at eps = 1.
/// num_ex_s uses d3 = 1/40, the only value that gives det Omega(1) = 0
/// (1/49 leaves it nonzero).
three_mode::ThreeModeModel registry(BenchmarkId id);

/// Reference |X|, |Y|, |Z| at eps = 1 (three decimals).
std::array<double, 3> reference_xyz(BenchmarkId id);

enum class Format { csv, json };

struct SweepConfig {
    std::variant<BenchmarkId, std::string> model;  // registry id or path to model JSON
    double eps_start = 0.0;
    double eps_end = 1.0;
    std::size_t steps = 101;
    std::set<eigenfreq::EstimateLevel> levels{eigenfreq::kAllLevels.begin(), eigenfreq::kAllLevels.end()};
    Format format = Format::csv;
    std::string output;

    void validate() const;
};

inline constexpr std::string_view kSweepCsvHeader =
    "epsilon,mode,true_re,true_im,app0,app1,app2,err0,err1,err2,real_spectrum,status";

three_mode::ThreeModeModel resolve_model(const SweepConfig& cfg);
std::vector<double> sweep_grid(const SweepConfig& cfg);
/// Rendered sweep output; identical configs give identical bytes.
std::string sweep_text(const SweepConfig& cfg);
/// Writes sweep_text to cfg.output; throws IoError on failure.
void sweep(const SweepConfig& cfg);

enum class Depth { quick, full };

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool passed() const;
};

constexpr double kDefaultVerifyTol = 1e-7;
constexpr double kTableTol = 5e-4;

/// OSC_PERT_TOL if set (must be a positive number), otherwise kDefaultVerifyTol.
double verify_tolerance_from_env();

VerifyReport verify(BenchmarkId id, Depth depth, double tol = kDefaultVerifyTol);

/// Decomposition JSON for a graph file, explicit when li_path is given, pairwise_min otherwise.
std::string decompose_cmd(const std::string& graph_path, const std::optional<std::string>& li_path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace oscpert::experiments
