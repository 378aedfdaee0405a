#include "oscpert/experiments.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "oscpert/format.hpp"
#include "oscpert/graph.hpp"

namespace oscpert::experiments {

namespace {

using eigenfreq::EstimateLevel;
using three_mode::ThreeModeModel;

std::string json_number(double x) { return std::isfinite(x) ? format_real(x) : "null"; }

std::string json_string(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (static_cast<unsigned char>(c) < 0x20) {
            out += ' ';
            continue;
        }
        out += c;
    }
    return out + "\"";
}

std::string csv_safe(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
    return s;
}

// W-squared correction of the mode computed on the relabeled model, independent of eigenfreq's frame.
double relabeled_app1_increment(const ThreeModeModel& m, int mode) {
    const auto target = mode == 1 ? three_mode::Target::psi1 : mode == 2 ? three_mode::Target::psi2
                                                                         : three_mode::Target::psi3;
    const auto view = three_mode::cyclic_view(m, target).model;
    const auto w = three_mode::effective_frequencies(view);
    const double x = three_mode::xyz(view).X;
    return x * x / (w[2] - w[0]) - x * x / (w[0] - w[1]);
}

struct ModeLine {
    int mode = 0;
    std::optional<Complex> truth;
    std::array<std::optional<double>, 3> app{};
    std::array<std::optional<double>, 3> err{};
    std::string status;
};

struct SweepRow {
    double epsilon = 0.0;
    std::optional<bool> real_spectrum;
    std::optional<three_mode::XYZ> xyz;
    std::array<ModeLine, 3> modes{};
};

SweepRow sweep_row(const ThreeModeModel& base, double eps, const std::set<EstimateLevel>& levels) {
    SweepRow row;
    row.epsilon = eps;
    for (int i = 0; i < 3; ++i) row.modes[i].mode = i + 1;
    try {
        const auto at = base.at(eps);
        const auto rep = eigenfreq::report(base, eps);
        row.real_spectrum = rep.real_spectrum;
        row.xyz = three_mode::xyz(at);
        for (int i = 0; i < 3; ++i) {
            ModeLine& line = row.modes[i];
            line.truth = rep.true_values[i];
            for (auto level : levels) {
                const auto li = static_cast<std::size_t>(level);
                line.app[li] = rep.estimates[i][li];
                line.err[li] = rep.abs_errors[i][li];
            }
            const double nesting = rep.estimates[i][1] - rep.estimates[i][0];
            const double expected = relabeled_app1_increment(at, i + 1);
            const double scale = std::max(1.0, std::abs(rep.estimates[i][1]));
            if (std::abs(nesting - expected) > 1e-12 * scale)
                line.status = "nesting_mismatch";
            else if (!rep.mode_real[i])
                line.status = "nonreal";
            else
                line.status = "ok";
        }
    } catch (const Error& e) {
        for (auto& line : row.modes) line.status = csv_safe(std::string("error: ") + e.what());
    }
    return row;
}

std::string opt(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

std::string render_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << kSweepCsvHeader << '\n';
    for (const auto& row : rows) {
        const std::string real = row.real_spectrum ? (*row.real_spectrum ? "true" : "false") : "";
        for (const auto& line : row.modes) {
            out << format_real(row.epsilon) << ',' << line.mode << ',';
            out << (line.truth ? format_real(line.truth->real()) : "") << ',';
            out << (line.truth ? format_real(line.truth->imag()) : "") << ',';
            for (const auto& a : line.app) out << opt(a) << ',';
            for (const auto& e : line.err) out << opt(e) << ',';
            out << real << ',' << line.status << '\n';
        }
    }
    return out.str();
}

std::string json_opt(const std::optional<double>& v) { return v ? json_number(*v) : "null"; }

std::string render_json(const ThreeModeModel& m, const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "{\n  \"model\": {\"omega\": [" << json_number(m.omega[0]) << ", " << json_number(m.omega[1]) << ", "
        << json_number(m.omega[2]) << "], \"a\": [" << json_number(m.a[0]) << ", " << json_number(m.a[1]) << ", "
        << json_number(m.a[2]) << "], \"d\": [" << json_number(m.d[0]) << ", " << json_number(m.d[1]) << ", "
        << json_number(m.d[2]) << "]},\n  \"rows\": [";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        out << (r ? ",\n" : "\n") << "    {\"epsilon\": " << json_number(row.epsilon) << ", \"real_spectrum\": "
            << (row.real_spectrum ? (*row.real_spectrum ? "true" : "false") : "null") << ", \"xyz\": ";
        if (row.xyz) {
            out << "{\"X\": " << json_number(row.xyz->X) << ", \"Y\": " << json_number(row.xyz->Y)
                << ", \"Z\": " << json_number(row.xyz->Z) << ", \"absX\": " << json_number(std::abs(row.xyz->X))
                << ", \"absY\": " << json_number(std::abs(row.xyz->Y))
                << ", \"absZ\": " << json_number(std::abs(row.xyz->Z)) << "}";
        } else {
            out << "null";
        }
        out << ", \"modes\": [";
        for (std::size_t i = 0; i < 3; ++i) {
            const auto& line = row.modes[i];
            out << (i ? ", " : "") << "{\"mode\": " << line.mode << ", \"true_re\": "
                << (line.truth ? json_number(line.truth->real()) : "null")
                << ", \"true_im\": " << (line.truth ? json_number(line.truth->imag()) : "null");
            for (std::size_t l = 0; l < 3; ++l) out << ", \"app" << l << "\": " << json_opt(line.app[l]);
            for (std::size_t l = 0; l < 3; ++l) out << ", \"err" << l << "\": " << json_opt(line.err[l]);
            out << ", \"status\": " << json_string(line.status) << "}";
        }
        out << "]}";
    }
    out << "\n  ]\n}\n";
    return out.str();
}

double rel_err(Complex approx, Complex ref, double scale) {
    const double diff = std::abs(approx - ref);
    if (diff == 0.0) return 0.0;
    return diff / std::max(scale, std::numeric_limits<double>::min());
}

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

const ComplexVector& uniform_state() {
    static const ComplexVector v(3, Complex(1.0 / std::sqrt(3.0), 0.0));
    return v;
}

}  // namespace

BenchmarkId parse_benchmark(std::string_view id) {
    if (id == "m" || id == "num_ex_m") return BenchmarkId::num_ex_m;
    if (id == "s" || id == "num_ex_s") return BenchmarkId::num_ex_s;
    if (id == "l" || id == "num_ex_l") return BenchmarkId::num_ex_l;
    throw UnknownModel("unknown benchmark model '" + std::string(id) + "'");
}

std::string_view benchmark_name(BenchmarkId id) {
    switch (id) {
        case BenchmarkId::num_ex_m:
            return "num_ex_m";
        case BenchmarkId::num_ex_s:
            return "num_ex_s";
        case BenchmarkId::num_ex_l:
            return "num_ex_l";
    }
    return "?";
}

ThreeModeModel registry(BenchmarkId id) {
    ThreeModeModel m;
    m.omega = {9.0, 6.0, 0.0};
    m.epsilon = 1.0;
    switch (id) {
        case BenchmarkId::num_ex_m:
            m.a = {5.0, 4.0, 4.0};
            m.d = {33.0 / 10.0, 4.0 / 41.0, 16.0 / 15.0};
            break;
        case BenchmarkId::num_ex_s:
            m.a = {1.0, 2.0, 1.0};
            m.d = {3.0 / 2.0, 34.0 / 21.0, 1.0 / 40.0};
            break;
        case BenchmarkId::num_ex_l:
            m.a = {6.0, 7.0, 5.0};
            m.d = {3.0, 11.0 / 4.0, 2.0};
            break;
    }
    return m;
}

std::array<double, 3> reference_xyz(BenchmarkId id) {
    switch (id) {
        case BenchmarkId::num_ex_m:
            return {1.148, 1.416, 2.564};
        case BenchmarkId::num_ex_s:
            return {0.066, 0.025, 0.091};
        case BenchmarkId::num_ex_l:
            return {6.462, 3.111, 9.573};
    }
    return {};
}

void SweepConfig::validate() const {
    if (!(eps_start >= 0.0 && eps_start < eps_end && eps_end <= 1.0))
        throw InvalidArgument("sweep: need 0 <= eps-start < eps-end <= 1");
    if (steps < 2) throw InvalidArgument("sweep: steps must be at least 2");
}

ThreeModeModel resolve_model(const SweepConfig& cfg) {
    if (const auto* id = std::get_if<BenchmarkId>(&cfg.model)) return registry(*id);
    return three_mode::model_from_json(read_file(std::get<std::string>(cfg.model)));
}

std::vector<double> sweep_grid(const SweepConfig& cfg) {
    cfg.validate();
    std::vector<double> grid(cfg.steps);
    const double span = cfg.eps_end - cfg.eps_start;
    for (std::size_t i = 0; i < cfg.steps; ++i)
        grid[i] = (i + 1 == cfg.steps)
                      ? cfg.eps_end
                      : cfg.eps_start + span * static_cast<double>(i) / static_cast<double>(cfg.steps - 1);
    return grid;
}

std::string sweep_text(const SweepConfig& cfg) {
    const auto grid = sweep_grid(cfg);
    const ThreeModeModel model = resolve_model(cfg);
    std::vector<SweepRow> rows;
    rows.reserve(grid.size());
    for (double eps : grid) rows.push_back(sweep_row(model, eps, cfg.levels));
    return cfg.format == Format::csv ? render_csv(rows) : render_json(model, rows);
}

void sweep(const SweepConfig& cfg) {
    if (cfg.output.empty()) throw IoError("sweep: no output path");
    write_file(cfg.output, sweep_text(cfg));
}

bool VerifyReport::passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return !checks.empty();
}

double verify_tolerance_from_env() {
    const char* raw = std::getenv("OSC_PERT_TOL");
    if (raw == nullptr || *raw == '\0') return kDefaultVerifyTol;
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(raw, &end);
    if (errno != 0 || end == raw || *end != '\0' || !std::isfinite(v) || !(v > 0.0))
        throw InvalidArgument(std::string("OSC_PERT_TOL must be a positive number, got '") + raw + "'");
    return v;
}

VerifyReport verify(BenchmarkId id, Depth depth, double tol) {
    if (!(tol > 0.0)) throw InvalidArgument("verify: tolerance must be positive");
    const ThreeModeModel base = registry(id);
    const ComplexVector& psi0 = uniform_state();
    VerifyReport rep;

    for (double eps : {0.2, 1.0}) {
        const ThreeModeModel m = base.at(eps);
        const auto sys = three_mode::perturbed_system(m);
        double worst = 0.0;
        for (double t : {0.1, 0.5, 1.0, 2.0}) {
            const auto terms = dyson::terms(sys, 3, t, psi0, 4000);
            double weight = 1.0;
            for (int n = 0; n <= 3; ++n) {
                const Complex quad = weight * terms[n][0];
                worst = std::max(worst, rel_err(three_mode::psi1_analytic(m, n, t, psi0), quad, std::abs(quad)));
                weight *= eps;
            }
        }
        char name[64];
        std::snprintf(name, sizeof name, "closed forms n=0..3 vs quadrature, eps=%.1f", eps);
        rep.checks.push_back({name, worst <= tol, "max relative error " + sci(worst)});
    }

    {
        const auto c = three_mode::xyz(base);
        const auto table = reference_xyz(id);
        const std::array<double, 3> got{std::abs(c.X), std::abs(c.Y), std::abs(c.Z)};
        double worst = 0.0;
        for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(got[i] - table[i]));
        rep.checks.push_back({"|X|,|Y|,|Z| at eps=1 vs reference values", worst < kTableTol,
                              "values " + sci(got[0]) + " " + sci(got[1]) + " " + sci(got[2]) + ", max delta " +
                                  sci(worst)});
    }

    {
        double smallest = std::numeric_limits<double>::infinity();
        for (const auto& z : eigenvalues(three_mode::omega_matrix(base))) smallest = std::min(smallest, std::abs(z));
        rep.checks.push_back({"zero eigenfrequency at eps=1", smallest < 1e-9, "min |lambda| " + sci(smallest)});
    }

    if (depth == Depth::quick) return rep;

    const auto sys = three_mode::perturbed_system(base);
    {
        SeriesTruncation capped;
        capped.k_max = 3;
        capped.max_order = 9;
        double worst = 0.0;
        for (double t : {0.25, 0.5, 1.0}) {
            const auto terms = dyson::terms(sys, 9, t, psi0, 4000);
            Complex sum{};
            double scale = 0.0;
            for (const auto& v : terms) {
                sum += v[0];
                scale += std::abs(v[0]);
            }
            worst = std::max(worst, rel_err(three_mode::psi1_infinite(base, t, psi0, capped), sum, scale));
        }
        rep.checks.push_back({"resummed blocks through eps^9 vs quadrature partial sum", worst <= tol,
                              "max relative error " + sci(worst)});
    }

    {
        double worst = 0.0;
        for (double t : {0.5, 1.0}) {
            const auto terms = dyson::terms(sys, 40, t, psi0, 4000);
            ComplexVector sum(3, Complex{});
            double scale = 0.0;
            for (const auto& v : terms) {
                sum = sum + v;
                scale += norm2(v);
            }
            const auto exact = matrix_exponential_apply(three_mode::evolution_generator(base), t, psi0);
            worst = std::max(worst, norm2(sum - exact) / scale);
        }
        rep.checks.push_back({"quadrature partial sum (K=40) vs exponential oracle", worst <= tol,
                              "max relative error " + sci(worst)});
    }

    {
        std::vector<double> eps_values{0.1};
        if (id == BenchmarkId::num_ex_s) eps_values.push_back(1.0);
        SeriesTruncation deep;
        deep.k_max = 6;
        double worst = 0.0;
        std::string failure;
        for (double eps : eps_values) {
            const ThreeModeModel m = base.at(eps);
            for (double t : {0.5, 1.0}) {
                try {
                    const Complex exact =
                        matrix_exponential_apply(three_mode::evolution_generator(m), t, psi0)[0];
                    worst = std::max(worst, std::abs(three_mode::psi1_infinite(m, t, psi0, deep) - exact));
                } catch (const Error& e) {
                    failure = e.what();
                }
            }
        }
        const bool ok = failure.empty() && worst <= tol;
        rep.checks.push_back({"resummed psi1 (k_max=6) vs exponential oracle", ok,
                              failure.empty() ? "max abs error " + sci(worst) : failure});
    }
    return rep;
}

std::string decompose_cmd(const std::string& graph_path, const std::optional<std::string>& li_path) {
    const auto g = graph::graph_from_json(read_file(graph_path));
    const auto L = graph::laplacian(g);
    graph::DecomposeMode mode = graph::PairwiseMin{};
    if (li_path) mode = graph::Explicit{graph::matrix_from_json(read_file(*li_path))};
    return graph::decomposition_to_json(graph::decompose(L, mode));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("failed reading '" + path + "'");
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace oscpert::experiments
