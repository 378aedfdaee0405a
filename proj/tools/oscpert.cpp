// oscpert: benchmark sweeps, oracle verification and graph decomposition from the command line.
//
// Exit status: 0 success, 1 verification failure, 2 usage or I/O error.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "oscpert/experiments.hpp"
#include "oscpert/format.hpp"

namespace {

using namespace oscpert;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::variant<experiments::BenchmarkId, std::string> parse_model_arg(const std::string& arg) {
    if (!arg.empty() && arg.front() == '@') return arg.substr(1);
    return experiments::parse_benchmark(arg);
}

three_mode::ThreeModeModel load_model(const std::string& arg) {
    experiments::SweepConfig cfg;
    cfg.model = parse_model_arg(arg);
    return experiments::resolve_model(cfg);
}

std::set<eigenfreq::EstimateLevel> parse_levels(const std::string& text) {
    std::set<eigenfreq::EstimateLevel> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "app0") out.insert(eigenfreq::EstimateLevel::app0);
        else if (item == "app1") out.insert(eigenfreq::EstimateLevel::app1);
        else if (item == "app2") out.insert(eigenfreq::EstimateLevel::app2);
        else throw UsageError("unknown estimate level '" + item + "'");
    }
    if (out.empty()) throw UsageError("--levels needs at least one of app0,app1,app2");
    return out;
}

void print_complex(const char* label, Complex z) {
    std::cout << label << ' ' << format_real(z.real()) << ' ' << format_real(z.imag()) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Perturbative analysis of the cyclic three-mode oscillation model"};
    app.require_subcommand(1);

    std::string model_arg;
    double eps_start = 0.0, eps_end = 1.0;
    std::size_t steps = 101;
    std::string levels_arg = "app0,app1,app2";
    std::string format_arg = "csv";
    std::string out_path;
    auto* sweep = app.add_subcommand("sweep", "Eigenfrequency estimates and errors over an epsilon grid");
    sweep->add_option("--model", model_arg, "m, s, l or @model.json")->required();
    sweep->add_option("--eps-start", eps_start, "First epsilon");
    sweep->add_option("--eps-end", eps_end, "Last epsilon");
    sweep->add_option("--steps", steps, "Number of grid points");
    sweep->add_option("--levels", levels_arg, "Comma-separated subset of app0,app1,app2");
    sweep->add_option("--format", format_arg, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("--out", out_path, "Output file")->required();

    std::string verify_model;
    std::string depth_arg = "quick";
    auto* verify = app.add_subcommand("verify", "Cross-check closed forms against numerical oracles");
    verify->add_option("--model", verify_model, "m, s or l")->required();
    verify->add_option("--depth", depth_arg, "quick or full")->check(CLI::IsMember({"quick", "full"}));

    std::string graph_path, li_path, decomp_out;
    auto* decompose = app.add_subcommand("decompose", "Split a graph Laplacian into symmetrizable and one-way parts");
    decompose->add_option("--graph", graph_path, "Graph JSON {\"n\":..,\"edges\":[[src,dst,w],..]}")->required();
    decompose->add_option("--li", li_path, "Explicit one-way Laplacian (JSON matrix); pairwise minimum if omitted");
    decompose->add_option("--out", decomp_out, "Output file (stdout if omitted)");

    std::string xyz_model;
    std::optional<double> xyz_eps;
    auto* xyz = app.add_subcommand("xyz", "Cyclic coupling ratios X, Y, Z");
    xyz->add_option("--model", xyz_model, "m, s, l or @model.json")->required();
    xyz->add_option("--eps", xyz_eps, "Coupling strength (defaults to the model's)");

    std::string term_model;
    int term_order = 0;
    double term_t = 1.0;
    std::optional<double> term_eps;
    std::size_t term_steps = 4000;
    auto* term = app.add_subcommand("term", "Order-n contribution to psi1: closed form vs quadrature");
    term->add_option("--model", term_model, "m, s, l or @model.json")->required();
    term->add_option("--order", term_order, "Order n in 0..3")->check(CLI::Range(0, 3));
    term->add_option("--t", term_t, "Time")->check(CLI::NonNegativeNumber);
    term->add_option("--eps", term_eps, "Coupling strength (defaults to the model's)");
    term->add_option("--steps", term_steps, "Quadrature intervals");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*sweep) {
            experiments::SweepConfig cfg;
            cfg.model = parse_model_arg(model_arg);
            cfg.eps_start = eps_start;
            cfg.eps_end = eps_end;
            cfg.steps = steps;
            cfg.levels = parse_levels(levels_arg);
            cfg.format = format_arg == "json" ? experiments::Format::json : experiments::Format::csv;
            cfg.output = out_path;
            experiments::sweep(cfg);
            return kExitOk;
        }
        if (*verify) {
            const double tol = experiments::verify_tolerance_from_env();
            const auto id = experiments::parse_benchmark(verify_model);
            const auto depth = depth_arg == "full" ? experiments::Depth::full : experiments::Depth::quick;
            const auto rep = experiments::verify(id, depth, tol);
            for (const auto& c : rep.checks)
                std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
            std::cout << (rep.passed() ? "verify passed" : "verify FAILED") << '\n';
            return rep.passed() ? kExitOk : kExitFailed;
        }
        if (*decompose) {
            std::optional<std::string> li;
            if (!li_path.empty()) li = li_path;
            const std::string text = experiments::decompose_cmd(graph_path, li);
            if (decomp_out.empty())
                std::cout << text << '\n';
            else
                experiments::write_file(decomp_out, text + "\n");
            return kExitOk;
        }
        if (*xyz) {
            auto m = load_model(xyz_model);
            if (xyz_eps) m = m.at(*xyz_eps);
            const auto c = three_mode::xyz(m);
            std::cout << "X " << format_real(c.X) << '\n'
                      << "Y " << format_real(c.Y) << '\n'
                      << "Z " << format_real(c.Z) << '\n';
            char buf[96];
            std::snprintf(buf, sizeof buf, "|X|,|Y|,|Z| = %.3f, %.3f, %.3f\n", std::abs(c.X), std::abs(c.Y),
                          std::abs(c.Z));
            std::cout << buf;
            return kExitOk;
        }
        if (*term) {
            auto m = load_model(term_model);
            if (term_eps) m = m.at(*term_eps);
            const ComplexVector psi0(3, Complex(1.0 / std::sqrt(3.0), 0.0));
            const auto sys = three_mode::perturbed_system(m);
            const Complex closed = three_mode::psi1_analytic(m, term_order, term_t, psi0);
            const Complex quad = std::pow(m.epsilon, term_order) *
                                 dyson::term(sys, static_cast<std::size_t>(term_order), term_t, psi0, term_steps)[0];
            print_complex("closed_form", closed);
            print_complex("quadrature", quad);
            const double diff = std::abs(closed - quad);
            std::cout << "relative_difference " << format_real(diff == 0.0 ? 0.0 : diff / std::abs(quad)) << '\n';
            return kExitOk;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
