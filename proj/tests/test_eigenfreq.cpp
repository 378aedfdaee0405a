#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles/roots.hpp"
#include "oscpert/eigenfreq.hpp"
#include "oscpert/experiments.hpp"
#include "support.hpp"

using namespace oscpert;
using namespace oscpert::eigenfreq;
using experiments::BenchmarkId;
using experiments::registry;

namespace {

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double num = 0, den = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
        den += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    }
    return num / den;
}

}  // namespace

TEST_SUITE("eigenfreq") {
    TEST_CASE("estimates without coupling are the bare frequencies") {
        const auto m = registry(BenchmarkId::num_ex_m).at(0.0);
        for (int which = 1; which <= 3; ++which)
            for (auto level : kAllLevels) CHECK(estimate(m, which, level) == m.omega[which - 1]);
    }

    TEST_CASE("first estimate of the moderate benchmark") {
        const auto m = registry(BenchmarkId::num_ex_m);
        const double x = 80.0 / ((12.3 - (6.0 + 4.0 / 41.0)) * (16.0 / 15.0 - 12.3));
        CHECK(estimate(m, 1, EstimateLevel::app0) == doctest::Approx(12.3 + x).epsilon(1e-14));
        CHECK(std::abs(x) == doctest::Approx(1.148).epsilon(5e-4));
    }

    TEST_CASE("second-order estimate is accurate for the small-coupling benchmark") {
        const auto m = registry(BenchmarkId::num_ex_s);
        const auto truth = true_eigenfrequencies(m);
        for (int which = 1; which <= 3; ++which) {
            CHECK(truth[which - 1].imag() == 0.0);
            CHECK(std::abs(estimate(m, which, EstimateLevel::app2) - truth[which - 1].real()) <= 1e-2);
        }
    }

    TEST_CASE("increments nest the levels") {
        std::mt19937_64 rng(43);
        for (int trial = 0; trial < 100; ++trial) {
            const auto m = testing_support::random_model(rng);
            for (int which = 1; which <= 3; ++which) {
                const double a0 = estimate(m, which, EstimateLevel::app0);
                const double a1 = estimate(m, which, EstimateLevel::app1);
                const double a2 = estimate(m, which, EstimateLevel::app2);
                const double scale = std::max(1.0, std::abs(a2));
                CHECK(std::abs(a1 - a0 - level_increment(m, which, EstimateLevel::app1)) <= 1e-12 * scale);
                CHECK(std::abs(a2 - a1 - level_increment(m, which, EstimateLevel::app2)) <= 1e-12 * scale);
            }
        }
    }

    TEST_CASE("increments follow the printed formulas for the first mode") {
        const auto m = registry(BenchmarkId::num_ex_m).at(0.4);
        const double w1 = m.omega[0] + m.epsilon * m.d[0];
        const double w2 = m.omega[1] + m.epsilon * m.d[1];
        const double w3 = m.omega[2] + m.epsilon * m.d[2];
        const double p = m.a[0] * m.a[1] * m.a[2] * std::pow(m.epsilon, 3);
        const double X = p / ((w1 - w2) * (w3 - w1));
        const double A = w3 - w1, B = w1 - w2;
        CHECK(level_increment(m, 1, EstimateLevel::app0) == doctest::Approx(X).epsilon(1e-13));
        CHECK(level_increment(m, 1, EstimateLevel::app1) == doctest::Approx(X * X / A - X * X / B).epsilon(1e-13));
        const double app2 = 2 * std::pow(X, 3) / (A * A) - 3 * std::pow(X, 3) / (A * B) + 2 * std::pow(X, 3) / (B * B) +
                            10 * std::pow(X, 4) / (3 * A * A * A) - 10 * std::pow(X, 4) / (A * A * B) +
                            10 * std::pow(X, 4) / (A * B * B) - 10 * std::pow(X, 4) / (3 * B * B * B);
        CHECK(level_increment(m, 1, EstimateLevel::app2) == doctest::Approx(app2).epsilon(1e-13));
    }

    TEST_CASE("relabeling leaves the estimates unchanged") {
        std::mt19937_64 rng(47);
        for (int trial = 0; trial < 50; ++trial) {
            const auto m = testing_support::random_model(rng);
            const auto v3 = three_mode::cyclic_view(m, three_mode::Target::psi3);
            const auto v2 = three_mode::cyclic_view(m, three_mode::Target::psi2);
            for (auto level : kAllLevels) {
                CHECK(std::abs(estimate(m, 3, level) - estimate(v3.model, 1, level)) <= 1e-12 * (1 + std::abs(estimate(m, 3, level))));
                CHECK(std::abs(estimate(m, 2, level) - estimate(v2.model, 1, level)) <= 1e-12 * (1 + std::abs(estimate(m, 2, level))));
            }
        }
    }

    TEST_CASE("invalid mode index") {
        CHECK_THROWS_AS(estimate(registry(BenchmarkId::num_ex_s), 0, EstimateLevel::app0), InvalidArgument);
        CHECK_THROWS_AS(estimate(registry(BenchmarkId::num_ex_s), 4, EstimateLevel::app0), InvalidArgument);
    }

    TEST_CASE("true eigenfrequencies without coupling") {
        const auto m = registry(BenchmarkId::num_ex_l).at(0.0);
        const auto t = true_eigenfrequencies(m);
        for (int i = 0; i < 3; ++i) CHECK(t[i] == Complex(m.omega[i]));
    }

    TEST_CASE("every benchmark has a zero eigenfrequency at full coupling") {
        for (auto id : experiments::kAllBenchmarks) {
            double smallest = 1e300;
            for (const auto& z : true_eigenfrequencies(registry(id))) smallest = std::min(smallest, std::abs(z));
            CHECK(smallest < 1e-9);
            // Determinant of the frequency matrix vanishes independently of the eigensolver.
            CHECK(std::abs(determinant(three_mode::omega_matrix(registry(id)))) < 1e-12);
        }
    }

    TEST_CASE("true eigenfrequencies agree with the root oracle") {
        for (auto id : experiments::kAllBenchmarks)
            for (double eps : {0.1, 0.45, 0.8, 1.0}) {
                const auto m = registry(id).at(eps);
                const auto t = true_eigenfrequencies(m);
                auto roots = oracle::characteristic_roots(three_mode::omega_matrix(m));
                for (const auto& z : t) {
                    double best = 1e300;
                    for (const auto& r : roots)
                        best = std::min(best, std::abs(z - Complex(static_cast<double>(r.real()), static_cast<double>(r.imag()))));
                    CHECK(best < 1e-9);
                }
            }
    }

    TEST_CASE("large-coupling benchmark has a conjugate pair at full coupling") {
        const auto t = true_eigenfrequencies(registry(BenchmarkId::num_ex_l));
        CHECK(is_nonreal(t[0]));
        CHECK(is_nonreal(t[1]));
        CHECK_FALSE(is_nonreal(t[2]));
        CHECK(std::abs(t[0] - std::conj(t[1])) < 1e-9);
    }

    TEST_CASE("branches are continuous in epsilon") {
        for (auto id : experiments::kAllBenchmarks) {
            const auto base = registry(id);
            std::array<Complex, 3> prev = true_eigenfrequencies(base.at(0.0));
            const double step = 0.01;
            // Slope bound: |d lambda / d eps| <= ||d Omega / d eps|| (Frobenius) for diagonalizable paths.
            const double slope = frobenius_norm(three_mode::omega_matrix(base) - three_mode::omega_matrix(base.at(0.0)));
            for (int k = 1; k <= 100; ++k) {
                const double eps = k * step;
                const auto now = true_eigenfrequencies(base.at(eps));
                for (int i = 0; i < 3; ++i) {
                    // Square-root branch points allow a larger jump at the onset of non-real values.
                    const double allowed = 10.0 * step * slope;
                    if (!is_nonreal(now[i]) && !is_nonreal(prev[i])) CHECK(std::abs(now[i] - prev[i]) < allowed);
                }
                prev = now;
            }
        }
    }

    TEST_CASE("transition epsilon brackets the onset") {
        const double onset = transition_epsilon(registry(BenchmarkId::num_ex_l), 0.0, 1.0);
        CHECK(onset >= 0.40);
        CHECK(onset <= 0.50);
        CHECK(spectrum_is_real(registry(BenchmarkId::num_ex_l).at(onset - 1e-6)));
        CHECK_FALSE(spectrum_is_real(registry(BenchmarkId::num_ex_l).at(onset + 1e-6)));
        CHECK_THROWS_AS(transition_epsilon(registry(BenchmarkId::num_ex_s), 0.0, 1.0), NoTransition);
        CHECK_THROWS_AS(transition_epsilon(registry(BenchmarkId::num_ex_l), 0.5, 0.5), InvalidArgument);
    }

    TEST_CASE("report at zero coupling has zero errors") {
        const auto r = report(registry(BenchmarkId::num_ex_m), 0.0);
        CHECK(r.real_spectrum);
        for (int mode = 0; mode < 3; ++mode)
            for (int level = 0; level < 3; ++level) CHECK(r.abs_errors[mode][level] == 0.0);
    }

    TEST_CASE("report orders the levels for the small-coupling benchmark") {
        const auto r = report(registry(BenchmarkId::num_ex_s), 1.0);
        CHECK(r.real_spectrum);
        for (int mode = 0; mode < 3; ++mode) {
            CHECK(*r.abs_errors[mode][2] <= *r.abs_errors[mode][1]);
            CHECK(*r.abs_errors[mode][1] <= *r.abs_errors[mode][0]);
        }
    }

    TEST_CASE("report on the large-coupling benchmark flags non-real modes") {
        const auto r = report(registry(BenchmarkId::num_ex_l), 1.0);
        CHECK_FALSE(r.real_spectrum);
        CHECK_FALSE(r.mode_real[0]);
        CHECK_FALSE(r.mode_real[1]);
        CHECK(r.mode_real[2]);
        CHECK_FALSE(r.abs_errors[0][0].has_value());
        REQUIRE(r.abs_errors[2][0].has_value());
        CHECK(*r.abs_errors[2][0] == doctest::Approx(std::abs(r.estimates[2][0] - r.true_values[2].real())));
    }

    TEST_CASE("first-level error shrinks as epsilon cubed") {
        std::vector<double> eps;
        for (int k = 0; k <= 6; ++k) eps.push_back(0.05 * std::pow(4.0, k / 6.0));
        for (auto id : experiments::kAllBenchmarks)
            for (int mode = 0; mode < 3; ++mode) {
                std::vector<double> err;
                for (double e : eps) err.push_back(*report(registry(id), e).abs_errors[mode][0]);
                CHECK(log_log_slope(eps, err) >= 2.7);
            }
    }
}
