#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oscpert/dyson.hpp"
#include "oscpert/experiments.hpp"
#include "oscpert/three_mode.hpp"
#include "support.hpp"

using namespace oscpert;
using namespace oscpert::three_mode;
using experiments::BenchmarkId;
using experiments::registry;
using testing_support::uniform_state;
using testing_support::unit;

namespace {

Complex exact_psi1(const ThreeModeModel& m, double t, const ComplexVector& psi0) {
    return matrix_exponential_apply(evolution_generator(m), t, psi0)[0];
}

Complex assemble(const ThreeModeModel& m, const BlockValues& b, double t, const ComplexVector& psi0) {
    const auto w = effective_frequencies(m);
    const Complex i(0.0, 1.0);
    return (b[0] * psi0[0] + b[1] * psi0[2] + b[2] * psi0[1]) * std::exp(-i * w[0] * t) +
           (b[3] * psi0[0] + b[4] * psi0[2] + b[5] * psi0[1]) * std::exp(-i * w[2] * t) +
           (b[6] * psi0[0] + b[7] * psi0[2] + b[8] * psi0[1]) * std::exp(-i * w[1] * t);
}

}  // namespace

TEST_SUITE("three_mode") {
    TEST_CASE("effective frequencies") {
        const auto m = registry(BenchmarkId::num_ex_m);
        const auto w0 = effective_frequencies(m.at(0.0));
        CHECK(w0 == Frequencies{9, 6, 0});
        const auto w1 = effective_frequencies(m);
        CHECK(w1[0] == doctest::Approx(12.3).epsilon(1e-15));
        CHECK(w1[1] == doctest::Approx(6.0 + 4.0 / 41.0).epsilon(1e-15));
        CHECK(w1[2] == doctest::Approx(16.0 / 15.0).epsilon(1e-15));
        ThreeModeModel flat{{1, 2, 3}, {1, 1, 1}, {0, 0, 0}, 0.7};
        CHECK(effective_frequencies(flat) == Frequencies{1, 2, 3});
    }

    TEST_CASE("coincident frequencies are refused") {
        ThreeModeModel m{{1, 1, 3}, {1, 1, 1}, {0, 0, 0}, 0.5};
        CHECK_THROWS_AS(effective_frequencies(m), DegenerateFrequencies);
        CHECK_THROWS_AS(xyz(m), DegenerateFrequencies);
        CHECK_THROWS_AS(psi1_analytic(m, 1, 1.0, uniform_state()), DegenerateFrequencies);
        // Distinct at eps = 0 but colliding once the diagonal shift is applied.
        ThreeModeModel shifted{{1, 2, 3}, {1, 1, 1}, {2, 0, 0}, 0.5};
        CHECK_THROWS_AS(series_blocks(shifted, 1.0), DegenerateFrequencies);
    }

    TEST_CASE("model validation") {
        ThreeModeModel m = registry(BenchmarkId::num_ex_s);
        m.epsilon = 1.2;
        CHECK_THROWS_AS(m.validate(), InvalidArgument);
        m.epsilon = 0.5;
        m.a[1] = NAN;
        CHECK_THROWS_AS(m.validate(), NonFinite);
    }

    TEST_CASE("coupling ratios reproduce the reference values") {
        for (auto id : experiments::kAllBenchmarks) {
            const auto c = xyz(registry(id));
            const auto pub = experiments::reference_xyz(id);
            CHECK(std::abs(std::abs(c.X) - pub[0]) <= 5e-4);
            CHECK(std::abs(std::abs(c.Y) - pub[1]) <= 5e-4);
            CHECK(std::abs(std::abs(c.Z) - pub[2]) <= 5e-4);
        }
        // X = 80 / ((12.3 - 6.0976)(16/15 - 12.3)) is negative.
        CHECK(xyz(registry(BenchmarkId::num_ex_m)).X < 0.0);
        const auto zero = xyz(registry(BenchmarkId::num_ex_l).at(0.0));
        CHECK(zero.X == 0.0);
        CHECK(zero.Y == 0.0);
        CHECK(zero.Z == 0.0);
    }

    TEST_CASE("coupling ratio cross identity") {
        std::mt19937_64 rng(41);
        for (int trial = 0; trial < 100; ++trial) {
            const auto m = testing_support::random_model(rng, 1.0);
            const auto w = effective_frequencies(m);
            const auto c = xyz(m);
            const double p = m.a[0] * m.a[1] * m.a[2] * std::pow(m.epsilon, 3);
            CHECK(c.X * (w[0] - w[1]) * (w[2] - w[0]) == doctest::Approx(p).epsilon(1e-10));
            CHECK(c.Y * (w[1] - w[2]) * (w[2] - w[0]) == doctest::Approx(p).epsilon(1e-10));
            CHECK(c.Z * (w[0] - w[1]) * (w[1] - w[2]) == doctest::Approx(p).epsilon(1e-10));
        }
    }

    TEST_CASE("generator is the transposed frequency matrix") {
        const auto m = registry(BenchmarkId::num_ex_l);
        const auto o = omega_matrix(m);
        CHECK(evolution_generator(m) == o.transpose());
        CHECK(o(0, 1) == Complex(-6.0));
        CHECK(o(1, 2) == Complex(-7.0));
        CHECK(o(2, 0) == Complex(-5.0));
        const auto sys = perturbed_system(m);
        CHECK(frobenius_norm(sys.full() - evolution_generator(m)) < 1e-15);
    }

    TEST_CASE("low-order closed forms at t = 0") {
        const auto m = registry(BenchmarkId::num_ex_m);
        const ComplexVector psi0{Complex(0.2, 0.1), Complex(-0.4), Complex(0.7, -0.3)};
        CHECK(psi1_analytic(m, 0, 0.0, psi0) == psi0[0]);
        CHECK(std::abs(psi1_analytic(m, 1, 0.0, psi0)) < 1e-15);
        CHECK(std::abs(psi1_analytic(m, 2, 0.0, psi0)) < 1e-14);
        CHECK(std::abs(psi1_analytic(m, 3, 0.0, psi0)) < 1e-14);
        CHECK_THROWS_AS(psi1_analytic(m, 4, 0.5, psi0), InvalidArgument);
        CHECK_THROWS_AS(psi1_analytic(m, 1, 0.5, ComplexVector(2)), DimensionMismatch);
    }

    TEST_CASE("closed forms pick the right initial component") {
        const auto m = registry(BenchmarkId::num_ex_s);
        for (int n = 0; n <= 3; ++n) {
            const int source = (n == 1) ? 2 : (n == 2) ? 1 : 0;
            for (int j = 0; j < 3; ++j) {
                const Complex v = psi1_analytic(m, n, 0.8, unit(j));
                if (j == source)
                    CHECK(std::abs(v) > 0.0);
                else
                    CHECK(v == Complex{});
            }
        }
    }

    TEST_CASE("closed forms match quadrature order by order") {
        for (auto id : {BenchmarkId::num_ex_m, BenchmarkId::num_ex_s}) {
            for (double eps : {0.2, 1.0}) {
                const auto m = registry(id).at(eps);
                const auto sys = perturbed_system(m);
                for (double t : {0.1, 0.5, 1.0, 2.0}) {
                    const auto q = dyson::terms(sys, 3, t, uniform_state(), 4000);
                    for (int n = 0; n <= 3; ++n) {
                        const Complex closed = psi1_analytic(m, n, t, uniform_state());
                        const Complex quad = std::pow(eps, n) * q[n][0];
                        CHECK(std::abs(closed - quad) <= 1e-7 * std::abs(quad));
                    }
                }
            }
        }
    }

    TEST_CASE("third order for the small-coupling benchmark at t = 0.7") {
        const auto m = registry(BenchmarkId::num_ex_s);
        const Complex closed = psi1_analytic(m, 3, 0.7, uniform_state());
        const Complex quad = dyson::term(perturbed_system(m), 3, 0.7, uniform_state(), 4000)[0];
        CHECK(std::abs(closed - quad) <= 1e-7 * std::abs(quad));
    }

    TEST_CASE("blocks without coupling") {
        const auto blocks = series_blocks(registry(BenchmarkId::num_ex_m).at(0.0), 1.3);
        CHECK(blocks[0] == Complex(1.0));
        for (std::size_t i = 1; i < blocks.size(); ++i) CHECK(blocks[i] == Complex{});
        const auto w = effective_frequencies(registry(BenchmarkId::num_ex_m).at(0.0));
        CHECK(std::abs(psi1_infinite(registry(BenchmarkId::num_ex_m).at(0.0), 1.3, unit(0)) -
                       std::exp(Complex(0, -w[0] * 1.3))) < 1e-15);
    }

    TEST_CASE("A3 vanishes without the closing link") {
        ThreeModeModel m = registry(BenchmarkId::num_ex_s);
        m.a[2] = 0.0;
        CHECK(series_block(m, Block::A3, 0.6) == Complex{});
    }

    TEST_CASE("blocks through order nine match the ninth-order Dyson sum") {
        const auto m = registry(BenchmarkId::num_ex_s);
        SeriesTruncation trunc;
        trunc.k_max = 3;
        trunc.max_order = 9;
        for (double t : {0.25, 0.5, 1.0}) {
            const Complex blocks = psi1_infinite(m, t, uniform_state(), trunc);
            const Complex dyson9 = dyson::partial_sum(perturbed_system(m), 9, t, uniform_state(), 4000)[0];
            CHECK(std::abs(blocks - dyson9) <= 1e-5);
            // The explicit assembly agrees with psi1_infinite.
            CHECK(std::abs(assemble(m, series_blocks(m, t, trunc), t, uniform_state()) - blocks) < 1e-14);
        }
    }

    TEST_CASE("resummed solution approaches the exact evolution") {
        const auto m = registry(BenchmarkId::num_ex_s);
        SeriesTruncation trunc;
        trunc.k_max = 4;
        for (double t : {0.25, 0.5, 1.0}) {
            const Complex got = psi1_infinite(m, t, uniform_state(), trunc);
            CHECK(std::abs(got - exact_psi1(m, t, uniform_state())) <= 5e-4);
        }
    }

    TEST_CASE("residual against the exact evolution falls with each shell") {
        const auto m = registry(BenchmarkId::num_ex_s);
        double previous = 1e300;
        for (int k = 1; k <= 4; ++k) {
            SeriesTruncation trunc;
            trunc.k_max = k;
            trunc.shell_tol = std::numeric_limits<double>::infinity();
            double worst = 0.0;
            for (double t : {0.25, 0.5, 0.75, 1.0})
                worst = std::max(worst, std::abs(psi1_infinite(m, t, uniform_state(), trunc) -
                                                 exact_psi1(m, t, uniform_state())));
            CHECK(worst < previous);
            previous = worst;
        }
        CHECK(previous <= 5e-4);
        // With the default guard the first shell alone is rejected as too coarse.
        SeriesTruncation coarse;
        coarse.k_max = 1;
        CHECK_THROWS_AS(psi1_infinite(m, 1.0, uniform_state(), coarse), TruncationNotConverged);
    }

    TEST_CASE("initial condition is recovered at t = 0") {
        for (auto m : {registry(BenchmarkId::num_ex_s), registry(BenchmarkId::num_ex_m).at(0.3),
                       registry(BenchmarkId::num_ex_l).at(0.1)}) {
            const ComplexVector psi0{Complex(0.6), Complex(0.0, 0.48), Complex(-0.64)};
            CHECK(std::abs(psi1_infinite(m, 0.0, psi0) - psi0[0]) <= 10 * SeriesTruncation{}.tail_tol);
        }
    }

    TEST_CASE("non-convergent shells are reported") {
        CHECK_THROWS_AS(psi1_infinite(registry(BenchmarkId::num_ex_m), 1.0, uniform_state()), TruncationNotConverged);
    }

    TEST_CASE("cyclic relabeling") {
        const auto m = registry(BenchmarkId::num_ex_m);
        const auto id = cyclic_view(m, Target::psi1);
        CHECK(id.index_map == std::array<std::size_t, 3>{0, 1, 2});
        const auto v3 = cyclic_view(m, Target::psi3);
        CHECK(v3.index_map == std::array<std::size_t, 3>{2, 0, 1});
        CHECK(xyz(v3.model).X == doctest::Approx(xyz(m).Y).epsilon(1e-12));
        const auto v2 = cyclic_view(m, Target::psi2);
        CHECK(xyz(v2.model).X == doctest::Approx(xyz(m).Z).epsilon(1e-12));
        // The psi1 machinery on a view computes the target component of the original.
        const ComplexVector psi0{Complex(0.6), Complex(0.0, 0.48), Complex(-0.64)};
        const auto small = m.at(0.3);
        const auto full = matrix_exponential_apply(evolution_generator(small), 0.7, psi0);
        for (auto [target, index] : {std::pair{Target::psi3, 2}, std::pair{Target::psi2, 1}}) {
            const auto view = cyclic_view(small, target);
            const auto relabeled = view.relabel(psi0);
            const Complex first = matrix_exponential_apply(evolution_generator(view.model), 0.7, relabeled)[0];
            CHECK(std::abs(first - full[index]) < 1e-13);
        }
    }

    TEST_CASE("model JSON round trip") {
        const auto m = registry(BenchmarkId::num_ex_s);
        const auto back = model_from_json(model_to_json(m));
        CHECK(back.omega == m.omega);
        CHECK(back.a == m.a);
        CHECK(back.d == m.d);
        CHECK(back.epsilon == m.epsilon);
        CHECK_THROWS_AS(model_from_json(R"({"omega":[1,2],"a":[1,1,1],"d":[0,0,0],"epsilon":0.1})"), InvalidArgument);
        CHECK_THROWS_AS(model_from_json("[]"), InvalidArgument);
    }
}
