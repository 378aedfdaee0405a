#pragma once

#include <cmath>
#include <random>

#include "oscpert/three_mode.hpp"

namespace testing_support {

using oscpert::Complex;
using oscpert::ComplexMatrix;
using oscpert::ComplexVector;
using oscpert::three_mode::ThreeModeModel;

inline ComplexVector uniform_state() { return ComplexVector(3, Complex(1.0 / std::sqrt(3.0), 0.0)); }

inline ComplexVector unit(std::size_t i, std::size_t n = 3) {
    ComplexVector v(n, Complex{});
    v[i] = 1.0;
    return v;
}

// Random model whose effective frequencies stay at least `min_gap` apart.
inline ThreeModeModel random_model(std::mt19937_64& rng, double eps_max = 0.3, double min_gap = 0.5) {
    std::uniform_real_distribution<double> om(0.0, 12.0), cp(0.5, 7.0), dg(0.0, 3.5), ep(0.0, eps_max);
    for (;;) {
        ThreeModeModel m;
        for (int i = 0; i < 3; ++i) {
            m.omega[i] = om(rng);
            m.a[i] = cp(rng);
            m.d[i] = dg(rng);
        }
        m.epsilon = ep(rng);
        bool ok = true;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) {
                const double wi = m.omega[i] + m.epsilon * m.d[i];
                const double wj = m.omega[j] + m.epsilon * m.d[j];
                ok = ok && std::abs(wi - wj) >= min_gap;
            }
        if (ok) return m;
    }
}

inline ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t n, double scale = 1.0, bool real = false) {
    std::normal_distribution<double> g(0.0, scale);
    ComplexMatrix m(n, n);
    for (auto& z : m.data()) z = Complex(g(rng), real ? 0.0 : g(rng));
    return m;
}

}  // namespace testing_support
