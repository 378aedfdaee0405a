#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "oscpert/linalg.hpp"

namespace oscpert::dyson {

/// Omega(eps) = diag(omega0) + eps * omegaI.
struct PerturbedSystem {
    std::vector<double> omega0;
    ComplexMatrix omegaI;
    double epsilon = 0.0;

    void validate() const;
    ComplexMatrix full() const;
};

constexpr std::size_t kDefaultSteps = 2000;

/// Coefficient of eps^n in the expansion of psi(t), n = 0..max_order, all from one pass.
std::vector<ComplexVector> terms(const PerturbedSystem& sys, std::size_t max_order, double t,
                                 const ComplexVector& psi0, std::size_t steps = kDefaultSteps);

/// Coefficient of eps^n. Independent of sys.epsilon.
ComplexVector term(const PerturbedSystem& sys, std::size_t n, double t, const ComplexVector& psi0,
                   std::size_t steps = kDefaultSteps);

/// Sum over n <= max_order of eps^n * term(n).
ComplexVector partial_sum(const PerturbedSystem& sys, std::size_t max_order, double t,
                          const ComplexVector& psi0, std::size_t steps = kDefaultSteps);

struct ResidualRow {
    std::size_t order = 0;
    double epsilon = 0.0;
    double residual = 0.0;
};

struct ConvergenceReport {
    std::vector<ResidualRow> rows;
    /// Residual strictly decreasing along the supplied order list, per epsilon.
    std::map<double, bool> monotone;

    std::string to_csv() const;
};

/// ||partial_sum - exact evolution||_2 for every (order, eps) pair.
ConvergenceReport convergence_report(const PerturbedSystem& sys, double t, const ComplexVector& psi0,
                                     const std::vector<std::size_t>& orders,
                                     const std::vector<double>& eps_grid,
                                     std::size_t steps = kDefaultSteps);

}  // namespace oscpert::dyson
