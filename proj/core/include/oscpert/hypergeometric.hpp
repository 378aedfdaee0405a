#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "oscpert/linalg.hpp"

namespace oscpert {

/// Truncation controls for the infinite-order series.
struct SeriesTruncation {
    /// Outer shell index k runs 0..k_max.
    int k_max = 3;
    /// A pFq sum stops after three consecutive terms below tail_tol * |partial|.
    double tail_tol = 1e-15;
    std::size_t max_terms_per_hyp = 500;
    /// TruncationNotConverged when the last shell exceeds shell_tol * |block|.
    double shell_tol = 1e-2;
    /// When set, every block keeps exactly the terms of total order eps^n with n <= max_order.
    std::optional<int> max_order;

    void validate() const;
};

/// Binomial coefficient extended to negative arguments:
/// C(n,k) = (-1)^k C(k-n-1, k) for n < 0 <= k, (-1)^(n-k) C(-k-1, n-k) for k <= n < 0.
std::int64_t neg_binomial(std::int64_t n, std::int64_t k);

/// Generalized hypergeometric series sum_l prod (a)_l / prod (b)_l * z^l / l!.
/// Identical upper/lower parameter pairs cancel before anything else; a zero or
/// negative-integer upper parameter terminates the series.
Complex hyp_pfq(std::vector<double> a_params, std::vector<double> b_params, Complex z,
                const SeriesTruncation& trunc = {});

/// Same series cut after the z^degree term (exact polynomial, no tail test).
Complex hyp_pfq_polynomial(std::vector<double> a_params, std::vector<double> b_params, Complex z,
                           std::size_t degree);

}  // namespace oscpert
