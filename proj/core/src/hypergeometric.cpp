#include "oscpert/hypergeometric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace oscpert {

namespace {

std::int64_t binomial_nonneg(std::int64_t n, std::int64_t k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::int64_t r = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        // r * (n - k + i) is divisible by i; split the division so nothing overflows early.
        const std::int64_t g = std::gcd(r, i);
        const std::int64_t factor = (n - k + i) / (i / g);
        if (__builtin_mul_overflow(r / g, factor, &r))
            throw std::overflow_error("neg_binomial: value exceeds 64-bit range");
    }
    return r;
}

bool non_positive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

struct Prepared {
    std::vector<double> a;
    std::vector<double> b;
    std::optional<std::size_t> last_index;  // set when an upper parameter terminates the series
};

Prepared prepare(std::vector<double> a, std::vector<double> b, Complex z) {
    for (double x : a)
        if (!std::isfinite(x)) throw InvalidArgument("hyp_pfq: non-finite upper parameter");
    for (double x : b)
        if (!std::isfinite(x)) throw InvalidArgument("hyp_pfq: non-finite lower parameter");
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw InvalidArgument("hyp_pfq: non-finite argument");
    for (auto it = a.begin(); it != a.end();) {
        auto match = std::find(b.begin(), b.end(), *it);
        if (match != b.end()) {
            b.erase(match);
            it = a.erase(it);
        } else {
            ++it;
        }
    }
    Prepared p{std::move(a), std::move(b), std::nullopt};
    for (double x : p.a)
        if (non_positive_integer(x)) {
            const auto m = static_cast<std::size_t>(-x);
            p.last_index = p.last_index ? std::min(*p.last_index, m) : m;
        }
    for (double x : p.b)
        if (non_positive_integer(x)) {
            const auto pole = static_cast<std::size_t>(-x);
            if (!p.last_index || *p.last_index > pole)
                throw InvalidLowerParameter("hyp_pfq: lower parameter " + std::to_string(x) +
                                            " is a non-positive integer");
        }
    return p;
}

Complex ratio(const Prepared& p, std::size_t l, Complex z) {
    const double dl = static_cast<double>(l);
    Complex r = z / (dl + 1.0);
    for (double x : p.a) r *= x + dl;
    for (double x : p.b) r /= x + dl;
    return r;
}

}  // namespace

void SeriesTruncation::validate() const {
    if (k_max < 1) throw InvalidArgument("SeriesTruncation: k_max must be at least 1");
    if (!(tail_tol > 0.0)) throw InvalidArgument("SeriesTruncation: tail_tol must be positive");
    if (max_terms_per_hyp == 0) throw InvalidArgument("SeriesTruncation: max_terms_per_hyp must be positive");
    if (!(shell_tol > 0.0)) throw InvalidArgument("SeriesTruncation: shell_tol must be positive");
    if (max_order && *max_order < 0) throw InvalidArgument("SeriesTruncation: max_order must be non-negative");
}

std::int64_t neg_binomial(std::int64_t n, std::int64_t k) {
    if (n >= 0) return binomial_nonneg(n, k);
    if (k >= 0) return (k % 2 ? -1 : 1) * binomial_nonneg(k - n - 1, k);
    if (k <= n) return ((n - k) % 2 ? -1 : 1) * binomial_nonneg(-k - 1, n - k);
    return 0;
}

Complex hyp_pfq(std::vector<double> a_params, std::vector<double> b_params, Complex z,
                const SeriesTruncation& trunc) {
    if (!(trunc.tail_tol > 0.0) || trunc.max_terms_per_hyp == 0)
        throw InvalidArgument("hyp_pfq: invalid truncation settings");
    const Prepared p = prepare(std::move(a_params), std::move(b_params), z);
    Complex partial{};
    Complex term = 1.0;
    int small = 0;
    for (std::size_t l = 0;; ++l) {
        partial += term;
        if (p.last_index && l == *p.last_index) return partial;
        small = (std::abs(term) < trunc.tail_tol * std::abs(partial)) ? small + 1 : 0;
        if (small >= 3) return partial;
        if (l + 1 >= trunc.max_terms_per_hyp)
            throw MaxTermsExceeded("hyp_pfq: series did not settle within the term budget", partial, term);
        term *= ratio(p, l, z);
        if (term == Complex{}) return partial;
        if (!std::isfinite(term.real()) || !std::isfinite(term.imag()))
            throw NonFinite("hyp_pfq: term overflow");
    }
}

Complex hyp_pfq_polynomial(std::vector<double> a_params, std::vector<double> b_params, Complex z,
                           std::size_t degree) {
    const Prepared p = prepare(std::move(a_params), std::move(b_params), z);
    const std::size_t last = p.last_index ? std::min(*p.last_index, degree) : degree;
    Complex partial{};
    Complex term = 1.0;
    for (std::size_t l = 0; l <= last; ++l) {
        partial += term;
        if (l < last) term *= ratio(p, l, z);
    }
    return partial;
}

}  // namespace oscpert
