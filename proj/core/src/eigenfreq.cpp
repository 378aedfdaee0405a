#include "oscpert/eigenfreq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oscpert::eigenfreq {

namespace {

using three_mode::ThreeModeModel;

struct ModeFrame {
    double self;  // omega' of the mode
    double a;     // "previous" gap: omega3' - omega1' for mode 1
    double b;     // "next" gap: omega1' - omega2' for mode 1
    double w;     // X, Z or Y
};

// Mode 1 uses (w1, w2, w3, X); the others follow the cyclic relabeling 1 -> 3 -> 2 -> 1.
ModeFrame frame(const ThreeModeModel& m, int which) {
    const auto f = three_mode::effective_frequencies(m);
    const auto c = three_mode::xyz(m);
    switch (which) {
        case 1:
            return {f[0], f[2] - f[0], f[0] - f[1], c.X};
        case 2:
            return {f[1], f[0] - f[1], f[1] - f[2], c.Z};
        case 3:
            return {f[2], f[1] - f[2], f[2] - f[0], c.Y};
        default:
            throw InvalidArgument("estimate: mode must be 1, 2 or 3");
    }
}

double increment(const ModeFrame& fr, EstimateLevel level) {
    const double w = fr.w, a = fr.a, b = fr.b;
    switch (level) {
        case EstimateLevel::app0:
            return w;
        case EstimateLevel::app1:
            return w * w / a - w * w / b;
        case EstimateLevel::app2: {
            const double w3 = w * w * w;
            const double w4 = w3 * w;
            return 2.0 * w3 / (a * a) - 3.0 * w3 / (a * b) + 2.0 * w3 / (b * b) + 10.0 * w4 / (3.0 * a * a * a) -
                   10.0 * w4 / (a * a * b) + 10.0 * w4 / (a * b * b) - 10.0 * w4 / (3.0 * b * b * b);
        }
    }
    return 0.0;
}

}  // namespace

std::string_view level_name(EstimateLevel level) {
    switch (level) {
        case EstimateLevel::app0:
            return "app0";
        case EstimateLevel::app1:
            return "app1";
        case EstimateLevel::app2:
            return "app2";
    }
    return "?";
}

double level_increment(const ThreeModeModel& m, int which, EstimateLevel level) {
    return increment(frame(m, which), level);
}

double estimate(const ThreeModeModel& m, int which, EstimateLevel level) {
    const ModeFrame fr = frame(m, which);
    double v = fr.self;
    for (auto l : kAllLevels) {
        if (static_cast<int>(l) > static_cast<int>(level)) break;
        v += increment(fr, l);
    }
    return v;
}

std::array<Complex, 3> true_eigenfrequencies(const ThreeModeModel& m, double max_step) {
    m.validate();
    if (!(max_step > 0.0)) throw InvalidArgument("true_eigenfrequencies: step must be positive");
    std::array<Complex, 3> cur{m.omega[0], m.omega[1], m.omega[2]};
    const double eps = m.epsilon;
    if (eps == 0.0) return cur;
    const auto steps = static_cast<std::size_t>(std::ceil(eps / max_step));
    std::array<std::size_t, 3> perm{0, 1, 2};
    for (std::size_t i = 1; i <= steps; ++i) {
        const double e = (i == steps) ? eps : eps * static_cast<double>(i) / static_cast<double>(steps);
        const auto lambda = eigenvalues(three_mode::omega_matrix(m.at(e)));
        std::array<std::size_t, 3> p{0, 1, 2};
        std::array<std::size_t, 3> best = p;
        double best_cost = std::numeric_limits<double>::infinity();
        do {
            double cost = 0.0;
            for (std::size_t j = 0; j < 3; ++j) cost += std::abs(lambda[p[j]] - cur[j]);
            if (cost < best_cost) {
                best_cost = cost;
                best = p;
            }
        } while (std::next_permutation(p.begin(), p.end()));
        perm = best;
        for (std::size_t j = 0; j < 3; ++j) cur[j] = lambda[perm[j]];
    }
    return cur;
}

bool is_nonreal(Complex lambda) { return std::abs(lambda.imag()) > 1e-8 * (1.0 + std::abs(lambda)); }

bool spectrum_is_real(const ThreeModeModel& m) {
    for (const auto& z : eigenvalues(three_mode::omega_matrix(m)))
        if (is_nonreal(z)) return false;
    return true;
}

double transition_epsilon(const ThreeModeModel& m, double eps_lo, double eps_hi, double tol) {
    if (!(eps_lo < eps_hi)) throw InvalidArgument("transition_epsilon: bracket must satisfy eps_lo < eps_hi");
    if (eps_lo < 0.0 || eps_hi > 1.0) throw InvalidArgument("transition_epsilon: bracket must lie in [0, 1]");
    if (!(tol > 0.0)) throw InvalidArgument("transition_epsilon: tol must be positive");
    const bool real_lo = spectrum_is_real(m.at(eps_lo));
    const bool real_hi = spectrum_is_real(m.at(eps_hi));
    if (real_lo == real_hi) throw NoTransition("transition_epsilon: spectrum reality does not change on the bracket");
    double lo = eps_lo, hi = eps_hi;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (spectrum_is_real(m.at(mid)) == real_lo)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

EigenfrequencyReport report(const ThreeModeModel& m, double eps) {
    const ThreeModeModel at = m.at(eps);
    EigenfrequencyReport r;
    r.epsilon = eps;
    r.true_values = true_eigenfrequencies(at);
    r.real_spectrum = true;
    for (int mode = 0; mode < 3; ++mode) {
        r.mode_real[mode] = !is_nonreal(r.true_values[mode]);
        r.real_spectrum = r.real_spectrum && r.mode_real[mode];
        for (auto level : kAllLevels) {
            const auto li = static_cast<std::size_t>(level);
            r.estimates[mode][li] = estimate(at, mode + 1, level);
            if (r.mode_real[mode]) r.abs_errors[mode][li] = std::abs(r.true_values[mode].real() - r.estimates[mode][li]);
        }
    }
    return r;
}

}  // namespace oscpert::eigenfreq
