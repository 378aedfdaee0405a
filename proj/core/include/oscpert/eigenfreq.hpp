#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "oscpert/three_mode.hpp"

namespace oscpert::eigenfreq {

enum class EstimateLevel { app0 = 0, app1 = 1, app2 = 2 };
inline constexpr std::array<EstimateLevel, 3> kAllLevels{EstimateLevel::app0, EstimateLevel::app1,
                                                         EstimateLevel::app2};
std::string_view level_name(EstimateLevel level);

/// Perturbative estimate of the eigenfrequency of mode `which` (1, 2 or 3).
double estimate(const three_mode::ThreeModeModel& m, int which, EstimateLevel level);

/// The correction added by a level: app0 -> W, app1 -> the W^2 terms, app2 -> the W^3 and W^4 terms.
double level_increment(const three_mode::ThreeModeModel& m, int which, EstimateLevel level);

constexpr double kContinuationStep = 0.005;

/// Eigenvalues of Omega(eps) assigned to modes 1..3 (index 0..2) by continuation from eps = 0.
std::array<Complex, 3> true_eigenfrequencies(const three_mode::ThreeModeModel& m,
                                             double max_step = kContinuationStep);

/// |Im lambda| > 1e-8 (1 + |lambda|).
bool is_nonreal(Complex lambda);
bool spectrum_is_real(const three_mode::ThreeModeModel& m);

/// Onset of non-real eigenfrequencies by bisection; throws NoTransition if the
/// reality predicate agrees at both ends of the bracket.
double transition_epsilon(const three_mode::ThreeModeModel& m, double eps_lo, double eps_hi, double tol = 1e-10);

struct EigenfrequencyReport {
    double epsilon = 0.0;
    std::array<Complex, 3> true_values{};
    /// estimates[mode][level]
    std::array<std::array<double, 3>, 3> estimates{};
    /// |Re true - estimate|, present only for modes with a real true value.
    std::array<std::array<std::optional<double>, 3>, 3> abs_errors{};
    std::array<bool, 3> mode_real{};
    bool real_spectrum = false;
};

EigenfrequencyReport report(const three_mode::ThreeModeModel& m, double eps);

}  // namespace oscpert::eigenfreq
