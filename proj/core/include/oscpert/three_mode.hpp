#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "oscpert/dyson.hpp"
#include "oscpert/hypergeometric.hpp"
#include "oscpert/linalg.hpp"

namespace oscpert::three_mode {

/// Three oscillation modes coupled in a cycle:
/// Omega(eps) = diag(omega + eps*d) + eps*N with N[0][1] = -a1, N[1][2] = -a2, N[2][0] = -a3.
struct ThreeModeModel {
    std::array<double, 3> omega{};
    std::array<double, 3> a{};
    std::array<double, 3> d{};
    double epsilon = 0.0;

    void validate() const;
    ThreeModeModel at(double eps) const;
};

using Frequencies = std::array<double, 3>;

/// Minimum allowed gap between effective frequencies, relative to max |omega'|.
constexpr double kGapFactor = 1e-6;

/// omega' = omega + eps*d; throws DegenerateFrequencies when two are closer than the gap.
Frequencies effective_frequencies(const ThreeModeModel& m, double gap_factor = kGapFactor);

struct XYZ {
    double X = 0.0;
    double Y = 0.0;
    double Z = 0.0;
};

/// Cyclic coupling ratios a1 a2 a3 eps^3 over products of effective-frequency gaps.
XYZ xyz(const ThreeModeModel& m);

/// Omega(eps) in the row layout above; its eigenvalues are the eigenfrequencies.
ComplexMatrix omega_matrix(const ThreeModeModel& m);

/// Generator whose evolution exp(-i G t) psi0 the closed forms describe: Omega(eps)^T,
/// so psi1 is fed by psi3 through a3, psi3 by psi2 through a2 and psi2 by psi1 through a1.
ComplexMatrix evolution_generator(const ThreeModeModel& m);

/// diag(omega') as the unperturbed part and N^T as the unit-strength coupling.
dyson::PerturbedSystem perturbed_system(const ThreeModeModel& m);

/// eps^n psi1^(n)(t) for n = 0..3 in closed form.
Complex psi1_analytic(const ThreeModeModel& m, int n, double t, const ComplexVector& psi0);

enum class Block { A1, A3, A2, B1, B3, B2, C1, C3, C2 };
inline constexpr std::array<Block, 9> kAllBlocks{Block::A1, Block::A3, Block::A2, Block::B1, Block::B3,
                                                 Block::B2, Block::C1, Block::C3, Block::C2};
std::string_view block_name(Block b);

using BlockValues = std::array<Complex, 9>;  // indexed in kAllBlocks order

/// All nine resummed blocks at time t.
BlockValues series_blocks(const ThreeModeModel& m, double t, const SeriesTruncation& trunc = {});
Complex series_block(const ThreeModeModel& m, Block block, double t, const SeriesTruncation& trunc = {});

/// psi1(t) = (A1 psi1 + A3 psi3 + A2 psi2) e^{-i w1' t} + (B...) e^{-i w3' t} + (C...) e^{-i w2' t}.
Complex psi1_infinite(const ThreeModeModel& m, double t, const ComplexVector& psi0,
                      const SeriesTruncation& trunc = {});

enum class Target { psi1, psi3, psi2 };

struct CyclicView {
    ThreeModeModel model;
    /// Position i of the view holds original mode index_map[i] (0-based).
    std::array<std::size_t, 3> index_map{};

    ComplexVector relabel(const ComplexVector& psi) const;
};

/// Relabels the model so the psi1 machinery computes the target mode.
CyclicView cyclic_view(const ThreeModeModel& m, Target target);

std::string model_to_json(const ThreeModeModel& m);
ThreeModeModel model_from_json(const std::string& text);

}  // namespace oscpert::three_mode
