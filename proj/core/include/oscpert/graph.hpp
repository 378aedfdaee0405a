#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "oscpert/linalg.hpp"

namespace oscpert::graph {

struct Edge {
    std::size_t src = 0;
    std::size_t dst = 0;
    double weight = 0.0;
};

/// Directed graph with positive link weights, 0-based node indices.
struct WeightedDigraph {
    std::size_t n = 0;
    std::vector<Edge> edges;

    /// Throws InvalidArgument on out-of-range nodes, self-loops, repeated
    /// ordered pairs or non-positive weights.
    void validate() const;
};

/// L = L0 + LI with L0 symmetrizable and LI one-way.
struct LaplacianDecomposition {
    RealMatrix L;
    RealMatrix L0;
    RealMatrix LI;
    /// Balance weights m with m_i L0[i][j] = m_j L0[j][i].
    std::optional<std::vector<double>> scaling;
};

struct Explicit {
    RealMatrix LI;
};
struct PairwiseMin {};
using DecomposeMode = std::variant<Explicit, PairwiseMin>;

constexpr double kCertificateTol = 1e-9;
constexpr double kIdentityTol = 1e-12;

RealMatrix laplacian(const WeightedDigraph& g);

/// Balance weights over a spanning forest of the symmetrized support,
/// normalized so each connected component has minimum 1.
/// Throws NotSymmetrizable with a witness cycle when a constraint fails.
std::vector<double> symmetrizability_certificate(const RealMatrix& L0, double tol = kCertificateTol);

LaplacianDecomposition decompose(const RealMatrix& L, const DecomposeMode& mode);

/// Checks every decomposition invariant; returns an empty string when all hold,
/// otherwise a description of the first violation.
std::string check_invariants(const LaplacianDecomposition& d, double tol = kIdentityTol);

/// diag(sqrt(m)) * L0 * diag(sqrt(m))^-1 is symmetric within tol (relative to max |L0|).
bool similarity_is_symmetric(const RealMatrix& L0, const std::vector<double>& m, double tol = 1e-10);

WeightedDigraph graph_from_json(const std::string& text);
std::string graph_to_json(const WeightedDigraph& g);
RealMatrix matrix_from_json(const std::string& text);
std::string matrix_to_json(const RealMatrix& m);
std::string decomposition_to_json(const LaplacianDecomposition& d);

}  // namespace oscpert::graph
