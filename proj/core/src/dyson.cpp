#include "oscpert/dyson.hpp"

#include <cmath>
#include <sstream>

#include "oscpert/format.hpp"

namespace oscpert::dyson {

namespace {

using Trajectory = std::vector<ComplexVector>;

// Running integral F(s_j) = int_0^{s_j} f on a uniform grid with N >= 3 intervals.
// Even nodes: composite Simpson. Odd nodes: Simpson up to s_{j-3}, then the 3/8 rule.
// Node 1: cubic through the first four samples.
Trajectory cumulative_integral(const Trajectory& f, double h) {
    const std::size_t last = f.size() - 1;
    const std::size_t dim = f[0].size();
    Trajectory out(f.size(), ComplexVector(dim, Complex{}));
    for (std::size_t k = 0; k < dim; ++k) {
        out[1][k] = h / 24.0 * (9.0 * f[0][k] + 19.0 * f[1][k] - 5.0 * f[2][k] + f[3][k]);
        for (std::size_t j = 2; j <= last; j += 2)
            out[j][k] = out[j - 2][k] + h / 3.0 * (f[j - 2][k] + 4.0 * f[j - 1][k] + f[j][k]);
        for (std::size_t j = 3; j <= last; j += 2)
            out[j][k] = out[j - 3][k] +
                        3.0 * h / 8.0 * (f[j - 3][k] + 3.0 * f[j - 2][k] + 3.0 * f[j - 1][k] + f[j][k]);
    }
    return out;
}

void check_inputs(const PerturbedSystem& sys, std::size_t max_order, double t, const ComplexVector& psi0,
                  std::size_t steps) {
    sys.validate();
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidArgument("dyson: t must be finite and non-negative");
    if (psi0.size() != sys.omega0.size()) throw DimensionMismatch("dyson: psi0 length");
    if (steps < 10 * max_order || (max_order > 0 && steps < 3))
        throw ResolutionTooCoarse("dyson: order " + std::to_string(max_order) + " needs at least " +
                                  std::to_string(10 * max_order) + " steps");
}

}  // namespace

void PerturbedSystem::validate() const {
    if (omegaI.rows() != omega0.size() || omegaI.cols() != omega0.size())
        throw DimensionMismatch("PerturbedSystem: omega0 length must match omegaI dimension");
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw InvalidArgument("PerturbedSystem: epsilon must lie in [0, 1]");
    for (double w : omega0)
        if (!std::isfinite(w)) throw NonFinite("PerturbedSystem: non-finite omega0");
    for (const auto& z : omegaI.data())
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw NonFinite("PerturbedSystem: non-finite omegaI");
}

ComplexMatrix PerturbedSystem::full() const {
    ComplexMatrix m = Complex(epsilon) * omegaI;
    for (std::size_t i = 0; i < omega0.size(); ++i) m(i, i) += omega0[i];
    return m;
}

std::vector<ComplexVector> terms(const PerturbedSystem& sys, std::size_t max_order, double t,
                                 const ComplexVector& psi0, std::size_t steps) {
    check_inputs(sys, max_order, t, psi0, steps);
    const std::size_t dim = psi0.size();
    std::vector<ComplexVector> out;
    auto rotate = [&](const ComplexVector& phi, double s) {
        ComplexVector v(dim);
        for (std::size_t k = 0; k < dim; ++k) v[k] = std::polar(1.0, -sys.omega0[k] * s) * phi[k];
        return v;
    };
    out.push_back(rotate(psi0, t));
    if (max_order == 0) return out;

    const std::size_t nodes = steps + 1;
    const double h = t / static_cast<double>(steps);
    // phase[j][k] = exp(-i omega0_k s_j)
    std::vector<ComplexVector> phase(nodes, ComplexVector(dim));
    for (std::size_t j = 0; j < nodes; ++j)
        for (std::size_t k = 0; k < dim; ++k)
            phase[j][k] = std::polar(1.0, -sys.omega0[k] * (static_cast<double>(j) * h));
    const ComplexMatrix coupling = Complex(0.0, -1.0) * sys.omegaI;

    // Interaction picture: phi^(n)(s) = int_0^s V(u) phi^(n-1)(u) du,
    // V(u) = exp(i Omega0 u) (-i OmegaI) exp(-i Omega0 u).
    Trajectory phi(nodes, psi0);
    Trajectory integrand(nodes, ComplexVector(dim));
    for (std::size_t n = 1; n <= max_order; ++n) {
        for (std::size_t j = 0; j < nodes; ++j) {
            ComplexVector g(dim);
            for (std::size_t k = 0; k < dim; ++k) g[k] = phase[j][k] * phi[j][k];
            const ComplexVector u = coupling * g;
            for (std::size_t k = 0; k < dim; ++k) integrand[j][k] = std::conj(phase[j][k]) * u[k];
        }
        phi = cumulative_integral(integrand, h);
        ComplexVector psi(dim);
        for (std::size_t k = 0; k < dim; ++k) psi[k] = phase[steps][k] * phi[steps][k];
        out.push_back(std::move(psi));
    }
    return out;
}

ComplexVector term(const PerturbedSystem& sys, std::size_t n, double t, const ComplexVector& psi0,
                   std::size_t steps) {
    return terms(sys, n, t, psi0, steps).back();
}

ComplexVector partial_sum(const PerturbedSystem& sys, std::size_t max_order, double t,
                          const ComplexVector& psi0, std::size_t steps) {
    const auto all = terms(sys, max_order, t, psi0, steps);
    ComplexVector sum(psi0.size(), Complex{});
    double weight = 1.0;
    for (const auto& v : all) {
        for (std::size_t k = 0; k < v.size(); ++k) sum[k] += weight * v[k];
        weight *= sys.epsilon;
    }
    return sum;
}

ConvergenceReport convergence_report(const PerturbedSystem& sys, double t, const ComplexVector& psi0,
                                     const std::vector<std::size_t>& orders,
                                     const std::vector<double>& eps_grid, std::size_t steps) {
    if (orders.empty() || eps_grid.empty()) throw InvalidArgument("convergence_report: empty grid");
    std::size_t top = 0;
    for (auto o : orders) top = std::max(top, o);
    const auto all = terms(sys, top, t, psi0, steps);

    ConvergenceReport report;
    for (double eps : eps_grid) {
        PerturbedSystem at = sys;
        at.epsilon = eps;
        at.validate();
        const ComplexVector exact = matrix_exponential_apply(at.full(), t, psi0);
        std::vector<ComplexVector> sums;
        ComplexVector sum(psi0.size(), Complex{});
        double weight = 1.0;
        for (const auto& v : all) {
            for (std::size_t k = 0; k < v.size(); ++k) sum[k] += weight * v[k];
            weight *= eps;
            sums.push_back(sum);
        }
        bool monotone = true;
        double previous = 0.0;
        for (std::size_t i = 0; i < orders.size(); ++i) {
            const double r = norm2(sums[orders[i]] - exact);
            if (i > 0 && !(r < previous)) monotone = false;
            previous = r;
            report.rows.push_back({orders[i], eps, r});
        }
        report.monotone[eps] = monotone;
    }
    return report;
}

std::string ConvergenceReport::to_csv() const {
    std::ostringstream out;
    out << "order,epsilon,residual\n";
    for (const auto& r : rows) out << r.order << ',' << format_real(r.epsilon) << ',' << format_real(r.residual) << '\n';
    return out.str();
}

}  // namespace oscpert::dyson
