#include "oscpert/three_mode.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace oscpert::three_mode {

namespace {

using json = nlohmann::json;

double sign_pow(int e) { return (e % 2 == 0) ? 1.0 : -1.0; }

double binom(int n, int k) { return static_cast<double>(neg_binomial(n, k)); }

struct Gaps {
    double w1, w2, w3;
    double d31, d12, d23;
};

Gaps gaps(const ThreeModeModel& m) {
    const auto w = effective_frequencies(m);
    return {w[0], w[1], w[2], w[2] - w[0], w[0] - w[1], w[1] - w[2]};
}

void require_psi0(const ComplexVector& psi0) {
    if (psi0.size() != 3) throw DimensionMismatch("three-mode state must have 3 components");
}

template <typename T>
std::array<T, 3> permute(const std::array<T, 3>& v, const std::array<std::size_t, 3>& map) {
    return {v[map[0]], v[map[1]], v[map[2]]};
}

}  // namespace

void ThreeModeModel::validate() const {
    for (const auto* arr : {&omega, &a, &d})
        for (double x : *arr)
            if (!std::isfinite(x)) throw NonFinite("ThreeModeModel: non-finite parameter");
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw InvalidArgument("ThreeModeModel: epsilon must lie in [0, 1]");
}

ThreeModeModel ThreeModeModel::at(double eps) const {
    ThreeModeModel m = *this;
    m.epsilon = eps;
    return m;
}

Frequencies effective_frequencies(const ThreeModeModel& m, double gap_factor) {
    m.validate();
    Frequencies w{};
    double top = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        w[i] = m.omega[i] + m.epsilon * m.d[i];
        top = std::max(top, std::abs(w[i]));
    }
    const double delta = gap_factor * top;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j) {
            const double gap = std::abs(w[i] - w[j]);
            if (gap < delta || gap == 0.0)
                throw DegenerateFrequencies("effective frequencies " + std::to_string(i + 1) + " and " +
                                            std::to_string(j + 1) + " coincide");
        }
    return w;
}

XYZ xyz(const ThreeModeModel& m) {
    const Gaps g = gaps(m);
    const double e = m.epsilon;
    const double p = m.a[0] * m.a[1] * m.a[2] * e * e * e;
    return {p / (g.d12 * g.d31), p / (g.d23 * g.d31), p / (g.d12 * g.d23)};
}

ComplexMatrix omega_matrix(const ThreeModeModel& m) {
    m.validate();
    const double e = m.epsilon;
    ComplexMatrix o(3, 3);
    for (std::size_t i = 0; i < 3; ++i) o(i, i) = m.omega[i] + e * m.d[i];
    o(0, 1) = -e * m.a[0];
    o(1, 2) = -e * m.a[1];
    o(2, 0) = -e * m.a[2];
    return o;
}

ComplexMatrix evolution_generator(const ThreeModeModel& m) { return omega_matrix(m).transpose(); }

dyson::PerturbedSystem perturbed_system(const ThreeModeModel& m) {
    const auto w = effective_frequencies(m);
    dyson::PerturbedSystem sys;
    sys.omega0.assign(w.begin(), w.end());
    sys.omegaI = ComplexMatrix(3, 3);
    sys.omegaI(1, 0) = -m.a[0];
    sys.omegaI(2, 1) = -m.a[1];
    sys.omegaI(0, 2) = -m.a[2];
    sys.epsilon = m.epsilon;
    return sys;
}

Complex psi1_analytic(const ThreeModeModel& m, int n, double t, const ComplexVector& psi0) {
    require_psi0(psi0);
    if (n < 0 || n > 3) throw InvalidArgument("psi1_analytic: order must be 0..3");
    const Gaps g = gaps(m);
    const double e = m.epsilon;
    const Complex e1 = std::polar(1.0, -g.w1 * t);
    const Complex e2 = std::polar(1.0, -g.w2 * t);
    const Complex e3 = std::polar(1.0, -g.w3 * t);
    switch (n) {
        case 0:
            return e1 * psi0[0];
        case 1:
            return e * m.a[2] * (e1 - e3) / g.d31 * psi0[2];
        case 2:
            return e * e * m.a[1] * m.a[2] / g.d31 * ((e2 - e3) / g.d23 - (e1 - e2) / g.d12) * psi0[1];
        default: {
            const double p = m.a[0] * m.a[1] * m.a[2] * e * e * e;
            const Complex bracket = e1 / (g.d12 * g.d31 * g.d31) - e1 / (g.d12 * g.d12 * g.d31) -
                                    Complex(0.0, t) * e1 / (g.d12 * g.d31) - e2 / (g.d12 * g.d12 * g.d23) +
                                    e3 / (g.d31 * g.d31 * g.d23);
            return p * bracket * psi0[0];
        }
    }
}

std::string_view block_name(Block b) {
    static constexpr std::array<std::string_view, 9> names{"A1", "A3", "A2", "B1", "B3", "B2", "C1", "C3", "C2"};
    return names[static_cast<std::size_t>(b)];
}

BlockValues series_blocks(const ThreeModeModel& m, double t, const SeriesTruncation& trunc) {
    trunc.validate();
    if (!std::isfinite(t)) throw InvalidArgument("series_blocks: t must be finite");
    const Gaps g = gaps(m);
    const XYZ w = xyz(m);
    const double e = m.epsilon;
    const double a2 = m.a[1];
    const double a3 = m.a[2];
    const Complex zx(0.0, -w.X * t);
    const Complex zy(0.0, -w.Y * t);
    const Complex zz(0.0, -w.Z * t);
    const std::optional<int> cap = trunc.max_order;

    // Shell k of a block with order offset o carries eps^(3(k+j)+o) at 2F2 index j.
    auto f22 = [&](double p1, double p2, double q1, double q2, Complex z, int k, int offset) -> Complex {
        if (cap) {
            const int room = *cap - offset;
            if (room < 0 || room / 3 < k) return 0.0;
            return hyp_pfq_polynomial({p1, p2}, {q1, q2}, z, static_cast<std::size_t>(room / 3 - k));
        }
        return hyp_pfq({p1, p2}, {q1, q2}, z, trunc);
    };

    enum { A1, A3, A2, B1, B3, B2, C1, C3, C2 };
    BlockValues total{};
    BlockValues last{};
    for (int k = 0; k <= trunc.k_max; ++k) {
        BlockValues s{};
        const double px = std::pow(w.X / g.d31, k);
        const double py = std::pow(w.Y / g.d31, k);
        const double pz = std::pow(w.Z / g.d12, k);
        for (int l = 0; l <= k; ++l) {
            const double rx = std::pow(g.d31 / g.d12, l);
            const double ry = std::pow(g.d31 / g.d23, l);
            const double rz = std::pow(g.d12 / g.d23, l);
            if (k == 0) {
                s[A1] += 1.0;
            } else {
                s[A1] += sign_pow(l) * px * rx * binom(2 * k - l - 1, k - l) * binom(k + l - 1, l) *
                         f22(2 * k - l, k + l, k, k, zx, k, 0);
            }
            s[A3] += sign_pow(l) * a3 * e / g.d31 * px * rx * binom(2 * k - l, k - l) * binom(k + l - 1, l) *
                     f22(2 * k - l + 1, k + l, k, k + 1, zx, k, 1);
            s[A2] += sign_pow(l + 1) * a2 * a3 * e * e / (g.d12 * g.d31) * px * rx * binom(2 * k - l, k - l) *
                     binom(k + l, l) * f22(2 * k - l + 1, k + l + 1, k + 1, k + 1, zx, k, 2);
            s[B3] += sign_pow(k + l + 1) * a3 * e / g.d31 * py * ry * binom(2 * k - l, k - l) *
                     binom(k + l - 1, l) * f22(2 * k - l + 1, k + l, k, k + 1, zy, k, 1);
            s[B2] += sign_pow(k + l + 1) * a2 * a3 * e * e / (g.d23 * g.d31) * py * ry * binom(2 * k - l, k - l) *
                     binom(k + l, l) * f22(2 * k - l + 1, k + l + 1, k + 1, k + 1, zy, k, 2);
            s[C2] += sign_pow(l + 1) * a2 * a3 * e * e / (g.d12 * g.d23) * pz * rz * binom(2 * k - l, k - l) *
                     binom(k + l, l) * f22(2 * k - l + 1, k + l + 1, k + 1, k + 1, zz, k, 2);
        }
        for (int l = 0; l < k; ++l) {
            const double ry = std::pow(g.d31 / g.d23, l);
            const double rz = std::pow(g.d12 / g.d23, l);
            s[B1] += sign_pow(k + l + 1) * py * ry * binom(2 * k - l - 1, k - l - 1) * binom(k + l - 1, l) *
                     f22(2 * k - l, k + l, k, k + 1, zy, k, 0);
            s[C1] += sign_pow(l + 1) * pz * rz * binom(2 * k - l - 1, k - l - 1) * binom(k + l - 1, l) *
                     f22(2 * k - l, k + l, k, k + 1, zz, k, 0);
            s[C3] += sign_pow(l) * a3 * e / g.d23 * pz * rz * binom(2 * k - l - 1, k - l - 1) * binom(k + l, l) *
                     f22(2 * k - l, k + l + 1, k + 1, k + 1, zz, k, 1);
        }
        for (std::size_t i = 0; i < 9; ++i) total[i] += s[i];
        last = s;
    }
    total[A1] += (cap ? hyp_pfq_polynomial({}, {}, zx, static_cast<std::size_t>(*cap / 3)) : std::exp(zx)) - 1.0;

    for (std::size_t i = 0; i < 9; ++i) {
        if (!std::isfinite(total[i].real()) || !std::isfinite(total[i].imag()))
            throw NonFinite("series_blocks: non-finite block " + std::string(block_name(kAllBlocks[i])));
        if (!cap && std::abs(last[i]) > trunc.shell_tol * std::abs(total[i]) && std::abs(last[i]) > 1e-15)
            throw TruncationNotConverged("series block " + std::string(block_name(kAllBlocks[i])) + ": shell " +
                                         std::to_string(trunc.k_max) + " is not small against the block sum");
    }
    return total;
}

Complex series_block(const ThreeModeModel& m, Block block, double t, const SeriesTruncation& trunc) {
    return series_blocks(m, t, trunc)[static_cast<std::size_t>(block)];
}

Complex psi1_infinite(const ThreeModeModel& m, double t, const ComplexVector& psi0, const SeriesTruncation& trunc) {
    require_psi0(psi0);
    const auto b = series_blocks(m, t, trunc);
    const auto w = effective_frequencies(m);
    const Complex p1 = psi0[0], p2 = psi0[1], p3 = psi0[2];
    auto at = [&](Block x) { return b[static_cast<std::size_t>(x)]; };
    return (at(Block::A1) * p1 + at(Block::A3) * p3 + at(Block::A2) * p2) * std::polar(1.0, -w[0] * t) +
           (at(Block::B1) * p1 + at(Block::B3) * p3 + at(Block::B2) * p2) * std::polar(1.0, -w[2] * t) +
           (at(Block::C1) * p1 + at(Block::C3) * p3 + at(Block::C2) * p2) * std::polar(1.0, -w[1] * t);
}

ComplexVector CyclicView::relabel(const ComplexVector& psi) const {
    require_psi0(psi);
    return {psi[index_map[0]], psi[index_map[1]], psi[index_map[2]]};
}

CyclicView cyclic_view(const ThreeModeModel& m, Target target) {
    m.validate();
    std::array<std::size_t, 3> map{0, 1, 2};
    if (target == Target::psi3) map = {2, 0, 1};
    if (target == Target::psi2) map = {1, 2, 0};
    ThreeModeModel v = m;
    v.omega = permute(m.omega, map);
    v.a = permute(m.a, map);
    v.d = permute(m.d, map);
    return {v, map};
}

std::string model_to_json(const ThreeModeModel& m) {
    return json{{"omega", m.omega}, {"a", m.a}, {"d", m.d}, {"epsilon", m.epsilon}}.dump();
}

ThreeModeModel model_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("model JSON: ") + e.what());
    }
    if (!j.is_object()) throw InvalidArgument("model JSON: expected an object");
    ThreeModeModel m;
    auto triple = [&](const char* key, std::array<double, 3>& out) {
        if (!j.contains(key) || !j[key].is_array() || j[key].size() != 3)
            throw InvalidArgument(std::string("model JSON: \"") + key + "\" must be an array of 3 numbers");
        for (std::size_t i = 0; i < 3; ++i) {
            if (!j[key][i].is_number()) throw InvalidArgument(std::string("model JSON: \"") + key + "\" entry");
            out[i] = j[key][i].get<double>();
        }
    };
    triple("omega", m.omega);
    triple("a", m.a);
    triple("d", m.d);
    if (j.contains("epsilon")) {
        if (!j["epsilon"].is_number()) throw InvalidArgument("model JSON: \"epsilon\" must be a number");
        m.epsilon = j["epsilon"].get<double>();
    }
    m.validate();
    return m;
}

}  // namespace oscpert::three_mode
