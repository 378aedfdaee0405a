#include "oscpert/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace oscpert {

namespace {

void require_square(const ComplexMatrix& m, const char* op) {
    if (!m.square() || m.rows() == 0)
        throw DimensionMismatch(std::string(op) + ": expected a non-empty square matrix");
}

void require_finite(const ComplexMatrix& m, const char* op) {
    for (const auto& z : m.data())
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw NonFinite(std::string(op) + ": non-finite matrix entry");
}

void require_finite(const ComplexVector& v, const char* op) {
    for (const auto& z : v)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw NonFinite(std::string(op) + ": non-finite vector entry");
}

double max_abs(const ComplexMatrix& m) {
    double s = 0.0;
    for (const auto& z : m.data()) s = std::max(s, std::abs(z));
    return s;
}

struct Lu {
    ComplexMatrix lu;
    std::vector<std::size_t> perm;
    int sign = 1;
    bool singular = false;
};

Lu lu_decompose(const ComplexMatrix& a) {
    const std::size_t n = a.rows();
    Lu f{a, std::vector<std::size_t>(n), 1, false};
    for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;
    auto& m = f.lu;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(m(k, k));
        for (std::size_t r = k + 1; r < n; ++r) {
            if (std::abs(m(r, k)) > best) {
                best = std::abs(m(r, k));
                p = r;
            }
        }
        if (best == 0.0) {
            f.singular = true;
            continue;
        }
        if (p != k) {
            for (std::size_t c = 0; c < n; ++c) std::swap(m(k, c), m(p, c));
            std::swap(f.perm[k], f.perm[p]);
            f.sign = -f.sign;
        }
        for (std::size_t r = k + 1; r < n; ++r) {
            m(r, k) /= m(k, k);
            const Complex l = m(r, k);
            if (l == Complex{}) continue;
            for (std::size_t c = k + 1; c < n; ++c) m(r, c) -= l * m(k, c);
        }
    }
    return f;
}

// Characteristic polynomial residual and derivative for lambda^3 + b lambda^2 + c lambda + d.
template <typename T>
void cubic_eval(T b, T c, T d, T x, T& p, T& dp) {
    p = ((x + b) * x + c) * x + d;
    dp = (T(3) * x + T(2) * b) * x + c;
}

template <typename T>
T polish(T b, T c, T d, T x) {
    for (int it = 0; it < 4; ++it) {
        T p, dp;
        cubic_eval(b, c, d, x, p, dp);
        if (p == T(0) || dp == T(0)) break;
        const T next = x - p / dp;
        T pn, dpn;
        cubic_eval(b, c, d, next, pn, dpn);
        if (!(std::abs(pn) < std::abs(p))) break;
        x = next;
    }
    return x;
}

std::vector<Complex> real_cubic_roots(double b, double c, double d) {
    const double p = c - b * b / 3.0;
    const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    const double shift = -b / 3.0;
    const double disc = q * q / 4.0 + p * p * p / 27.0;
    std::vector<Complex> out;
    if (disc > 0.0) {
        const double s = std::sqrt(disc);
        const double a = -std::copysign(std::cbrt(std::abs(q) / 2.0 + s), q);
        const double bb = (a != 0.0) ? -p / (3.0 * a) : 0.0;
        const double x1 = polish(b, c, d, a + bb + shift);
        const double re = -(a + bb) / 2.0 + shift;
        const double im = std::sqrt(3.0) / 2.0 * std::abs(a - bb);
        const Complex z = polish(Complex(b), Complex(c), Complex(d), Complex(re, im));
        out = {Complex(x1, 0.0), z, std::conj(z)};
    } else if (p == 0.0) {
        const double x = polish(b, c, d, shift);
        out = {x, x, x};
    } else {
        const double r = std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * q / (2.0 * p) * std::sqrt(-3.0 / p), -1.0, 1.0);
        const double phi = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k) {
            const double x = 2.0 * r * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0) + shift;
            out.emplace_back(polish(b, c, d, x), 0.0);
        }
    }
    return out;
}

std::vector<Complex> complex_cubic_roots(Complex b, Complex c, Complex d) {
    const Complex p = c - b * b / 3.0;
    const Complex q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    const Complex shift = -b / 3.0;
    Complex s = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
    Complex w = -q / 2.0 + s;
    const Complex w2 = -q / 2.0 - s;
    if (std::abs(w2) > std::abs(w)) w = w2;
    const Complex u = (w == Complex{}) ? Complex{} : std::pow(w, 1.0 / 3.0);
    const Complex v = (u == Complex{}) ? Complex{} : -p / (3.0 * u);
    const Complex om(-0.5, std::sqrt(3.0) / 2.0);
    const Complex om2 = std::conj(om);
    return {polish(b, c, d, u + v + shift), polish(b, c, d, om * u + om2 * v + shift),
            polish(b, c, d, om2 * u + om * v + shift)};
}

std::vector<Complex> small_eigenvalues(const ComplexMatrix& m) {
    const std::size_t n = m.rows();
    if (n == 1) return {m(0, 0)};
    if (n == 2) {
        const Complex half = (m(0, 0) + m(1, 1)) / 2.0;
        const Complex det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        Complex s = std::sqrt(half * half - det);
        if ((std::conj(half) * s).real() < 0.0) s = -s;
        const Complex l1 = half + s;
        const Complex l2 = (l1 != Complex{}) ? det / l1 : half - s;
        return {l1, l2};
    }
    const Complex tr = m(0, 0) + m(1, 1) + m(2, 2);
    const Complex minors = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) -
                           m(0, 2) * m(2, 0) + m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
    const Complex det = determinant(m);
    bool real = true;
    for (const auto& z : m.data()) real = real && z.imag() == 0.0;
    if (real) return real_cubic_roots(-tr.real(), minors.real(), -det.real());
    return complex_cubic_roots(-tr, minors, -det);
}

void hessenberg_reduce(ComplexMatrix& h) {
    const std::size_t n = h.rows();
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double alpha = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) alpha += std::norm(h(i, k));
        alpha = std::sqrt(alpha);
        if (alpha == 0.0) continue;
        std::vector<Complex> v(n, Complex{});
        const Complex x0 = h(k + 1, k);
        const Complex phase = (std::abs(x0) == 0.0) ? Complex(1.0) : x0 / std::abs(x0);
        v[k + 1] = x0 + phase * alpha;
        for (std::size_t i = k + 2; i < n; ++i) v[i] = h(i, k);
        double vn = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) vn += std::norm(v[i]);
        if (vn == 0.0) continue;
        // H <- (I - 2vv*/v*v) H (I - 2vv*/v*v)
        for (std::size_t c = 0; c < n; ++c) {
            Complex dot{};
            for (std::size_t i = k + 1; i < n; ++i) dot += std::conj(v[i]) * h(i, c);
            dot *= 2.0 / vn;
            for (std::size_t i = k + 1; i < n; ++i) h(i, c) -= v[i] * dot;
        }
        for (std::size_t r = 0; r < n; ++r) {
            Complex dot{};
            for (std::size_t i = k + 1; i < n; ++i) dot += h(r, i) * v[i];
            dot *= 2.0 / vn;
            for (std::size_t i = k + 1; i < n; ++i) h(r, i) -= dot * std::conj(v[i]);
        }
        for (std::size_t i = k + 2; i < n; ++i) h(i, k) = Complex{};
    }
}

Complex wilkinson_shift(Complex a, Complex b, Complex c, Complex d) {
    const Complex half = (a + d) / 2.0;
    const Complex det = a * d - b * c;
    const Complex s = std::sqrt(half * half - det);
    const Complex l1 = half + s;
    const Complex l2 = half - s;
    return (std::abs(l1 - d) < std::abs(l2 - d)) ? l1 : l2;
}

std::vector<Complex> qr_eigenvalues(const ComplexMatrix& m) {
    const std::size_t n = m.rows();
    ComplexMatrix h = m;
    hessenberg_reduce(h);
    std::vector<Complex> out;
    const double eps = std::numeric_limits<double>::epsilon();
    const double scale = std::max(max_abs(m), std::numeric_limits<double>::min());
    const std::size_t cap = 100 * n;
    std::size_t total = 0;
    std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(n) - 1;
    std::size_t since_deflation = 0;
    while (hi >= 0) {
        if (hi == 0) {
            out.push_back(h(0, 0));
            break;
        }
        std::ptrdiff_t lo = hi;
        while (lo > 0) {
            const double sub = std::abs(h(lo, lo - 1));
            const double diag = std::abs(h(lo, lo)) + std::abs(h(lo - 1, lo - 1));
            if (sub <= eps * (diag > 0.0 ? diag : scale)) {
                h(lo, lo - 1) = Complex{};
                break;
            }
            --lo;
        }
        if (lo == hi) {
            out.push_back(h(hi, hi));
            --hi;
            since_deflation = 0;
            continue;
        }
        if (++total > cap) throw NonConvergence("eigenvalues: shifted QR did not converge", total);
        ++since_deflation;
        Complex mu = wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
        if (since_deflation % 11 == 10) mu = h(hi, hi) + Complex(std::abs(h(hi, hi - 1)), 0.0);
        const auto l = static_cast<std::size_t>(lo);
        const auto u = static_cast<std::size_t>(hi);
        for (std::size_t i = l; i <= u; ++i) h(i, i) -= mu;
        std::vector<double> cs(u - l);
        std::vector<Complex> sn(u - l);
        for (std::size_t k = l; k < u; ++k) {
            const Complex a = h(k, k);
            const Complex b = h(k + 1, k);
            const double r = std::hypot(std::abs(a), std::abs(b));
            double c;
            Complex s;
            if (r == 0.0) {
                c = 1.0;
                s = Complex{};
            } else if (std::abs(a) == 0.0) {
                c = 0.0;
                s = std::conj(b) / std::abs(b);
            } else {
                c = std::abs(a) / r;
                s = (a / std::abs(a)) * std::conj(b) / r;
            }
            cs[k - l] = c;
            sn[k - l] = s;
            for (std::size_t col = k; col <= u; ++col) {
                const Complex x = h(k, col);
                const Complex y = h(k + 1, col);
                h(k, col) = c * x + s * y;
                h(k + 1, col) = -std::conj(s) * x + c * y;
            }
        }
        for (std::size_t k = l; k < u; ++k) {
            const double c = cs[k - l];
            const Complex s = sn[k - l];
            const std::size_t last = std::min(k + 2, u);
            for (std::size_t row = l; row <= last; ++row) {
                const Complex x = h(row, k);
                const Complex y = h(row, k + 1);
                h(row, k) = x * c + y * std::conj(s);
                h(row, k + 1) = -x * s + y * c;
            }
        }
        for (std::size_t i = l; i <= u; ++i) h(i, i) += mu;
    }
    return out;
}

// Null space of a (square) by Gaussian elimination with complete pivoting.
std::vector<ComplexVector> null_space(ComplexMatrix a, double rank_tol) {
    const std::size_t n = a.rows();
    std::vector<std::size_t> cols(n);
    for (std::size_t i = 0; i < n; ++i) cols[i] = i;
    std::size_t rank = 0;
    for (; rank < n; ++rank) {
        std::size_t pr = rank, pc = rank;
        double best = -1.0;
        for (std::size_t r = rank; r < n; ++r)
            for (std::size_t c = rank; c < n; ++c)
                if (std::abs(a(r, c)) > best) {
                    best = std::abs(a(r, c));
                    pr = r;
                    pc = c;
                }
        if (best <= rank_tol) break;
        for (std::size_t c = 0; c < n; ++c) std::swap(a(rank, c), a(pr, c));
        for (std::size_t r = 0; r < n; ++r) std::swap(a(r, rank), a(r, pc));
        std::swap(cols[rank], cols[pc]);
        for (std::size_t r = rank + 1; r < n; ++r) {
            const Complex f = a(r, rank) / a(rank, rank);
            for (std::size_t c = rank; c < n; ++c) a(r, c) -= f * a(rank, c);
        }
    }
    std::vector<ComplexVector> basis;
    for (std::size_t f = rank; f < n; ++f) {
        ComplexVector y(n, Complex{});
        y[f] = 1.0;
        for (std::size_t ri = rank; ri-- > 0;) {
            Complex s{};
            for (std::size_t c = ri + 1; c < n; ++c) s += a(ri, c) * y[c];
            y[ri] = -s / a(ri, ri);
        }
        ComplexVector x(n);
        for (std::size_t i = 0; i < n; ++i) x[cols[i]] = y[i];
        const double nx = norm2(x);
        for (auto& z : x) z /= nx;
        basis.push_back(std::move(x));
    }
    return basis;
}

Complex principal_root(Complex z) {
    const double mag = std::abs(z);
    if (std::abs(z.imag()) <= 1e-15 * std::max(1.0, mag)) {
        if (z.real() < 0.0) return {0.0, std::sqrt(-z.real())};
        return {std::sqrt(z.real()), 0.0};
    }
    return std::sqrt(z);
}

}  // namespace

ComplexMatrix to_complex(const RealMatrix& m) {
    ComplexMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.data().size(); ++i) out.data()[i] = m.data()[i];
    return out;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("matrix add");
    ComplexMatrix out = a;
    for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] += b.data()[i];
    return out;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("matrix subtract");
    ComplexMatrix out = a;
    for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] -= b.data()[i];
    return out;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionMismatch("matrix multiply");
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

ComplexMatrix operator*(Complex s, const ComplexMatrix& a) {
    ComplexMatrix out = a;
    for (auto& z : out.data()) z *= s;
    return out;
}

ComplexVector operator*(const ComplexMatrix& a, const ComplexVector& v) {
    if (a.cols() != v.size()) throw DimensionMismatch("matrix-vector multiply");
    ComplexVector out(a.rows(), Complex{});
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out[i] += a(i, j) * v[j];
    return out;
}

ComplexVector operator+(const ComplexVector& a, const ComplexVector& b) {
    if (a.size() != b.size()) throw DimensionMismatch("vector add");
    ComplexVector out = a;
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += b[i];
    return out;
}

ComplexVector operator-(const ComplexVector& a, const ComplexVector& b) {
    if (a.size() != b.size()) throw DimensionMismatch("vector subtract");
    ComplexVector out = a;
    for (std::size_t i = 0; i < a.size(); ++i) out[i] -= b[i];
    return out;
}

ComplexVector operator*(Complex s, const ComplexVector& v) {
    ComplexVector out = v;
    for (auto& z : out) z *= s;
    return out;
}

double norm2(const ComplexVector& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

double frobenius_norm(const ComplexMatrix& m) {
    double s = 0.0;
    for (const auto& z : m.data()) s += std::norm(z);
    return std::sqrt(s);
}

double one_norm(const ComplexMatrix& m) {
    double best = 0.0;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < m.rows(); ++r) s += std::abs(m(r, c));
        best = std::max(best, s);
    }
    return best;
}

Complex trace(const ComplexMatrix& m) {
    require_square(m, "trace");
    Complex s{};
    for (std::size_t i = 0; i < m.rows(); ++i) s += m(i, i);
    return s;
}

Complex determinant(const ComplexMatrix& m) {
    require_square(m, "determinant");
    if (m.rows() == 3) {
        return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
               m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
               m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    }
    const Lu f = lu_decompose(m);
    if (f.singular) return Complex{};
    Complex d = static_cast<double>(f.sign);
    for (std::size_t i = 0; i < m.rows(); ++i) d *= f.lu(i, i);
    return d;
}

ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_square(a, "solve");
    if (b.rows() != a.rows()) throw DimensionMismatch("solve: right-hand side rows");
    const Lu f = lu_decompose(a);
    if (f.singular) throw SingularTransform("solve: singular matrix");
    const std::size_t n = a.rows();
    ComplexMatrix x(n, b.cols());
    for (std::size_t c = 0; c < b.cols(); ++c) {
        ComplexVector y(n);
        for (std::size_t i = 0; i < n; ++i) {
            Complex s = b(f.perm[i], c);
            for (std::size_t k = 0; k < i; ++k) s -= f.lu(i, k) * y[k];
            y[i] = s;
        }
        for (std::size_t i = n; i-- > 0;) {
            Complex s = y[i];
            for (std::size_t k = i + 1; k < n; ++k) s -= f.lu(i, k) * x(k, c);
            x(i, c) = s / f.lu(i, i);
        }
    }
    require_finite(x, "solve");
    return x;
}

bool is_diagonal(const ComplexMatrix& m) {
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (r != c && m(r, c) != Complex{}) return false;
    return true;
}

std::vector<Complex> eigenvalues(const ComplexMatrix& m, double tol) {
    require_square(m, "eigenvalues");
    require_finite(m, "eigenvalues");
    if (!(tol > 0.0)) throw InvalidArgument("eigenvalues: tol must be positive");
    std::vector<Complex> out = m.rows() <= 3 ? small_eigenvalues(m) : qr_eigenvalues(m);
    for (const auto& z : out)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw NonFinite("eigenvalues: non-finite result");
    return out;
}

ComplexMatrix evolution_operator(const ComplexMatrix& m, double t) {
    require_square(m, "evolution_operator");
    require_finite(m, "evolution_operator");
    const std::size_t n = m.rows();
    if (is_diagonal(m)) {
        ComplexMatrix out(n, n);
        for (std::size_t i = 0; i < n; ++i) out(i, i) = std::exp(Complex(0.0, -t) * m(i, i));
        return out;
    }
    ComplexMatrix a = Complex(0.0, -t) * m;
    const double norm = one_norm(a);
    int squarings = 0;
    if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    a = Complex(std::ldexp(1.0, -squarings)) * a;
    const ComplexMatrix id = ComplexMatrix::identity(n);
    ComplexMatrix e = id;
    for (int k = 20; k >= 1; --k) e = id + Complex(1.0 / k) * (a * e);
    for (int s = 0; s < squarings; ++s) e = e * e;
    require_finite(e, "evolution_operator");
    return e;
}

ComplexVector matrix_exponential_apply(const ComplexMatrix& m, double t, const ComplexVector& v) {
    require_square(m, "matrix_exponential_apply");
    if (v.size() != m.rows()) throw DimensionMismatch("matrix_exponential_apply: vector length");
    require_finite(v, "matrix_exponential_apply");
    if (is_diagonal(m)) {
        require_finite(m, "matrix_exponential_apply");
        ComplexVector out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::exp(Complex(0.0, -t) * m(i, i)) * v[i];
        return out;
    }
    ComplexVector out = evolution_operator(m, t) * v;
    require_finite(out, "matrix_exponential_apply");
    return out;
}

ComplexMatrix principal_sqrt(const ComplexMatrix& m, double tol, double condition_cap) {
    require_square(m, "principal_sqrt");
    require_finite(m, "principal_sqrt");
    if (!(tol > 0.0)) throw InvalidArgument("principal_sqrt: tol must be positive");
    const std::size_t n = m.rows();
    const double mnorm = frobenius_norm(m);
    ComplexMatrix s(n, n);
    if (is_diagonal(m)) {
        for (std::size_t i = 0; i < n; ++i) s(i, i) = principal_root(m(i, i));
    } else {
        const std::vector<Complex> lambda = eigenvalues(m);
        const double scale = std::max(1.0, max_abs(m));
        const double cluster_tol = 1e-8 * scale;
        std::vector<bool> used(n, false);
        ComplexMatrix v(n, n);
        std::vector<Complex> roots(n);
        std::size_t col = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (used[i]) continue;
            std::vector<std::size_t> members{i};
            used[i] = true;
            for (std::size_t j = i + 1; j < n; ++j)
                if (!used[j] && std::abs(lambda[j] - lambda[i]) <= cluster_tol) {
                    members.push_back(j);
                    used[j] = true;
                }
            Complex mean{};
            for (auto k : members) mean += lambda[k];
            mean /= static_cast<double>(members.size());
            ComplexMatrix shifted = m;
            for (std::size_t k = 0; k < n; ++k) shifted(k, k) -= mean;
            const auto basis = null_space(shifted, 1e-9 * scale);
            if (basis.size() < members.size())
                throw NotDiagonalizable("principal_sqrt: eigenspace dimension below multiplicity");
            for (std::size_t b = 0; b < members.size(); ++b, ++col) {
                for (std::size_t r = 0; r < n; ++r) v(r, col) = basis[b][r];
                roots[col] = principal_root(mean);
            }
        }
        ComplexMatrix vinv;
        try {
            vinv = solve(v, ComplexMatrix::identity(n));
        } catch (const SingularTransform&) {
            throw SingularTransform("principal_sqrt: eigenvector matrix is singular");
        }
        if (one_norm(v) * one_norm(vinv) > condition_cap)
            throw NotDiagonalizable("principal_sqrt: eigenvector condition number above cap");
        ComplexMatrix vd = v;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) vd(r, c) *= roots[c];
        s = vd * vinv;
    }
    require_finite(s, "principal_sqrt");
    if (frobenius_norm(s * s - m) > tol * mnorm)
        throw SingularTransform("principal_sqrt: residual of S*S - m above tolerance");
    return s;
}

}  // namespace oscpert
