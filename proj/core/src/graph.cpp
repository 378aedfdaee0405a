#include "oscpert/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <utility>

#include <json.hpp>

namespace oscpert::graph {

namespace {

using json = nlohmann::json;

double max_abs(const RealMatrix& m) {
    double s = 0.0;
    for (double x : m.data()) s = std::max(s, std::abs(x));
    return s;
}

void require_square(const RealMatrix& m, const char* what) {
    if (!m.square()) throw DimensionMismatch(std::string(what) + ": matrix must be square");
    for (double x : m.data())
        if (!std::isfinite(x)) throw NonFinite(std::string(what) + ": non-finite entry");
}

double row_sum_violation(const RealMatrix& m) {
    double worst = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j);
        worst = std::max(worst, std::abs(s));
    }
    return worst;
}

std::string pair_name(std::size_t i, std::size_t j) {
    return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

void fill_diagonal(RealMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (j != i) s += m(i, j);
        m(i, i) = -s;
    }
}

// Closed path i -> ... -> j -> i through the spanning tree plus the edge (j, i).
std::vector<std::size_t> tree_cycle(const std::vector<std::size_t>& parent, std::size_t i, std::size_t j) {
    std::vector<std::size_t> up_i{i};
    while (parent[up_i.back()] != up_i.back()) up_i.push_back(parent[up_i.back()]);
    std::vector<std::size_t> up_j{j};
    auto on_i = [&](std::size_t v) { return std::find(up_i.begin(), up_i.end(), v) != up_i.end(); };
    while (!on_i(up_j.back())) up_j.push_back(parent[up_j.back()]);
    const std::size_t lca = up_j.back();
    std::vector<std::size_t> cycle;
    for (std::size_t v : up_i) {
        cycle.push_back(v);
        if (v == lca) break;
    }
    for (auto it = up_j.rbegin() + 1; it != up_j.rend(); ++it) cycle.push_back(*it);
    cycle.push_back(i);
    return cycle;
}

json matrix_json(const RealMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

RealMatrix matrix_from(const json& j) {
    if (!j.is_array()) throw InvalidArgument("matrix JSON: expected an array of rows");
    const std::size_t rows = j.size();
    const std::size_t cols = rows ? j[0].size() : 0;
    RealMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            throw InvalidArgument("matrix JSON: rows must be arrays of equal length");
        for (std::size_t c = 0; c < cols; ++c) {
            if (!j[r][c].is_number()) throw InvalidArgument("matrix JSON: non-numeric entry");
            m(r, c) = j[r][c].get<double>();
        }
    }
    return m;
}

}  // namespace

void WeightedDigraph::validate() const {
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& e : edges) {
        if (e.src >= n || e.dst >= n) throw InvalidArgument("graph: edge endpoint out of range");
        if (e.src == e.dst) throw InvalidArgument("graph: self-loop on node " + std::to_string(e.src));
        if (!(e.weight > 0.0) || !std::isfinite(e.weight))
            throw InvalidArgument("graph: weights must be positive and finite");
        if (!seen.emplace(e.src, e.dst).second)
            throw InvalidArgument("graph: repeated edge " + pair_name(e.src, e.dst));
    }
}

RealMatrix laplacian(const WeightedDigraph& g) {
    g.validate();
    RealMatrix L(g.n, g.n);
    for (const auto& e : g.edges) L(e.src, e.dst) = -e.weight;
    fill_diagonal(L);
    return L;
}

std::vector<double> symmetrizability_certificate(const RealMatrix& L0, double tol) {
    require_square(L0, "symmetrizability_certificate");
    if (!(tol > 0.0)) throw InvalidArgument("symmetrizability_certificate: tol must be positive");
    const std::size_t n = L0.rows();
    const double scale = std::max(1.0, max_abs(L0));
    if (row_sum_violation(L0) > tol * scale)
        throw InvalidArgument("symmetrizability_certificate: rows must sum to zero");

    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool fwd = L0(i, j) != 0.0;
            const bool bwd = L0(j, i) != 0.0;
            if (fwd != bwd)
                throw NotSymmetrizable("link " + pair_name(i, j) + " has no reverse link", {i, j, i});
            if (!fwd) continue;
            if ((L0(i, j) > 0.0) != (L0(j, i) > 0.0))
                throw NotSymmetrizable("link pair " + pair_name(i, j) + " has opposite signs", {i, j, i});
            adj[i].push_back(j);
            adj[j].push_back(i);
        }

    std::vector<double> m(n, 0.0);
    std::vector<std::size_t> parent(n);
    std::vector<std::size_t> component(n, n);
    for (std::size_t root = 0; root < n; ++root) {
        if (component[root] != n) continue;
        component[root] = root;
        parent[root] = root;
        m[root] = 1.0;
        std::deque<std::size_t> queue{root};
        while (!queue.empty()) {
            const std::size_t i = queue.front();
            queue.pop_front();
            for (std::size_t j : adj[i]) {
                if (component[j] != n) continue;
                component[j] = root;
                parent[j] = i;
                m[j] = m[i] * L0(i, j) / L0(j, i);
                queue.push_back(j);
            }
        }
    }

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j : adj[i]) {
            if (j < i || parent[j] == i || parent[i] == j) continue;
            const double lhs = m[i] * L0(i, j);
            const double rhs = m[j] * L0(j, i);
            if (std::abs(lhs - rhs) > tol * std::max(std::abs(lhs), std::abs(rhs)))
                throw NotSymmetrizable("closed path through " + pair_name(i, j) + " is unbalanced",
                                       tree_cycle(parent, i, j));
        }

    for (std::size_t root = 0; root < n; ++root) {
        if (component[root] != root) continue;
        double lo = m[root];
        for (std::size_t i = 0; i < n; ++i)
            if (component[i] == root) lo = std::min(lo, m[i]);
        for (std::size_t i = 0; i < n; ++i)
            if (component[i] == root) m[i] /= lo;
    }
    return m;
}

bool similarity_is_symmetric(const RealMatrix& L0, const std::vector<double>& m, double tol) {
    if (!L0.square() || m.size() != L0.rows()) return false;
    const double scale = std::max(1.0, max_abs(L0));
    for (std::size_t i = 0; i < L0.rows(); ++i)
        for (std::size_t j = i + 1; j < L0.cols(); ++j) {
            const double a = std::sqrt(m[i]) * L0(i, j) / std::sqrt(m[j]);
            const double b = std::sqrt(m[j]) * L0(j, i) / std::sqrt(m[i]);
            if (std::abs(a - b) > tol * scale) return false;
        }
    return true;
}

std::string check_invariants(const LaplacianDecomposition& d, double tol) {
    const std::size_t n = d.L.rows();
    for (const RealMatrix* m : {&d.L, &d.L0, &d.LI})
        if (m->rows() != n || m->cols() != n) return "matrix shapes differ";
    const double scale = std::max(1.0, max_abs(d.L));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (std::abs(d.L(i, j) - d.L0(i, j) - d.LI(i, j)) > tol * scale)
                return "L != L0 + LI at " + pair_name(i, j);
    if (row_sum_violation(d.L) > tol * scale) return "rows of L do not sum to zero";
    if (row_sum_violation(d.L0) > tol * scale) return "rows of L0 do not sum to zero";
    if (row_sum_violation(d.LI) > tol * scale) return "rows of LI do not sum to zero";
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (d.LI(i, j) != 0.0 && d.LI(j, i) != 0.0) return "LI has links both ways on " + pair_name(i, j);
    if (d.scaling) {
        for (double x : *d.scaling)
            if (!(x > 0.0)) return "scaling must be positive";
        if (!similarity_is_symmetric(d.L0, *d.scaling)) return "scaled L0 is not symmetric";
    }
    return {};
}

LaplacianDecomposition decompose(const RealMatrix& L, const DecomposeMode& mode) {
    require_square(L, "decompose");
    const std::size_t n = L.rows();
    const double scale = std::max(1.0, max_abs(L));
    if (row_sum_violation(L) > kIdentityTol * scale)
        throw InvalidArgument("decompose: L rows must sum to zero");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && L(i, j) > 0.0) throw InvalidArgument("decompose: L has a positive off-diagonal");

    LaplacianDecomposition d{L, RealMatrix(n, n), RealMatrix(n, n), std::nullopt};
    if (const auto* ex = std::get_if<Explicit>(&mode)) {
        if (ex->LI.rows() != n || ex->LI.cols() != n)
            throw InvalidDecomposition("LI shape does not match L");
        for (double x : ex->LI.data())
            if (!std::isfinite(x)) throw InvalidDecomposition("LI has a non-finite entry");
        d.LI = ex->LI;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) d.L0(i, j) = L(i, j) - d.LI(i, j);
        if (row_sum_violation(d.LI) > kIdentityTol * scale)
            throw InvalidDecomposition("LI rows do not sum to zero");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                if (d.LI(i, j) > 0.0) throw InvalidDecomposition("LI has a positive off-diagonal at " + pair_name(i, j));
                if (d.L0(i, j) > kIdentityTol * scale)
                    throw InvalidDecomposition("L - LI has a positive off-diagonal at " + pair_name(i, j));
                if (j > i && d.LI(i, j) != 0.0 && d.LI(j, i) != 0.0)
                    throw InvalidDecomposition("LI is not one-way on " + pair_name(i, j));
            }
        try {
            d.scaling = symmetrizability_certificate(d.L0);
        } catch (const NotSymmetrizable& e) {
            throw InvalidDecomposition(std::string("L - LI is not symmetrizable: ") + e.what());
        }
    } else {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double wij = -L(i, j);
                const double wji = -L(j, i);
                const double shared = std::min(wij, wji);
                d.L0(i, j) = d.L0(j, i) = -shared;
                d.LI(i, j) = -(wij - shared);
                d.LI(j, i) = -(wji - shared);
            }
        fill_diagonal(d.L0);
        fill_diagonal(d.LI);
        d.scaling = std::vector<double>(n, 1.0);
    }
    const std::string problem = check_invariants(d);
    if (!problem.empty()) throw InvalidDecomposition(problem);
    return d;
}

WeightedDigraph graph_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("graph JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
        throw InvalidArgument("graph JSON: expected {\"n\": int, \"edges\": [...]}");
    if (!j["n"].is_number_integer() || j["n"].get<long long>() < 0)
        throw InvalidArgument("graph JSON: n must be a non-negative integer");
    WeightedDigraph g;
    g.n = j["n"].get<std::size_t>();
    for (const auto& e : j["edges"]) {
        if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
            !e[2].is_number())
            throw InvalidArgument("graph JSON: edges must be [src, dst, weight]");
        if (e[0].get<long long>() < 0 || e[1].get<long long>() < 0)
            throw InvalidArgument("graph JSON: negative node index");
        g.edges.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>(), e[2].get<double>()});
    }
    g.validate();
    return g;
}

std::string graph_to_json(const WeightedDigraph& g) {
    json edges = json::array();
    for (const auto& e : g.edges) edges.push_back(json::array({e.src, e.dst, e.weight}));
    return json{{"n", g.n}, {"edges", edges}}.dump();
}

RealMatrix matrix_from_json(const std::string& text) {
    try {
        return matrix_from(json::parse(text));
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("matrix JSON: ") + e.what());
    }
}

std::string matrix_to_json(const RealMatrix& m) { return matrix_json(m).dump(); }

std::string decomposition_to_json(const LaplacianDecomposition& d) {
    json out{{"L", matrix_json(d.L)}, {"L0", matrix_json(d.L0)}, {"LI", matrix_json(d.LI)}};
    out["scaling"] = d.scaling ? json(*d.scaling) : json(nullptr);
    json cert;
    cert["one_way"] = true;
    cert["symmetrizable"] = d.scaling.has_value() && similarity_is_symmetric(d.L0, *d.scaling);
    out["certificates"] = cert;
    return out.dump(2);
}

}  // namespace oscpert::graph
