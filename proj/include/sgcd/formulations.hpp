#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgcd/qubo.hpp"
#include "sgcd/signed_graph.hpp"

namespace sgcd {

enum class Metric { frustration, modularity };

inline const char* to_string(Metric m) { return m == Metric::frustration ? "frustration" : "modularity"; }

// Per-node one-hot penalty coefficients. The degree-scaled rule is
// M_j = 2*d_j*k, with a floor of 2*k for isolated nodes (d_j = 0 would give
// a zero penalty and permit infeasible optima).
inline std::vector<double> penalty_vector(const SignedGraph& g, int k) {
    if (k < 1) throw std::invalid_argument("penalty_vector: k must be >= 1");
    std::vector<double> m(static_cast<std::size_t>(g.node_count()));
    for (int j = 0; j < g.node_count(); ++j) {
        int d = g.degree(j);
        m[static_cast<std::size_t>(j)] = d > 0 ? 2.0 * d * k : 2.0 * k;
    }
    return m;
}

struct PenaltyPolicy {
    enum class Kind { uniform, per_node_degree_scaled };

    Kind kind = Kind::per_node_degree_scaled;
    double magnitude = 0.0;  // only for uniform

    static PenaltyPolicy uniform(double m) {
        if (!(m > 0.0)) throw std::invalid_argument("PenaltyPolicy: uniform magnitude must be > 0");
        return {Kind::uniform, m};
    }
    static PenaltyPolicy degree_scaled() { return {Kind::per_node_degree_scaled, 0.0}; }

    std::vector<double> coefficients(const SignedGraph& g, int k) const {
        if (kind == Kind::uniform)
            return std::vector<double>(static_cast<std::size_t>(g.node_count()), magnitude);
        return penalty_vector(g, k);
    }

    std::string describe() const {
        if (kind == Kind::uniform) {
            std::string s = std::to_string(magnitude);
            s.erase(s.find_last_not_of('0') + 1);
            if (!s.empty() && s.back() == '.') s.pop_back();
            return "uniform:" + s;
        }
        return "degree";
    }

    friend bool operator==(const PenaltyPolicy&, const PenaltyPolicy&) = default;
};

// Recorded with every solver result so a run can be reproduced.
struct FormulationDescriptor {
    Metric metric = Metric::frustration;
    int k = 2;
    PenaltyPolicy penalty;
    std::string graph_fingerprint;
};

// Two-community frustration in spin form:
//   F(s) = sum_{i,j} A_ij - s A s^T        (ordered pairs)
// For any 2-partition, F = 4*B - 4*m_n with B the badness.
inline IsingProblem frustration_two_ising(const SignedGraph& g) {
    if (g.node_count() < 2) throw std::invalid_argument("frustration_two: need n >= 2");
    IsingProblem p;
    p.num_spins = g.node_count();
    p.field.assign(static_cast<std::size_t>(p.num_spins), 0.0);
    p.couplings.reserve(g.edges().size());
    for (const auto& e : g.edges()) p.couplings.push_back({e.u, e.v, -static_cast<double>(e.sign)});
    p.offset = 2.0 * static_cast<double>(g.positive_edge_count() - g.negative_edge_count());
    p.sense = Sense::minimize;
    return p;
}

inline QuboProblem build_frustration_two(const SignedGraph& g) {
    return ising_to_qubo(frustration_two_ising(g));
}

// k-community penalized frustration over one-hot variables:
//   F(S) = sum_{i,j} A_ij (1 - s_i . s_j) + sum_i M_i (1 - |s_i|)^2
// (ordered pairs). On feasible configurations F = 2*B - 2*m_n.
inline QuboProblem build_frustration_k(const SignedGraph& g, int k, const PenaltyPolicy& penalty) {
    if (k < 2) throw std::invalid_argument("build_frustration_k: k must be >= 2");
    Encoding enc(g.node_count(), k);
    QuboBuilder b(enc.num_vars());
    for (const auto& e : g.edges())
        for (int c = 0; c < k; ++c)
            b.add_quadratic(enc.var(e.u, c), enc.var(e.v, c), -static_cast<double>(e.sign));
    b.add_offset(2.0 * static_cast<double>(g.positive_edge_count() - g.negative_edge_count()));

    const auto m = penalty.coefficients(g, k);
    for (int i = 0; i < g.node_count(); ++i) {
        double mi = m[static_cast<std::size_t>(i)];
        b.add_offset(mi);
        for (int c = 0; c < k; ++c) {
            b.add_linear(enc.var(i, c), -mi);
            for (int c2 = c + 1; c2 < k; ++c2) b.add_quadratic(enc.var(i, c), enc.var(i, c2), mi);
        }
    }
    return b.build(Sense::minimize);
}

// B^u_ij = A_ij - d_i d_j / (2m); rows sum to zero.
inline Mat<double> build_modularity_matrix_unsigned(const SignedGraph& g) {
    if (g.negative_edge_count() > 0)
        throw std::invalid_argument("unsigned modularity: graph has negative edges");
    if (g.edge_count() == 0) throw std::invalid_argument("unsigned modularity: graph has no edges");
    const auto n = static_cast<std::size_t>(g.node_count());
    const double two_m = 2.0 * static_cast<double>(g.edge_count());
    auto bm = make_mat<double>(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            bm[i][j] = static_cast<double>(g.sign(static_cast<int>(i), static_cast<int>(j))) -
                       static_cast<double>(g.degree(static_cast<int>(i))) *
                           static_cast<double>(g.degree(static_cast<int>(j))) / two_m;
    return bm;
}

// Signed modularity matrix:
//   B_ij = A_ij + n_i n_j / (2 m_n) - p_i p_j / (2 m_p),
// with a null-model term defined as 0 when its edge class is empty.
inline Mat<double> build_modularity_matrix_signed(const SignedGraph& g) {
    const auto n = static_cast<std::size_t>(g.node_count());
    const double mp = static_cast<double>(g.positive_edge_count());
    const double mn = static_cast<double>(g.negative_edge_count());
    auto bm = make_mat<double>(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double v = static_cast<double>(g.sign(static_cast<int>(i), static_cast<int>(j)));
            if (mn > 0.0)
                v += static_cast<double>(g.negative_degree(static_cast<int>(i))) *
                     static_cast<double>(g.negative_degree(static_cast<int>(j))) / (2.0 * mn);
            if (mp > 0.0)
                v -= static_cast<double>(g.positive_degree(static_cast<int>(i))) *
                     static_cast<double>(g.positive_degree(static_cast<int>(j))) / (2.0 * mp);
            bm[i][j] = v;
        }
    }
    return bm;
}

// Two-community signed modularity in spin form: maximize M(s) = s B s^T.
// The diagonal of B contributes the constant trace(B) since s_i^2 = 1.
inline IsingProblem modularity_two_ising(const SignedGraph& g) {
    if (g.node_count() < 2) throw std::invalid_argument("modularity_two: need n >= 2");
    const auto bm = build_modularity_matrix_signed(g);
    IsingProblem p;
    p.num_spins = g.node_count();
    p.field.assign(static_cast<std::size_t>(p.num_spins), 0.0);
    p.sense = Sense::maximize;
    for (int i = 0; i < p.num_spins; ++i) {
        p.offset += bm[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
        for (int j = i + 1; j < p.num_spins; ++j) {
            double v = bm[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (v != 0.0) p.couplings.push_back({i, j, v});
        }
    }
    return p;
}

inline QuboProblem build_modularity_two(const SignedGraph& g) {
    return ising_to_qubo(modularity_two_ising(g));
}

// k-community penalized signed modularity over one-hot variables:
//   M(S) = sum_{i,j} B_ij (s_i . s_j) - sum_i M_i (1 - |s_i|)^2
// (ordered pairs including i = j; the diagonal becomes a linear term since
// s_i . s_i = |s_i|). Stored as a maximize-sense problem.
inline QuboProblem build_modularity_k(const SignedGraph& g, int k, const PenaltyPolicy& penalty) {
    if (k < 2) throw std::invalid_argument("build_modularity_k: k must be >= 2");
    const auto bm = build_modularity_matrix_signed(g);
    Encoding enc(g.node_count(), k);
    QuboBuilder b(enc.num_vars());
    for (int i = 0; i < g.node_count(); ++i) {
        for (int c = 0; c < k; ++c) b.add_linear(enc.var(i, c), bm[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)]);
        for (int j = i + 1; j < g.node_count(); ++j) {
            double v = bm[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (v == 0.0) continue;
            for (int c = 0; c < k; ++c) b.add_quadratic(enc.var(i, c), enc.var(j, c), v);
        }
    }
    const auto m = penalty.coefficients(g, k);
    for (int i = 0; i < g.node_count(); ++i) {
        double mi = m[static_cast<std::size_t>(i)];
        b.add_offset(-mi);
        for (int c = 0; c < k; ++c) {
            b.add_linear(enc.var(i, c), mi);
            for (int c2 = c + 1; c2 < k; ++c2) b.add_quadratic(enc.var(i, c), enc.var(i, c2), -mi);
        }
    }
    return b.build(Sense::maximize);
}

inline QuboProblem build_formulation(const SignedGraph& g, Metric metric, int k,
                                     const PenaltyPolicy& penalty) {
    return metric == Metric::frustration ? build_frustration_k(g, k, penalty)
                                         : build_modularity_k(g, k, penalty);
}

}  // namespace sgcd
