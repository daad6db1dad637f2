#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgcd/signed_graph.hpp"

namespace sgcd {

using Configuration = std::vector<std::uint8_t>;  // entries 0/1
using SpinVector = std::vector<std::int8_t>;      // entries +1/-1

enum class Sense { minimize, maximize };

inline const char* to_string(Sense s) { return s == Sense::minimize ? "minimize" : "maximize"; }

struct QuadTerm {
    int i;         // i < j
    int j;
    double value;  // symmetric matrix entry Q_ij = Q_ji

    friend bool operator==(const QuadTerm&, const QuadTerm&) = default;
};

// E(x) = x^T Q x + l^T x + offset over x in {0,1}^n, with Q symmetric and a
// zero stored diagonal (x^2 = x, so diagonal entries fold into the linear
// part). Each stored QuadTerm therefore contributes 2*value*x_i*x_j.
struct QuboProblem {
    int num_vars = 0;
    std::vector<double> linear;
    std::vector<QuadTerm> quadratic;  // canonical: i < j, sorted, no duplicates
    double offset = 0.0;
    Sense sense = Sense::minimize;

    friend bool operator==(const QuboProblem&, const QuboProblem&) = default;
};

class QuboBuilder {
public:
    explicit QuboBuilder(int num_vars) : n_(num_vars), linear_(static_cast<std::size_t>(num_vars), 0.0) {
        if (num_vars < 1) throw std::invalid_argument("QuboBuilder: num_vars must be >= 1");
    }

    void add_offset(double v) { offset_ += v; }

    void add_linear(int i, double v) {
        check_var(i);
        linear_[static_cast<std::size_t>(i)] += v;
    }

    // accumulate into the symmetric entry Q_ij; diagonal folds into linear
    void add_quadratic(int i, int j, double v) {
        check_var(i);
        check_var(j);
        if (i == j) {
            linear_[static_cast<std::size_t>(i)] += v;
            return;
        }
        if (i > j) std::swap(i, j);
        quad_[{i, j}] += v;
    }

    QuboProblem build(Sense sense) const {
        QuboProblem q;
        q.num_vars = n_;
        q.linear = linear_;
        q.offset = offset_;
        q.sense = sense;
        q.quadratic.reserve(quad_.size());
        for (const auto& [ij, v] : quad_)
            if (v != 0.0) q.quadratic.push_back({ij.first, ij.second, v});
        return q;
    }

private:
    void check_var(int i) const {
        if (i < 0 || i >= n_) throw std::invalid_argument("QuboBuilder: variable index out of range");
    }

    int n_;
    std::vector<double> linear_;
    std::map<std::pair<int, int>, double> quad_;
    double offset_ = 0.0;
};

inline double evaluate(const QuboProblem& q, const Configuration& x) {
    if (static_cast<int>(x.size()) != q.num_vars)
        throw std::invalid_argument("evaluate: configuration length mismatch");
    double e = q.offset;
    for (int i = 0; i < q.num_vars; ++i)
        if (x[static_cast<std::size_t>(i)]) e += q.linear[static_cast<std::size_t>(i)];
    for (const auto& t : q.quadratic)
        if (x[static_cast<std::size_t>(t.i)] && x[static_cast<std::size_t>(t.j)]) e += 2.0 * t.value;
    return e;
}

// E(s) = s^T J s + h^T s + offset over s in {-1,+1}^n; J symmetric with zero
// diagonal (a diagonal term would be the constant J_ii).
struct IsingProblem {
    int num_spins = 0;
    std::vector<double> field;        // h
    std::vector<QuadTerm> couplings;  // J, canonical i < j
    double offset = 0.0;
    Sense sense = Sense::minimize;
};

inline double evaluate_ising(const IsingProblem& p, const SpinVector& s) {
    if (static_cast<int>(s.size()) != p.num_spins)
        throw std::invalid_argument("evaluate_ising: spin vector length mismatch");
    double e = p.offset;
    for (int i = 0; i < p.num_spins; ++i) e += p.field[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(i)];
    for (const auto& t : p.couplings)
        e += 2.0 * t.value * s[static_cast<std::size_t>(t.i)] * s[static_cast<std::size_t>(t.j)];
    return e;
}

// Exact substitution s = 2x - 1: E_qubo(x) = E_ising(2x - 1) for every x.
inline QuboProblem ising_to_qubo(const IsingProblem& p) {
    for (const auto& t : p.couplings)
        if (t.i == t.j) throw std::invalid_argument("ising_to_qubo: nonzero J diagonal");
    QuboBuilder b(p.num_spins);
    double coupling_sum = 0.0;
    std::vector<double> row_sum(static_cast<std::size_t>(p.num_spins), 0.0);
    for (const auto& t : p.couplings) {
        b.add_quadratic(t.i, t.j, 4.0 * t.value);
        row_sum[static_cast<std::size_t>(t.i)] += t.value;
        row_sum[static_cast<std::size_t>(t.j)] += t.value;
        coupling_sum += 2.0 * t.value;
    }
    double field_sum = 0.0;
    for (int i = 0; i < p.num_spins; ++i) {
        double h = p.field[static_cast<std::size_t>(i)];
        b.add_linear(i, 2.0 * h - 4.0 * row_sum[static_cast<std::size_t>(i)]);
        field_sum += h;
    }
    b.add_offset(p.offset + coupling_sum - field_sum);
    return b.build(p.sense);
}

inline SpinVector to_spins(const Configuration& x) {
    SpinVector s(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) s[i] = x[i] ? 1 : -1;
    return s;
}

inline Configuration to_bits(const SpinVector& s) {
    Configuration x(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) x[i] = s[i] > 0 ? 1 : 0;
    return x;
}

// One-hot layout: variable of (node i, community c) is i*k + c, so each
// node's block is the contiguous range [i*k, (i+1)*k).
struct Encoding {
    int n = 0;
    int k = 1;

    Encoding(int n_, int k_) : n(n_), k(k_) {
        if (n < 1 || k < 1) throw std::invalid_argument("Encoding: n and k must be >= 1");
    }

    int num_vars() const { return n * k; }
    int var(int node, int community) const { return node * k + community; }
    int node_of(int var) const { return var / k; }
    int community_of(int var) const { return var % k; }
};

struct DecodeReport {
    struct Violation {
        int node;
        int bits_set;
    };
    std::optional<Assignment> assignment;
    std::vector<Violation> violations;

    bool feasible() const { return assignment.has_value(); }
};

inline DecodeReport decode_assignment(const Configuration& x, const Encoding& enc) {
    if (static_cast<int>(x.size()) != enc.num_vars())
        throw std::invalid_argument("decode_assignment: configuration length mismatch");
    DecodeReport report;
    std::vector<int> labels(static_cast<std::size_t>(enc.n), -1);
    for (int i = 0; i < enc.n; ++i) {
        int bits = 0;
        for (int c = 0; c < enc.k; ++c) {
            if (x[static_cast<std::size_t>(enc.var(i, c))]) {
                ++bits;
                labels[static_cast<std::size_t>(i)] = c;
            }
        }
        if (bits != 1) report.violations.push_back({i, bits});
    }
    if (report.violations.empty()) report.assignment = Assignment{std::move(labels), enc.k};
    return report;
}

inline Configuration encode_assignment(const Assignment& a, const Encoding& enc) {
    if (static_cast<int>(a.labels.size()) != enc.n)
        throw std::invalid_argument("encode_assignment: label count mismatch");
    Configuration x(static_cast<std::size_t>(enc.num_vars()), 0);
    for (int i = 0; i < enc.n; ++i) {
        int c = a.labels[static_cast<std::size_t>(i)];
        if (c < 0 || c >= enc.k) throw std::invalid_argument("encode_assignment: label out of range");
        x[static_cast<std::size_t>(enc.var(i, c))] = 1;
    }
    return x;
}

struct ClampResult {
    QuboProblem problem;           // over the free variables, original order kept
    std::vector<int> free_to_full; // reduced index -> original index
};

// Substitute fixed bits: energies satisfy
//   E_reduced(x_free) = E_full(merge(x_free, fixed)) for every free config.
inline ClampResult clamp(const QuboProblem& q, const std::map<int, std::uint8_t>& fixed) {
    for (const auto& [i, b] : fixed) {
        if (i < 0 || i >= q.num_vars) throw std::invalid_argument("clamp: fixed index out of range");
        if (b > 1) throw std::invalid_argument("clamp: fixed value must be 0 or 1");
    }
    if (static_cast<int>(fixed.size()) >= q.num_vars)
        throw std::invalid_argument("clamp: at least one variable must remain free");

    std::vector<int> full_to_free(static_cast<std::size_t>(q.num_vars), -1);
    ClampResult r;
    for (int i = 0; i < q.num_vars; ++i) {
        if (!fixed.count(i)) {
            full_to_free[static_cast<std::size_t>(i)] = static_cast<int>(r.free_to_full.size());
            r.free_to_full.push_back(i);
        }
    }

    QuboBuilder b(static_cast<int>(r.free_to_full.size()));
    double off = q.offset;
    for (int i = 0; i < q.num_vars; ++i) {
        double l = q.linear[static_cast<std::size_t>(i)];
        auto it = fixed.find(i);
        if (it == fixed.end())
            b.add_linear(full_to_free[static_cast<std::size_t>(i)], l);
        else if (it->second)
            off += l;
    }
    for (const auto& t : q.quadratic) {
        auto fi = fixed.find(t.i);
        auto fj = fixed.find(t.j);
        bool i_fixed = fi != fixed.end(), j_fixed = fj != fixed.end();
        if (!i_fixed && !j_fixed) {
            b.add_quadratic(full_to_free[static_cast<std::size_t>(t.i)],
                            full_to_free[static_cast<std::size_t>(t.j)], t.value);
        } else if (i_fixed && j_fixed) {
            if (fi->second && fj->second) off += 2.0 * t.value;
        } else if (i_fixed) {
            if (fi->second) b.add_linear(full_to_free[static_cast<std::size_t>(t.j)], 2.0 * t.value);
        } else {
            if (fj->second) b.add_linear(full_to_free[static_cast<std::size_t>(t.i)], 2.0 * t.value);
        }
    }
    b.add_offset(off);
    r.problem = b.build(q.sense);
    return r;
}

inline Configuration merge_clamped(const Configuration& x_free, const std::map<int, std::uint8_t>& fixed,
                                   int num_vars_full) {
    Configuration x(static_cast<std::size_t>(num_vars_full), 0);
    for (const auto& [i, bit] : fixed) x[static_cast<std::size_t>(i)] = bit;
    std::size_t fi = 0;
    for (int i = 0; i < num_vars_full; ++i)
        if (!fixed.count(i)) x[static_cast<std::size_t>(i)] = x_free.at(fi++);
    if (fi != x_free.size()) throw std::invalid_argument("merge_clamped: free configuration length mismatch");
    return x;
}

}  // namespace sgcd
