#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <utility>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sgcd {

template <typename T>
using Mat = std::vector<std::vector<T>>;

template <typename T>
Mat<T> make_mat(std::size_t rows, std::size_t cols, T fill = T{}) {
    return Mat<T>(rows, std::vector<T>(cols, fill));
}

// FNV-1a, used for graph fingerprints and bundled-data checksums.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

struct SignedEdge {
    int u;     // u < v
    int v;
    int sign;  // +1 or -1

    friend bool operator==(const SignedEdge&, const SignedEdge&) = default;
};

struct Assignment {
    std::vector<int> labels;  // labels[i] in [0, k)
    int k = 1;
};

struct TriadCensus {
    std::uint64_t c0 = 0;  // triangles with 0 negative edges
    std::uint64_t c1 = 0;
    std::uint64_t c2 = 0;
    std::uint64_t c3 = 0;

    std::uint64_t total() const { return c0 + c1 + c2 + c3; }
    std::uint64_t stable() const { return c0 + c2; }
    std::uint64_t unstable() const { return c1 + c3; }
};

// Undirected signed graph with dense node indices and external string ids.
// Immutable after construction; edges are stored once as (u < v, sign).
class SignedGraph {
public:
    SignedGraph(int node_count, std::vector<SignedEdge> edges,
                std::vector<std::string> node_ids = {})
        : n_(node_count), edges_(std::move(edges)), node_ids_(std::move(node_ids)) {
        if (n_ < 1) throw std::invalid_argument("SignedGraph: node_count must be >= 1");
        if (node_ids_.empty()) {
            node_ids_.reserve(static_cast<std::size_t>(n_));
            for (int i = 0; i < n_; ++i) node_ids_.push_back("v" + std::to_string(i));
        }
        if (static_cast<int>(node_ids_.size()) != n_)
            throw std::invalid_argument("SignedGraph: node_ids length mismatch");
        for (auto& e : edges_) {
            if (e.u > e.v) std::swap(e.u, e.v);
            if (e.u == e.v) throw std::invalid_argument("SignedGraph: self-loop");
            if (e.u < 0 || e.v >= n_) throw std::invalid_argument("SignedGraph: edge endpoint out of range");
            if (e.sign != 1 && e.sign != -1) throw std::invalid_argument("SignedGraph: sign must be +1 or -1");
        }
        std::sort(edges_.begin(), edges_.end(),
                  [](const SignedEdge& a, const SignedEdge& b) {
                      return std::pair(a.u, a.v) < std::pair(b.u, b.v);
                  });
        for (std::size_t i = 1; i < edges_.size(); ++i)
            if (edges_[i].u == edges_[i - 1].u && edges_[i].v == edges_[i - 1].v)
                throw std::invalid_argument("SignedGraph: duplicate edge");
        pos_degree_.assign(static_cast<std::size_t>(n_), 0);
        neg_degree_.assign(static_cast<std::size_t>(n_), 0);
        adj_.resize(static_cast<std::size_t>(n_));
        for (const auto& e : edges_) {
            auto& dv = e.sign > 0 ? pos_degree_ : neg_degree_;
            ++dv[static_cast<std::size_t>(e.u)];
            ++dv[static_cast<std::size_t>(e.v)];
            adj_[static_cast<std::size_t>(e.u)].push_back({e.v, e.sign});
            adj_[static_cast<std::size_t>(e.v)].push_back({e.u, e.sign});
            if (e.sign > 0) ++mp_; else ++mn_;
        }
        for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
    }

    int node_count() const { return n_; }
    const std::vector<SignedEdge>& edges() const { return edges_; }
    long edge_count() const { return mp_ + mn_; }
    long positive_edge_count() const { return mp_; }
    long negative_edge_count() const { return mn_; }

    int positive_degree(int i) const { return pos_degree_.at(static_cast<std::size_t>(i)); }
    int negative_degree(int i) const { return neg_degree_.at(static_cast<std::size_t>(i)); }
    int degree(int i) const { return positive_degree(i) + negative_degree(i); }

    const std::vector<std::string>& node_ids() const { return node_ids_; }
    const std::string& node_id(int i) const { return node_ids_.at(static_cast<std::size_t>(i)); }

    // neighbors as (other endpoint, sign), sorted by endpoint
    const std::vector<std::pair<int, int>>& neighbors(int i) const {
        return adj_.at(static_cast<std::size_t>(i));
    }

    // A_ij in {-1, 0, +1}
    int sign(int i, int j) const {
        const auto& nb = adj_.at(static_cast<std::size_t>(i));
        auto it = std::lower_bound(nb.begin(), nb.end(), std::pair(j, std::numeric_limits<int>::min()));
        if (it != nb.end() && it->first == j) return it->second;
        return 0;
    }

    Mat<int> adjacency() const {
        auto a = make_mat<int>(static_cast<std::size_t>(n_), static_cast<std::size_t>(n_));
        for (const auto& e : edges_) {
            a[static_cast<std::size_t>(e.u)][static_cast<std::size_t>(e.v)] = e.sign;
            a[static_cast<std::size_t>(e.v)][static_cast<std::size_t>(e.u)] = e.sign;
        }
        return a;
    }

    std::string fingerprint() const {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(fnv1a64(to_edge_list())));
        return std::string(buf);
    }

    // Canonical edge-list text: node lines first (preserves index order and
    // isolated nodes), then edges sorted by (u, v).
    std::string to_edge_list() const {
        std::string out;
        for (const auto& id : node_ids_) {
            out += id;
            out += '\n';
        }
        for (const auto& e : edges_) {
            out += node_ids_[static_cast<std::size_t>(e.u)];
            out += ' ';
            out += node_ids_[static_cast<std::size_t>(e.v)];
            out += (e.sign > 0 ? " +1\n" : " -1\n");
        }
        return out;
    }

private:
    int n_;
    std::vector<SignedEdge> edges_;
    std::vector<std::string> node_ids_;
    std::vector<int> pos_degree_, neg_degree_;
    std::vector<std::vector<std::pair<int, int>>> adj_;
    long mp_ = 0, mn_ = 0;
};

// Edge-list text format, one item per line:
//   "<id>"                declares a node (optional; fixes index order, keeps isolated nodes)
//   "<src> <dst> <sign>"  edge with sign +1/1/-1
// '#' as first non-blank character starts a comment line; blank lines ignored.
inline SignedGraph parse_edge_list(std::string_view text) {
    std::vector<std::string> ids;
    std::unordered_map<std::string, int> index_of;
    std::vector<SignedEdge> edges;
    std::unordered_map<std::uint64_t, bool> seen_pair;

    auto intern = [&](const std::string& name) {
        auto [it, inserted] = index_of.try_emplace(name, static_cast<int>(ids.size()));
        if (inserted) ids.push_back(name);
        return it->second;
    };

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        std::vector<std::string> tok;
        std::istringstream ls{std::string(line)};
        for (std::string t; ls >> t;) tok.push_back(std::move(t));
        if (tok.empty() || tok[0][0] == '#') continue;

        auto fail = [&](const std::string& why) {
            throw std::invalid_argument("edge list line " + std::to_string(line_no) + ": " + why);
        };
        if (tok.size() == 1) {
            intern(tok[0]);
            continue;
        }
        if (tok.size() != 3) fail("expected '<src> <dst> <sign>'");
        int sign;
        if (tok[2] == "+1" || tok[2] == "1") sign = 1;
        else if (tok[2] == "-1") sign = -1;
        else fail("sign '" + tok[2] + "' not in {+1, 1, -1}");
        if (tok[0] == tok[1]) fail("self-loop on '" + tok[0] + "'");
        int u = intern(tok[0]);
        int v = intern(tok[1]);
        int a = std::min(u, v), b = std::max(u, v);
        std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
        if (!seen_pair.emplace(key, true).second)
            fail("duplicate edge '" + tok[0] + " " + tok[1] + "'");
        edges.push_back({a, b, sign});
    }
    if (ids.empty()) throw std::invalid_argument("edge list: no nodes");
    const int n = static_cast<int>(ids.size());
    return SignedGraph(n, std::move(edges), std::move(ids));
}

inline SignedGraph load_edge_list(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open edge list: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_edge_list(ss.str());
}

inline void save_edge_list(const SignedGraph& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write edge list: " + path);
    out << g.to_edge_list();
}

// P_ij = (A_ij + A'_ij)/2, N_ij = (A'_ij - A_ij)/2; both binary, disjoint supports.
inline std::pair<Mat<int>, Mat<int>> pn_matrices(const SignedGraph& g) {
    auto n = static_cast<std::size_t>(g.node_count());
    auto p = make_mat<int>(n, n);
    auto nm = make_mat<int>(n, n);
    for (const auto& e : g.edges()) {
        auto& m = e.sign > 0 ? p : nm;
        m[static_cast<std::size_t>(e.u)][static_cast<std::size_t>(e.v)] = 1;
        m[static_cast<std::size_t>(e.v)][static_cast<std::size_t>(e.u)] = 1;
    }
    return {std::move(p), std::move(nm)};
}

inline void validate_assignment(const SignedGraph& g, const Assignment& a) {
    if (static_cast<int>(a.labels.size()) != g.node_count())
        throw std::invalid_argument("assignment length does not match node count");
    for (int l : a.labels)
        if (l < 0 || l >= a.k) throw std::invalid_argument("assignment label out of range");
}

// Frustrated-edge count: negative edges inside a community plus positive
// edges between communities, each undirected edge counted once.
inline long badness(const SignedGraph& g, const Assignment& a) {
    validate_assignment(g, a);
    long b = 0;
    for (const auto& e : g.edges()) {
        bool same = a.labels[static_cast<std::size_t>(e.u)] == a.labels[static_cast<std::size_t>(e.v)];
        if (same == (e.sign < 0)) ++b;
    }
    return b;
}

inline TriadCensus triad_census(const SignedGraph& g) {
    TriadCensus c;
    const int n = g.node_count();
    for (int u = 0; u < n; ++u) {
        for (auto [v, suv] : g.neighbors(u)) {
            if (v <= u) continue;
            for (auto [w, svw] : g.neighbors(v)) {
                if (w <= v) continue;
                int suw = g.sign(u, w);
                if (suw == 0) continue;
                int negs = (suv < 0) + (svw < 0) + (suw < 0);
                (negs == 0 ? c.c0 : negs == 1 ? c.c1 : negs == 2 ? c.c2 : c.c3) += 1;
            }
        }
    }
    return c;
}

// Exact minimum badness over all partitions into at most k communities.
// Depth-first search over canonical labelings (label[i] <= 1 + max of earlier
// labels) with partial-count pruning; feasible up to n ~ 20 for small optima.
inline long exact_min_badness(const SignedGraph& g, int k, Assignment* best_out = nullptr) {
    if (k < 1) throw std::invalid_argument("exact_min_badness: k must be >= 1");
    const int n = g.node_count();
    std::vector<int> labels(static_cast<std::size_t>(n), 0);
    std::vector<int> best_labels = labels;
    long best = std::numeric_limits<long>::max();

    // cost of adding node `i` with `lab` against already-labelled neighbors
    auto added_cost = [&](int i, int lab) {
        long c = 0;
        for (auto [j, s] : g.neighbors(i)) {
            if (j >= i) continue;
            bool same = labels[static_cast<std::size_t>(j)] == lab;
            if (same == (s < 0)) ++c;
        }
        return c;
    };

    auto dfs = [&](auto&& self, int i, int used, long partial) -> void {
        if (partial >= best) return;
        if (i == n) {
            best = partial;
            best_labels = labels;
            return;
        }
        int limit = std::min(k, used + 1);
        for (int lab = 0; lab < limit; ++lab) {
            labels[static_cast<std::size_t>(i)] = lab;
            self(self, i + 1, std::max(used, lab + 1), partial + added_cost(i, lab));
        }
    };
    dfs(dfs, 0, 0, 0);

    if (best_out) *best_out = Assignment{best_labels, k};
    return best;
}

}  // namespace sgcd
