#pragma once

#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgcd/d3_data.hpp"
#include "sgcd/signed_graph.hpp"

namespace sgcd {

namespace detail {

struct UnionFind {
    std::vector<int> parent;

    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int a) {
        while (parent[static_cast<std::size_t>(a)] != a) {
            parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
            a = parent[static_cast<std::size_t>(a)];
        }
        return a;
    }
    void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

}  // namespace detail

// Planted-cluster benchmark graphs: positive edges inside each cluster drawn
// independently with `intra_edge_prob`, plus one negative edge between the
// designated (lowest-index) nodes of every cluster pair. With `repair`, any
// intra-cluster component the draw left detached is linked to the designated
// node by one positive edge, so the planted partition is unambiguous. The
// planted assignment has badness 0 either way.
inline SignedGraph generate_planted(const std::vector<int>& cluster_sizes, double intra_edge_prob,
                                    std::uint64_t seed, bool repair = true) {
    if (cluster_sizes.size() < 2) throw std::invalid_argument("generate_planted: need >= 2 clusters");
    for (int s : cluster_sizes)
        if (s < 1) throw std::invalid_argument("generate_planted: cluster sizes must be >= 1");
    if (!(intra_edge_prob > 0.0) || intra_edge_prob > 1.0)
        throw std::invalid_argument("generate_planted: intra_edge_prob must be in (0, 1]");

    int n = 0;
    for (int s : cluster_sizes) n += s;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<SignedEdge> edges;
    std::vector<int> designated;
    int base = 0;
    for (int s : cluster_sizes) {
        designated.push_back(base);
        detail::UnionFind uf(s);
        for (int i = 0; i < s; ++i)
            for (int j = i + 1; j < s; ++j)
                if (unit(rng) < intra_edge_prob) {
                    edges.push_back({base + i, base + j, +1});
                    uf.unite(i, j);
                }
        if (repair) {
            // one positive edge from the designated node to the lowest-index
            // member of each detached component
            for (int i = 1; i < s; ++i) {
                if (uf.find(i) == uf.find(0)) continue;
                edges.push_back({base, base + i, +1});
                uf.unite(i, 0);
            }
        }
        base += s;
    }
    for (std::size_t a = 0; a < designated.size(); ++a)
        for (std::size_t b = a + 1; b < designated.size(); ++b)
            edges.push_back({designated[a], designated[b], -1});

    SignedGraph g(n, std::move(edges));

    Assignment planted{std::vector<int>(static_cast<std::size_t>(n)), static_cast<int>(cluster_sizes.size())};
    int at = 0, cluster = 0;
    for (int s : cluster_sizes) {
        for (int i = 0; i < s; ++i) planted.labels[static_cast<std::size_t>(at++)] = cluster;
        ++cluster;
    }
    if (badness(g, planted) != 0) throw std::logic_error("generate_planted: planted assignment not badness-free");
    return g;
}

inline Assignment planted_assignment(const std::vector<int>& cluster_sizes) {
    Assignment a{{}, static_cast<int>(cluster_sizes.size())};
    int cluster = 0;
    for (int s : cluster_sizes) {
        a.labels.insert(a.labels.end(), static_cast<std::size_t>(s), cluster);
        ++cluster;
    }
    return a;
}

// The bundled 16-node highland tribes graph (see data/ for provenance).
inline SignedGraph load_bundled_d3() {
    std::string_view text = d3::kEdgeListText;
    if (fnv1a64(text) != d3::kChecksumFnv1a64)
        throw std::runtime_error("bundled d3 dataset is corrupted (checksum mismatch)");
    return parse_edge_list(text);
}

}  // namespace sgcd
