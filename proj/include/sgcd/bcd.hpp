#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgcd/qubo.hpp"
#include "sgcd/solvers.hpp"

namespace sgcd {

enum class PartitionStrategy { random_per_iteration, fixed };

struct InnerSolver {
    enum class Kind { brute, sa, pticm };

    Kind kind = Kind::pticm;
    std::uint64_t sweeps = 100;  // per block solve (sa/pticm)
    SaParams sa;
    PticmParams pticm;
    BruteForceOptions brute;

    static const char* name(Kind k) {
        switch (k) {
            case Kind::brute: return "brute";
            case Kind::sa: return "sa";
            default: return "pticm";
        }
    }
};

struct BcdConfig {
    int h = 1;
    int iterations = 200;
    PartitionStrategy strategy = PartitionStrategy::random_per_iteration;
    InnerSolver inner;
    std::uint64_t seed = 1;
};

struct BcdTrace {
    std::vector<double> incumbent_energy;         // index 0 = initial incumbent
    std::vector<std::vector<int>> block_of_node;  // per iteration, length n
    Configuration final_configuration;
    double final_energy = 0.0;
};

// Shuffle nodes and deal them into h nearly equal blocks (sizes differ by
// at most one). Deterministic in the rng state.
inline std::vector<std::vector<int>> partition_nodes(int n, int h, std::mt19937_64& rng) {
    if (h < 1 || h > n) throw std::invalid_argument("partition_nodes: need 1 <= h <= n");
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::vector<int>> blocks(static_cast<std::size_t>(h));
    int base = n / h, extra = n % h;
    std::size_t at = 0;
    for (int b = 0; b < h; ++b) {
        int size = base + (b < extra ? 1 : 0);
        blocks[static_cast<std::size_t>(b)].assign(order.begin() + static_cast<long>(at),
                                                   order.begin() + static_cast<long>(at) + size);
        std::sort(blocks[static_cast<std::size_t>(b)].begin(), blocks[static_cast<std::size_t>(b)].end());
        at += static_cast<std::size_t>(size);
    }
    return blocks;
}

inline std::vector<std::vector<int>> partition_nodes(int n, int h, std::uint64_t seed) {
    std::mt19937_64 rng(detail::derive_seed(seed, 0x9a57));
    return partition_nodes(n, h, rng);
}

// Block coordinate descent over node blocks: all k one-hot variables of a
// node travel together, so a block solve can always restore that node's
// feasibility. Blocks are solved sequentially against the live incumbent
// (Gauss-Seidel order); a block result is adopted only when it does not
// worsen the incumbent, which makes the energy trace monotone.
inline BcdTrace run_bcd(const QuboProblem& problem, const Encoding& enc, const BcdConfig& cfg) {
    if (problem.num_vars != enc.num_vars())
        throw std::invalid_argument("run_bcd: problem size does not match encoding");
    if (cfg.h < 1 || cfg.h > enc.n) throw std::invalid_argument("run_bcd: need 1 <= h <= n");
    if (cfg.iterations < 1) throw std::invalid_argument("run_bcd: iterations must be >= 1");

    const double sense_mult = problem.sense == Sense::maximize ? -1.0 : 1.0;

    std::mt19937_64 init_rng(detail::derive_seed(cfg.seed, 0xb0));
    std::mt19937_64 part_rng(detail::derive_seed(cfg.seed, 0xb1));

    // feasible random incumbent: iteration-0 energy is already a partition's
    std::uniform_int_distribution<int> pick_comm(0, enc.k - 1);
    Assignment start{std::vector<int>(static_cast<std::size_t>(enc.n)), enc.k};
    for (auto& l : start.labels) l = pick_comm(init_rng);
    Configuration incumbent = encode_assignment(start, enc);
    double inc_energy = evaluate(problem, incumbent);

    BcdTrace trace;
    trace.incumbent_energy.push_back(inc_energy);

    auto fixed_partition = cfg.strategy == PartitionStrategy::fixed
                               ? partition_nodes(enc.n, cfg.h, part_rng)
                               : std::vector<std::vector<int>>{};

    for (int it = 0; it < cfg.iterations; ++it) {
        const auto blocks = cfg.strategy == PartitionStrategy::fixed
                                ? fixed_partition
                                : partition_nodes(enc.n, cfg.h, part_rng);

        std::vector<int> block_of(static_cast<std::size_t>(enc.n), -1);
        for (std::size_t b = 0; b < blocks.size(); ++b)
            for (int node : blocks[b]) block_of[static_cast<std::size_t>(node)] = static_cast<int>(b);
        trace.block_of_node.push_back(std::move(block_of));

        for (std::size_t b = 0; b < blocks.size(); ++b) {
            std::map<int, std::uint8_t> fixed;
            std::vector<std::uint8_t> in_block(static_cast<std::size_t>(enc.n), 0);
            for (int node : blocks[b]) in_block[static_cast<std::size_t>(node)] = 1;
            for (int node = 0; node < enc.n; ++node) {
                if (in_block[static_cast<std::size_t>(node)]) continue;
                for (int c = 0; c < enc.k; ++c) {
                    int v = enc.var(node, c);
                    fixed[v] = incumbent[static_cast<std::size_t>(v)];
                }
            }
            auto reduced = clamp(problem, fixed);

            SolverRequest req;
            req.seed = detail::derive_seed(cfg.seed, 0xc000 + static_cast<std::uint64_t>(it) * 64 + b);
            req.sweeps = cfg.inner.sweeps;
            Configuration warm(reduced.free_to_full.size());
            for (std::size_t i = 0; i < reduced.free_to_full.size(); ++i)
                warm[i] = incumbent[static_cast<std::size_t>(reduced.free_to_full[i])];
            req.initial = std::move(warm);

            SolverResult sol;
            switch (cfg.inner.kind) {
                case InnerSolver::Kind::brute:
                    sol = solve_brute_force(reduced.problem, cfg.inner.brute);
                    break;
                case InnerSolver::Kind::sa:
                    sol = solve_sa(reduced.problem, req, cfg.inner.sa);
                    break;
                case InnerSolver::Kind::pticm:
                    sol = solve_pticm(reduced.problem, req, cfg.inner.pticm);
                    break;
            }

            if (sense_mult * sol.best_energy <= sense_mult * inc_energy) {
                for (std::size_t i = 0; i < reduced.free_to_full.size(); ++i)
                    incumbent[static_cast<std::size_t>(reduced.free_to_full[i])] = sol.best_configuration[i];
                inc_energy = sol.best_energy;
            }
        }
        trace.incumbent_energy.push_back(inc_energy);
    }

    trace.final_configuration = std::move(incumbent);
    trace.final_energy = inc_energy;
    return trace;
}

}  // namespace sgcd
