#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sgcd/qubo.hpp"

// Incremental-energy audits (full re-evaluation every 2^10 accepted moves)
// are compiled in unless NDEBUG, or always with SGCD_FORCE_AUDIT.
#if !defined(NDEBUG) || defined(SGCD_FORCE_AUDIT)
#define SGCD_AUDIT_ENABLED 1
#else
#define SGCD_AUDIT_ENABLED 0
#endif

namespace sgcd {

struct SolverRequest {
    std::uint64_t seed = 1;
    std::uint64_t sweeps = 1000;  // budget, in Monte Carlo sweeps per replica
    std::optional<Configuration> initial;
};

struct SolverResult {
    Configuration best_configuration;
    double best_energy = 0.0;  // in the problem's own sense
    std::vector<std::pair<std::uint64_t, double>> energy_trace;  // (sweep, best so far)
    std::uint64_t seed = 0;
    std::string solver;
    std::vector<std::pair<std::string, double>> params;  // echoed settings
    std::uint64_t cluster_moves = 0;
    double cluster_move_max_drift = 0.0;  // max |d(E1+E2)| over cluster moves (audited runs)
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(splitmix64(master) ^ splitmix64(stream * 0x9e3779b97f4a7c15ull + 1));
}

// Minimization view of a QuboProblem: coefficients are negated for
// maximize-sense inputs, adjacency is CSR over symmetric entries.
struct CompiledQubo {
    int n = 0;
    double sense_mult = 1.0;  // internal E = sense_mult * original E
    std::vector<double> linear;
    std::vector<int> row_start;
    std::vector<int> col;
    std::vector<double> val;  // symmetric entry, internal sign
    double offset = 0.0;
    double coeff_scale = 1.0;  // max |coefficient|, >= 1e-12

    explicit CompiledQubo(const QuboProblem& q) {
        n = q.num_vars;
        sense_mult = q.sense == Sense::maximize ? -1.0 : 1.0;
        offset = sense_mult * q.offset;
        linear.resize(static_cast<std::size_t>(n));
        double scale = 0.0;
        for (int i = 0; i < n; ++i) {
            linear[static_cast<std::size_t>(i)] = sense_mult * q.linear[static_cast<std::size_t>(i)];
            scale = std::max(scale, std::abs(q.linear[static_cast<std::size_t>(i)]));
        }
        std::vector<int> deg(static_cast<std::size_t>(n), 0);
        for (const auto& t : q.quadratic) {
            ++deg[static_cast<std::size_t>(t.i)];
            ++deg[static_cast<std::size_t>(t.j)];
            scale = std::max(scale, std::abs(2.0 * t.value));
        }
        row_start.assign(static_cast<std::size_t>(n) + 1, 0);
        for (int i = 0; i < n; ++i) row_start[static_cast<std::size_t>(i) + 1] = row_start[static_cast<std::size_t>(i)] + deg[static_cast<std::size_t>(i)];
        col.resize(static_cast<std::size_t>(row_start[static_cast<std::size_t>(n)]));
        val.resize(col.size());
        std::vector<int> fill(row_start.begin(), row_start.end() - 1);
        for (const auto& t : q.quadratic) {
            double v = sense_mult * t.value;
            col[static_cast<std::size_t>(fill[static_cast<std::size_t>(t.i)])] = t.j;
            val[static_cast<std::size_t>(fill[static_cast<std::size_t>(t.i)]++)] = v;
            col[static_cast<std::size_t>(fill[static_cast<std::size_t>(t.j)])] = t.i;
            val[static_cast<std::size_t>(fill[static_cast<std::size_t>(t.j)]++)] = v;
        }
        coeff_scale = std::max(scale, 1e-12);
    }

    double energy(const Configuration& x) const {
        double e = offset;
        for (int v = 0; v < n; ++v) {
            if (!x[static_cast<std::size_t>(v)]) continue;
            e += linear[static_cast<std::size_t>(v)];
            for (int p = row_start[static_cast<std::size_t>(v)]; p < row_start[static_cast<std::size_t>(v) + 1]; ++p) {
                int u = col[static_cast<std::size_t>(p)];
                if (u > v && x[static_cast<std::size_t>(u)]) e += 2.0 * val[static_cast<std::size_t>(p)];
            }
        }
        return e;
    }

    double coupling(int u, int v) const {
        int lo = row_start[static_cast<std::size_t>(u)], hi = row_start[static_cast<std::size_t>(u) + 1];
        while (lo < hi) {
            int mid = (lo + hi) / 2;
            if (col[static_cast<std::size_t>(mid)] < v) lo = mid + 1; else hi = mid;
        }
        if (lo < row_start[static_cast<std::size_t>(u) + 1] && col[static_cast<std::size_t>(lo)] == v)
            return val[static_cast<std::size_t>(lo)];
        return 0.0;
    }
};

// Monte Carlo state over one configuration: maintains per-variable local
// fields so single-bit energy deltas are O(degree).
class SweepEngine {
public:
    SweepEngine(const CompiledQubo& q, Configuration x0) : q_(&q), x_(std::move(x0)) {
        fields_.assign(static_cast<std::size_t>(q.n), 0.0);
        for (int v = 0; v < q.n; ++v) fields_[static_cast<std::size_t>(v)] = q.linear[static_cast<std::size_t>(v)];
        for (int v = 0; v < q.n; ++v) {
            if (!x_[static_cast<std::size_t>(v)]) continue;
            for (int p = q.row_start[static_cast<std::size_t>(v)]; p < q.row_start[static_cast<std::size_t>(v) + 1]; ++p)
                fields_[static_cast<std::size_t>(q.col[static_cast<std::size_t>(p)])] += 2.0 * q.val[static_cast<std::size_t>(p)];
        }
        energy_ = q.energy(x_);
        best_energy_ = energy_;
        best_x_ = x_;
    }

    const Configuration& config() const { return x_; }
    double energy() const { return energy_; }
    double best_energy() const { return best_energy_; }
    const Configuration& best_config() const { return best_x_; }

    double flip_delta(int v) const {
        return (x_[static_cast<std::size_t>(v)] ? -1.0 : 1.0) * fields_[static_cast<std::size_t>(v)];
    }

    void flip(int v) {
        double d = (x_[static_cast<std::size_t>(v)] ? -2.0 : 2.0);
        energy_ += flip_delta(v);
        x_[static_cast<std::size_t>(v)] ^= 1u;
        for (int p = q_->row_start[static_cast<std::size_t>(v)]; p < q_->row_start[static_cast<std::size_t>(v) + 1]; ++p)
            fields_[static_cast<std::size_t>(q_->col[static_cast<std::size_t>(p)])] += d * q_->val[static_cast<std::size_t>(p)];
    }

    void note_best() {
        if (energy_ < best_energy_) {
            best_energy_ = energy_;
            best_x_ = x_;
        }
    }

    // One sweep = n proposals. With move_fraction > 0 a proposal may instead
    // re-draw a whole one-hot block (requires block_k and n % block_k == 0).
    void sweep(double beta, std::mt19937_64& rng, double move_fraction = 0.0, int block_k = 0) {
        std::uniform_int_distribution<int> pick_var(0, q_->n - 1);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int step = 0; step < q_->n; ++step) {
            if (move_fraction > 0.0 && unit(rng) < move_fraction) {
                propose_block(beta, rng, block_k);
                continue;
            }
            int v = pick_var(rng);
            double d = flip_delta(v);
            if (d <= 0.0 || unit(rng) < std::exp(-beta * d)) {
                flip(v);
                note_best();
                on_accept();
            }
        }
    }

    // exchanges complete engine state; temperatures stay with the slot
    static void swap_state(SweepEngine& a, SweepEngine& b) {
        std::swap(a.x_, b.x_);
        std::swap(a.fields_, b.fields_);
        std::swap(a.energy_, b.energy_);
    }

    void audit_now() const {
        double fresh = q_->energy(x_);
        if (std::abs(fresh - energy_) > 1e-9 * std::max(1.0, std::abs(fresh)))
            throw std::logic_error("SweepEngine: incremental energy drifted from full re-evaluation");
    }

private:
    void propose_block(double beta, std::mt19937_64& rng, int k) {
        std::uniform_int_distribution<int> pick_node(0, q_->n / k - 1);
        std::uniform_int_distribution<int> pick_comm(0, k - 1);
        int node = pick_node(rng);
        int target = pick_comm(rng);
        int base = node * k;
        int flips[64];
        int nf = 0;
        for (int c = 0; c < k; ++c) {
            int v = base + c;
            std::uint8_t want = (c == target) ? 1 : 0;
            if (x_[static_cast<std::size_t>(v)] != want) flips[nf++] = v;
        }
        if (nf == 0) return;
        double d = 0.0;
        for (int a = 0; a < nf; ++a) {
            int v = flips[a];
            double dv = x_[static_cast<std::size_t>(v)] ? -1.0 : 1.0;
            d += dv * fields_[static_cast<std::size_t>(v)];
            for (int b2 = a + 1; b2 < nf; ++b2) {
                int u = flips[b2];
                double du = x_[static_cast<std::size_t>(u)] ? -1.0 : 1.0;
                d += 2.0 * q_->coupling(v, u) * dv * du;
            }
        }
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        if (d <= 0.0 || unit(rng) < std::exp(-beta * d)) {
            for (int a = 0; a < nf; ++a) flip(flips[a]);
            note_best();
            on_accept();
        }
    }

    void on_accept() {
#if SGCD_AUDIT_ENABLED
        if ((++accepted_ & 0x3ffu) == 0) audit_now();
#endif
    }

    const CompiledQubo* q_;
    Configuration x_;
    std::vector<double> fields_;
    double energy_ = 0.0;
    double best_energy_ = 0.0;
    Configuration best_x_;
#if SGCD_AUDIT_ENABLED
    std::uint64_t accepted_ = 0;
#endif
};

inline Configuration random_configuration(int n, std::mt19937_64& rng) {
    Configuration x(static_cast<std::size_t>(n));
    std::uniform_int_distribution<int> bit(0, 1);
    for (auto& b : x) b = static_cast<std::uint8_t>(bit(rng));
    return x;
}

inline void check_request(const QuboProblem& q, const SolverRequest& req) {
    if (req.sweeps == 0) throw std::invalid_argument("solver budget must be > 0");
    if (req.initial && static_cast<int>(req.initial->size()) != q.num_vars)
        throw std::invalid_argument("initial configuration length mismatch");
}

inline void check_move_mix(const QuboProblem& q, double fraction, int k) {
    if (fraction < 0.0 || fraction > 1.0)
        throw std::invalid_argument("swap_move_fraction must be in [0, 1]");
    if (fraction > 0.0 && (k < 2 || k > 64 || q.num_vars % k != 0))
        throw std::invalid_argument("block moves need a one-hot block size dividing num_vars");
}

}  // namespace detail

struct BruteForceOptions {
    int max_vars = 26;
};

// Exact enumeration via a Gray-code walk; ties resolved toward the
// lexicographically smallest configuration.
inline SolverResult solve_brute_force(const QuboProblem& q, const BruteForceOptions& opt = {}) {
    if (q.num_vars > opt.max_vars)
        throw std::invalid_argument("solve_brute_force: problem too large (" + std::to_string(q.num_vars) +
                                    " > " + std::to_string(opt.max_vars) + " variables)");
    detail::CompiledQubo cq(q);
    detail::SweepEngine eng(cq, Configuration(static_cast<std::size_t>(q.num_vars), 0));

    Configuration best_x = eng.config();
    double best = eng.energy();
    SolverResult res;
    res.solver = "brute";
    res.energy_trace.push_back({0, cq.sense_mult * best});

    const std::uint64_t total = 1ull << q.num_vars;
    for (std::uint64_t i = 1; i < total; ++i) {
        int v = std::countr_zero(i);
        eng.flip(v);
        double e = eng.energy();
        if (e < best || (e == best && eng.config() < best_x)) {
            bool improved = e < best;
            best = e;
            best_x = eng.config();
            if (improved) res.energy_trace.push_back({i, cq.sense_mult * best});
        }
    }
    res.best_configuration = best_x;
    res.best_energy = evaluate(q, best_x);
    res.params = {{"max_vars", static_cast<double>(opt.max_vars)}};
    return res;
}

struct SaParams {
    std::optional<double> t_start;  // default 10 * coefficient scale
    std::optional<double> t_end;    // default 0.1 * coefficient scale
    double swap_move_fraction = 0.0;
    int one_hot_k = 0;
};

inline SolverResult solve_sa(const QuboProblem& q, const SolverRequest& req, const SaParams& params = {}) {
    detail::check_request(q, req);
    detail::check_move_mix(q, params.swap_move_fraction, params.one_hot_k);
    detail::CompiledQubo cq(q);
    const double t_start = params.t_start.value_or(10.0 * cq.coeff_scale);
    const double t_end = params.t_end.value_or(0.1 * cq.coeff_scale);
    if (!(t_start > t_end) || !(t_end > 0.0))
        throw std::invalid_argument("solve_sa: schedule requires T_start > T_end > 0");

    std::mt19937_64 rng(detail::derive_seed(req.seed, 0x5a));
    Configuration x0 = req.initial ? *req.initial : detail::random_configuration(q.num_vars, rng);
    detail::SweepEngine eng(cq, std::move(x0));

    SolverResult res;
    res.solver = "sa";
    res.seed = req.seed;
    res.energy_trace.push_back({0, cq.sense_mult * eng.best_energy()});
    const double ratio = req.sweeps > 1 ? std::pow(t_end / t_start, 1.0 / static_cast<double>(req.sweeps - 1)) : 1.0;
    double t = t_start;
    double best_seen = eng.best_energy();
    for (std::uint64_t s = 0; s < req.sweeps; ++s, t *= ratio) {
        eng.sweep(1.0 / t, rng, params.swap_move_fraction, params.one_hot_k);
        if (eng.best_energy() < best_seen) {
            best_seen = eng.best_energy();
            res.energy_trace.push_back({s + 1, cq.sense_mult * best_seen});
        }
    }
    res.best_configuration = eng.best_config();
    res.best_energy = evaluate(q, res.best_configuration);
    res.params = {{"t_start", t_start},
                  {"t_end", t_end},
                  {"sweeps", static_cast<double>(req.sweeps)},
                  {"swap_move_fraction", params.swap_move_fraction}};
    return res;
}

struct PticmParams {
    int num_temperatures = 16;
    std::optional<double> beta_min;  // default 1 / (10 * coefficient scale)
    std::optional<double> beta_max;  // default 10 / coefficient scale
    int sweeps_per_exchange = 1;
    int cluster_move_period = 1;     // in exchange periods
    double swap_move_fraction = 0.0;
    int one_hot_k = 0;
    bool audit_cluster_moves = false;

    static constexpr int replicas_per_temperature = 2;
};

// Parallel tempering with two replica sets per temperature. Each period runs
// Metropolis sweeps at every rung, then attempts replica exchange between
// adjacent rungs (within each set), then exchanges one connected component of
// the disagreement set between the paired same-temperature replicas. The
// component swap conserves E1 + E2: every coupling that crosses the component
// boundary has equal endpoint bits in both replicas by construction.
inline SolverResult solve_pticm(const QuboProblem& q, const SolverRequest& req, const PticmParams& params = {}) {
    detail::check_request(q, req);
    detail::check_move_mix(q, params.swap_move_fraction, params.one_hot_k);
    if (params.num_temperatures < 2) throw std::invalid_argument("solve_pticm: need >= 2 temperatures");
    if (params.sweeps_per_exchange < 1 || params.cluster_move_period < 1)
        throw std::invalid_argument("solve_pticm: periods must be >= 1");

    detail::CompiledQubo cq(q);
    const double beta_min = params.beta_min.value_or(1.0 / (10.0 * cq.coeff_scale));
    const double beta_max = params.beta_max.value_or(10.0 / cq.coeff_scale);
    if (!(beta_min > 0.0) || !(beta_min < beta_max))
        throw std::invalid_argument("solve_pticm: ladder requires 0 < beta_min < beta_max");

    const int nt = params.num_temperatures;
    std::vector<double> beta(static_cast<std::size_t>(nt));
    for (int t = 0; t < nt; ++t)
        beta[static_cast<std::size_t>(t)] =
            beta_min * std::pow(beta_max / beta_min, static_cast<double>(t) / static_cast<double>(nt - 1));

    constexpr int kSets = PticmParams::replicas_per_temperature;
    std::vector<std::vector<detail::SweepEngine>> eng;
    std::vector<std::vector<std::mt19937_64>> rng(kSets);
    eng.reserve(kSets);
    for (int s = 0; s < kSets; ++s) {
        std::vector<detail::SweepEngine> row;
        row.reserve(static_cast<std::size_t>(nt));
        for (int t = 0; t < nt; ++t) {
            auto stream = static_cast<std::uint64_t>(s * nt + t + 1);
            rng[static_cast<std::size_t>(s)].emplace_back(detail::derive_seed(req.seed, stream));
            Configuration x0 = req.initial
                                   ? *req.initial
                                   : detail::random_configuration(q.num_vars, rng[static_cast<std::size_t>(s)].back());
            row.emplace_back(cq, std::move(x0));
        }
        eng.push_back(std::move(row));
    }
    std::vector<std::mt19937_64> exchange_rng;
    for (int s = 0; s < kSets; ++s) exchange_rng.emplace_back(detail::derive_seed(req.seed, 0x1000 + static_cast<std::uint64_t>(s)));
    std::vector<std::mt19937_64> cluster_rng;
    for (int t = 0; t < nt; ++t) cluster_rng.emplace_back(detail::derive_seed(req.seed, 0x2000 + static_cast<std::uint64_t>(t)));

    SolverResult res;
    res.solver = "pticm";
    res.seed = req.seed;

    double best = eng[0][0].best_energy();
    Configuration best_x = eng[0][0].best_config();
    auto poll_best = [&](std::uint64_t sweeps_done) {
        bool improved = false;
        for (auto& row : eng)
            for (auto& e : row)
                if (e.best_energy() < best) {
                    best = e.best_energy();
                    best_x = e.best_config();
                    improved = true;
                }
        if (improved || sweeps_done == 0) res.energy_trace.push_back({sweeps_done, cq.sense_mult * best});
    };
    poll_best(0);

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double max_drift = 0.0;
    std::uint64_t moves = 0;

    std::uint64_t sweeps_done = 0;
    for (std::uint64_t period = 0; sweeps_done < req.sweeps; ++period) {
        for (int s = 0; s < kSets; ++s)
            for (int t = 0; t < nt; ++t)
                for (int rep = 0; rep < params.sweeps_per_exchange; ++rep)
                    eng[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)].sweep(
                        beta[static_cast<std::size_t>(t)], rng[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)],
                        params.swap_move_fraction, params.one_hot_k);
        sweeps_done += static_cast<std::uint64_t>(params.sweeps_per_exchange);

        // replica exchange between adjacent rungs, detailed balance on
        // A = exp((beta_a - beta_b) (E_a - E_b)); dE = 0 or dbeta = 0 always accepts
        for (int s = 0; s < kSets; ++s) {
            for (int t = 0; t + 1 < nt; ++t) {
                auto& a = eng[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)];
                auto& b = eng[static_cast<std::size_t>(s)][static_cast<std::size_t>(t) + 1];
                double log_a = (beta[static_cast<std::size_t>(t)] - beta[static_cast<std::size_t>(t) + 1]) *
                               (a.energy() - b.energy());
                if (log_a >= 0.0 || unit(exchange_rng[static_cast<std::size_t>(s)]) < std::exp(log_a))
                    detail::SweepEngine::swap_state(a, b);
            }
        }

        if ((period + 1) % static_cast<std::uint64_t>(params.cluster_move_period) == 0) {
            for (int t = 0; t < nt; ++t) {
                auto& a = eng[0][static_cast<std::size_t>(t)];
                auto& b = eng[1][static_cast<std::size_t>(t)];
                std::vector<int> disagree;
                for (int v = 0; v < q.num_vars; ++v)
                    if (a.config()[static_cast<std::size_t>(v)] != b.config()[static_cast<std::size_t>(v)])
                        disagree.push_back(v);
                if (disagree.empty()) continue;

                std::uniform_int_distribution<std::size_t> pick(0, disagree.size() - 1);
                int start = disagree[pick(cluster_rng[static_cast<std::size_t>(t)])];
                std::vector<std::uint8_t> in_set(static_cast<std::size_t>(q.num_vars), 0);
                for (int v : disagree) in_set[static_cast<std::size_t>(v)] = 1;
                std::vector<int> component;
                std::queue<int> frontier;
                frontier.push(start);
                in_set[static_cast<std::size_t>(start)] = 2;
                while (!frontier.empty()) {
                    int v = frontier.front();
                    frontier.pop();
                    component.push_back(v);
                    for (int p = cq.row_start[static_cast<std::size_t>(v)]; p < cq.row_start[static_cast<std::size_t>(v) + 1]; ++p) {
                        int u = cq.col[static_cast<std::size_t>(p)];
                        if (in_set[static_cast<std::size_t>(u)] == 1 && cq.val[static_cast<std::size_t>(p)] != 0.0) {
                            in_set[static_cast<std::size_t>(u)] = 2;
                            frontier.push(u);
                        }
                    }
                }

                double sum_before = 0.0;
                if (params.audit_cluster_moves) sum_before = cq.energy(a.config()) + cq.energy(b.config());
                for (int v : component) {
                    a.flip(v);
                    b.flip(v);
                }
                a.note_best();
                b.note_best();
                ++moves;
                if (params.audit_cluster_moves) {
                    double sum_after = cq.energy(a.config()) + cq.energy(b.config());
                    max_drift = std::max(max_drift, std::abs(sum_after - sum_before));
                    double tracked = a.energy() + b.energy();
                    max_drift = std::max(max_drift, std::abs(tracked - sum_after));
                }
            }
        }
        poll_best(sweeps_done);
    }

    res.best_configuration = best_x;
    res.best_energy = evaluate(q, best_x);
    res.cluster_moves = moves;
    res.cluster_move_max_drift = max_drift;
    res.params = {{"num_temperatures", static_cast<double>(nt)},
                  {"beta_min", beta_min},
                  {"beta_max", beta_max},
                  {"replicas_per_temperature", static_cast<double>(kSets)},
                  {"sweeps_per_exchange", static_cast<double>(params.sweeps_per_exchange)},
                  {"cluster_move_period", static_cast<double>(params.cluster_move_period)},
                  {"sweeps", static_cast<double>(req.sweeps)},
                  {"swap_move_fraction", params.swap_move_fraction}};
    return res;
}

}  // namespace sgcd
