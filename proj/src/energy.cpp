#include "polyfract/energy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <thread>
#include <vector>

#include "polyfract/errors.hpp"
#include "polyfract/wordtree.hpp"

namespace polyfract {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Regularized edge potential (t^2 + eps^2)^(p/2); eps = 0 for p >= 2.
struct EdgePotential {
    double p;
    double eps2;

    double value(double t) const { return std::pow(t * t + eps2, p / 2.0); }
    double slope(double t) const { return p * t * std::pow(t * t + eps2, p / 2.0 - 1.0); }
    double curvature(double t) const {
        if (eps2 == 0.0) {
            // p >= 2 here; the p = 2 case is the constant 2.
            if (t == 0.0) return p == 2.0 ? p * (p - 1.0) : 0.0;
            return p * (p - 1.0) * std::pow(std::fabs(t), p - 2.0);
        }
        return p * std::pow(t * t + eps2, p / 2.0 - 2.0) * ((p - 1.0) * t * t + eps2);
    }
};

double phi_energy(const EdgePotential& phi, const std::vector<double>& f,
                  const std::vector<std::pair<int, int>>& edges) {
    double total = 0.0;
    for (const auto& [u, v] : edges) total += phi.value(f[static_cast<std::size_t>(u)] -
                                                        f[static_cast<std::size_t>(v)]);
    return total;
}

/// Shared state of one Dirichlet/hyperplane Newton solve.  The free nodes
/// carry the unknowns; `plane` (optional, a . d = 0) is enforced by
/// projection inside the inner conjugate-gradient iteration.
struct NewtonSolve {
    const std::vector<std::pair<int, int>>& edges;
    std::vector<double>& f;
    std::vector<int> free_index;  // node -> contiguous free slot, or -1
    std::vector<int> free_nodes;
    const std::vector<double>* plane = nullptr;  // full-length normal, or null
    int total_cg = 0;
    double residual = 0.0;

    NewtonSolve(const std::vector<std::pair<int, int>>& edges_in, std::vector<double>& f_in,
                const std::vector<bool>& pinned)
        : edges(edges_in), f(f_in), free_index(f_in.size(), -1) {
        for (std::size_t i = 0; i < f.size(); ++i)
            if (!pinned[i]) {
                free_index[i] = static_cast<int>(free_nodes.size());
                free_nodes.push_back(static_cast<int>(i));
            }
    }

    void project(std::vector<double>& d) const {
        if (!plane) return;
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < free_nodes.size(); ++k) {
            double a = (*plane)[static_cast<std::size_t>(free_nodes[k])];
            num += a * d[k];
            den += a * a;
        }
        if (den <= 0.0) return;
        double scale = num / den;
        for (std::size_t k = 0; k < free_nodes.size(); ++k)
            d[k] -= scale * (*plane)[static_cast<std::size_t>(free_nodes[k])];
    }

    std::vector<double> gradient(const EdgePotential& phi) const {
        std::vector<double> g(free_nodes.size(), 0.0);
        for (const auto& [u, v] : edges) {
            double s = phi.slope(f[static_cast<std::size_t>(u)] - f[static_cast<std::size_t>(v)]);
            if (free_index[static_cast<std::size_t>(u)] >= 0)
                g[static_cast<std::size_t>(free_index[static_cast<std::size_t>(u)])] += s;
            if (free_index[static_cast<std::size_t>(v)] >= 0)
                g[static_cast<std::size_t>(free_index[static_cast<std::size_t>(v)])] -= s;
        }
        project(g);
        return g;
    }

    /// One damped-Newton descent direction: (P H P + damp I) d = -g by
    /// Jacobi-preconditioned conjugate gradient.
    std::vector<double> direction(const EdgePotential& phi, const std::vector<double>& g) {
        const std::size_t nf = free_nodes.size();
        std::vector<double> w(edges.size());
        double wmax = 0.0;
        for (std::size_t e = 0; e < edges.size(); ++e) {
            w[e] = phi.curvature(f[static_cast<std::size_t>(edges[e].first)] -
                                 f[static_cast<std::size_t>(edges[e].second)]);
            wmax = std::max(wmax, w[e]);
        }
        const double damp = 1e-12 * (wmax + 1.0);
        std::vector<double> diag(nf, damp);
        for (std::size_t e = 0; e < edges.size(); ++e) {
            int iu = free_index[static_cast<std::size_t>(edges[e].first)];
            int iv = free_index[static_cast<std::size_t>(edges[e].second)];
            if (iu >= 0) diag[static_cast<std::size_t>(iu)] += w[e];
            if (iv >= 0) diag[static_cast<std::size_t>(iv)] += w[e];
        }
        auto apply = [&](const std::vector<double>& x, std::vector<double>& out) {
            std::vector<double> px = x;
            project(px);
            std::fill(out.begin(), out.end(), 0.0);
            for (std::size_t e = 0; e < edges.size(); ++e) {
                int iu = free_index[static_cast<std::size_t>(edges[e].first)];
                int iv = free_index[static_cast<std::size_t>(edges[e].second)];
                double du = iu >= 0 ? px[static_cast<std::size_t>(iu)] : 0.0;
                double dv = iv >= 0 ? px[static_cast<std::size_t>(iv)] : 0.0;
                double flow = w[e] * (du - dv);
                if (iu >= 0) out[static_cast<std::size_t>(iu)] += flow;
                if (iv >= 0) out[static_cast<std::size_t>(iv)] -= flow;
            }
            project(out);
            for (std::size_t k = 0; k < nf; ++k) out[k] += damp * x[k];
        };

        std::vector<double> b(nf);
        for (std::size_t k = 0; k < nf; ++k) b[k] = -g[k];
        project(b);
        double bnorm = 0.0;
        for (double x : b) bnorm += x * x;
        bnorm = std::sqrt(bnorm);
        std::vector<double> x(nf, 0.0), r = b, z(nf), q(nf), p(nf);
        if (bnorm == 0.0) return x;
        for (std::size_t k = 0; k < nf; ++k) z[k] = r[k] / diag[k];
        p = z;
        double rz = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
        const int cap = static_cast<int>(20 * nf + 200);
        for (int it = 0; it < cap; ++it) {
            apply(p, q);
            double pq = std::inner_product(p.begin(), p.end(), q.begin(), 0.0);
            if (pq <= 0.0) break;
            double alpha = rz / pq;
            double rnorm = 0.0;
            for (std::size_t k = 0; k < nf; ++k) {
                x[k] += alpha * p[k];
                r[k] -= alpha * q[k];
                rnorm += r[k] * r[k];
            }
            ++total_cg;
            if (std::sqrt(rnorm) <= 1e-10 * bnorm) break;
            for (std::size_t k = 0; k < nf; ++k) z[k] = r[k] / diag[k];
            double rz_next = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
            double beta = rz_next / rz;
            rz = rz_next;
            for (std::size_t k = 0; k < nf; ++k) p[k] = z[k] + beta * p[k];
        }
        project(x);
        return x;
    }

    /// Minimize the phi-energy from the current feasible f.  Returns the
    /// final objective value; throws NonConvergence past the outer cap.
    double minimize(const EdgePotential& phi) {
        if (free_nodes.empty()) {
            residual = 0.0;
            return phi_energy(phi, f, edges);
        }
        double current = phi_energy(phi, f, edges);
        const int outer_cap = 240;
        for (int outer = 0; outer < outer_cap; ++outer) {
            std::vector<double> g = gradient(phi);
            double gmax = 0.0;
            for (double x : g) gmax = std::max(gmax, std::fabs(x));
            residual = gmax;
            if (gmax <= 1e-13 * std::max(1.0, current)) return current;
            std::vector<double> d = direction(phi, g);
            double slope = 0.0;
            for (std::size_t k = 0; k < g.size(); ++k) slope += g[k] * d[k];
            if (slope >= 0.0) return current;  // numerically stationary
            double step = 1.0;
            double next = current;
            while (step >= 1e-14) {
                std::vector<double> trial = f;
                for (std::size_t k = 0; k < free_nodes.size(); ++k)
                    trial[static_cast<std::size_t>(free_nodes[k])] += step * d[k];
                next = phi_energy(phi, trial, edges);
                if (next <= current + 1e-4 * step * slope) {
                    f.swap(trial);
                    break;
                }
                step /= 2.0;
            }
            if (step < 1e-14) return current;  // line search exhausted
            double change = std::fabs(current - next);
            current = next;
            if (change <= 1e-9 * std::max(current, 1e-300)) {
                std::vector<double> gf = gradient(phi);
                double gm = 0.0;
                for (double x : gf) gm = std::max(gm, std::fabs(x));
                residual = gm;
                return current;
            }
        }
        throw NonConvergence("energy minimization exceeded the outer iteration cap");
    }
};

std::vector<double> epsilon_schedule(double p) {
    if (p >= 2.0) return {0.0};
    return {1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
}

void validate_problem(const EnergyProblem& prob) {
    if (prob.p <= 1.0) throw BadExponent("exponent must exceed 1 for a unique minimizer");
    if (prob.node_count <= 0) throw BadIndices("empty active node set");
    auto check_node = [&](int v) {
        if (v < 0 || v >= prob.node_count) throw BadIndices("node index out of range");
    };
    for (const auto& [u, v] : prob.edges) {
        check_node(u);
        check_node(v);
    }
    std::vector<char> role(static_cast<std::size_t>(prob.node_count), 0);
    for (int v : prob.boundary_one) {
        check_node(v);
        role[static_cast<std::size_t>(v)] |= 1;
    }
    for (int v : prob.boundary_zero) {
        check_node(v);
        if (role[static_cast<std::size_t>(v)] & 1)
            throw BadIndices("boundary sets must be disjoint");
    }
}

std::vector<int> component_labels(int node_count, const std::vector<std::pair<int, int>>& edges) {
    std::vector<int> parent(static_cast<std::size_t>(node_count));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int v) {
        while (parent[static_cast<std::size_t>(v)] != v) {
            parent[static_cast<std::size_t>(v)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
            v = parent[static_cast<std::size_t>(v)];
        }
        return v;
    };
    for (const auto& [u, v] : edges) parent[static_cast<std::size_t>(find(u))] = find(v);
    std::vector<int> label(static_cast<std::size_t>(node_count));
    for (int v = 0; v < node_count; ++v) label[static_cast<std::size_t>(v)] = find(v);
    return label;
}

/// Star edge list of a level graph (full-edge contacts plus the point
/// contacts that belong to the fractal), each unordered pair once.
std::vector<std::pair<NodeId, NodeId>> star_edge_list(const LevelGraph& graph) {
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(graph.ell_edges.size() + graph.point_edges.size());
    for (const auto& e : graph.ell_edges) out.emplace_back(e.w, e.v);
    for (const auto& e : graph.point_edges)
        if (e.in_k) out.emplace_back(e.w, e.v);
    return out;
}

NodeId pow_ll(NodeId base, int exp) {
    NodeId r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

/// Minimal energy subject to the linear constraint a . f = 1 on the induced
/// graph (no pinned values beyond a gauge node); 0 signals a degenerate
/// instance where the constraint is reachable at zero energy.
double constrained_min_energy(int node_count, const std::vector<std::pair<int, int>>& edges,
                              const std::vector<double>& a, double p) {
    std::vector<int> label = component_labels(node_count, edges);
    std::map<int, double> mass;
    for (int v = 0; v < node_count; ++v) mass[label[static_cast<std::size_t>(v)]] +=
        a[static_cast<std::size_t>(v)];
    for (const auto& [comp, total] : mass) {
        (void)comp;
        if (std::fabs(total) > 1e-12) return 0.0;
    }

    // Feasible start: scale a itself onto the constraint plane.
    double a2 = std::inner_product(a.begin(), a.end(), a.begin(), 0.0);
    std::vector<double> f(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) f[i] = a[i] / a2;
    std::vector<bool> pinned(a.size(), false);

    double value = 0.0;
    for (double eps : epsilon_schedule(p)) {
        EdgePotential phi{p, eps * eps};
        NewtonSolve solve(edges, f, pinned);
        solve.plane = &a;
        solve.minimize(phi);
    }
    EdgePotential exact{p, 0.0};
    value = phi_energy(exact, f, edges);
    return value;
}

int system_alphabet(const ValidatedSystem& sys) { return sys.cell_count(); }

/// Contiguous descendant block of a word in the level n + m numbering.
std::pair<NodeId, NodeId> descendant_range(const Word& w, int alphabet, int m) {
    NodeId lo = encode_word(w, alphabet) * pow_ll(alphabet, m);
    return {lo, lo + pow_ll(alphabet, m)};
}

}  // namespace

double p_energy(const std::vector<double>& f, const std::vector<std::pair<int, int>>& edges,
                double p) {
    if (p <= 1.0) throw BadExponent("exponent must exceed 1");
    double total = 0.0;
    for (const auto& [u, v] : edges)
        total += std::pow(std::fabs(f[static_cast<std::size_t>(u)] -
                                    f[static_cast<std::size_t>(v)]),
                          p);
    return total;
}

EnergySolution min_energy(const EnergyProblem& prob) {
    validate_problem(prob);
    EnergySolution sol;
    std::vector<double> f(static_cast<std::size_t>(prob.node_count), 0.5);
    std::vector<bool> pinned(static_cast<std::size_t>(prob.node_count), false);
    for (int v : prob.boundary_one) {
        f[static_cast<std::size_t>(v)] = 1.0;
        pinned[static_cast<std::size_t>(v)] = true;
    }
    for (int v : prob.boundary_zero) {
        f[static_cast<std::size_t>(v)] = 0.0;
        pinned[static_cast<std::size_t>(v)] = true;
    }

    // Zero-energy shortcut: when no component joins the two boundary sets,
    // the locally constant indicator of the one-side components is optimal.
    std::vector<int> label = component_labels(prob.node_count, prob.edges);
    std::set<int> one_comp, zero_comp;
    for (int v : prob.boundary_one) one_comp.insert(label[static_cast<std::size_t>(v)]);
    for (int v : prob.boundary_zero) zero_comp.insert(label[static_cast<std::size_t>(v)]);
    bool joined = false;
    for (int c : one_comp) joined = joined || zero_comp.count(c) > 0;
    if (!joined) {
        for (int v = 0; v < prob.node_count; ++v)
            if (!pinned[static_cast<std::size_t>(v)])
                f[static_cast<std::size_t>(v)] =
                    one_comp.count(label[static_cast<std::size_t>(v)]) ? 1.0 : 0.0;
        sol.value = 0.0;
        sol.minimizer = std::move(f);
        return sol;
    }

    // Warm start every exponent from the quadratic solve.
    {
        EdgePotential quad{2.0, 0.0};
        NewtonSolve solve(prob.edges, f, pinned);
        solve.minimize(quad);
        sol.iterations += solve.total_cg;
        sol.residual = solve.residual;
    }
    if (prob.p != 2.0) {
        for (double eps : epsilon_schedule(prob.p)) {
            EdgePotential phi{prob.p, eps * eps};
            NewtonSolve solve(prob.edges, f, pinned);
            solve.minimize(phi);
            sol.iterations += solve.total_cg;
            sol.residual = solve.residual;
            if (eps > 0.0) sol.regularization.push_back(eps);
        }
    }
    for (double& x : f) x = std::min(1.0, std::max(0.0, x));
    sol.value = p_energy(f, prob.edges, prob.p);
    sol.minimizer = std::move(f);
    return sol;
}

double conductance_constant(GraphCache& cache, const Word& w, int M, double p, int m) {
    const ValidatedSystem& sys = cache.system();
    const int N = system_alphabet(sys);
    const int n = static_cast<int>(w.size());
    const LevelGraph& coarse = cache.at(n);
    std::vector<Word> ball = gamma_ball(coarse, w, M, EdgeKind::Star);
    std::set<NodeId> ball_ids;
    for (const Word& b : ball) ball_ids.insert(encode_word(b, N));
    if (ball_ids.size() == static_cast<std::size_t>(coarse.node_count)) return 0.0;

    const LevelGraph& fine = cache.at(n + m);
    EnergyProblem prob;
    prob.node_count = static_cast<int>(fine.node_count);
    prob.p = p;
    for (const auto& [u, v] : star_edge_list(fine))
        prob.edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    auto [wlo, whi] = descendant_range(w, N, m);
    for (NodeId v = wlo; v < whi; ++v) prob.boundary_one.push_back(static_cast<int>(v));
    const NodeId block = pow_ll(N, m);
    for (NodeId parent = 0; parent < coarse.node_count; ++parent) {
        if (ball_ids.count(parent)) continue;
        for (NodeId v = parent * block; v < (parent + 1) * block; ++v)
            prob.boundary_zero.push_back(static_cast<int>(v));
    }
    return min_energy(prob).value;
}

double neighbor_disparity(GraphCache& cache, int n, int m, double p) {
    const ValidatedSystem& sys = cache.system();
    const int N = system_alphabet(sys);
    const LevelGraph& coarse = cache.at(n);
    const LevelGraph& fine = cache.at(n + m);

    // Orbit-deduplicated adjacent pairs.
    std::set<std::pair<NodeId, NodeId>> reps;
    for (const auto& [wid, vid] : star_edge_list(coarse)) {
        Word w = decode_word(wid, N, n), v = decode_word(vid, N, n);
        std::pair<NodeId, NodeId> best{-1, -1};
        for (const DihedralElement& g : sys.group.elements) {
            NodeId gw = encode_word(group_action_on_words(sys, g, w), N);
            NodeId gv = encode_word(group_action_on_words(sys, g, v), N);
            std::pair<NodeId, NodeId> cand{std::min(gw, gv), std::max(gw, gv)};
            if (best.first < 0 || cand < best) best = cand;
        }
        reps.insert(best);
    }

    const NodeId block = pow_ll(N, m);
    double worst = 0.0;
    for (const auto& [wid, vid] : reps) {
        // Induced refinement graph on the two descendant blocks.
        std::vector<NodeId> active;
        for (NodeId x = wid * block; x < (wid + 1) * block; ++x) active.push_back(x);
        for (NodeId x = vid * block; x < (vid + 1) * block; ++x) active.push_back(x);
        std::map<NodeId, int> local;
        for (std::size_t i = 0; i < active.size(); ++i) local[active[i]] = static_cast<int>(i);
        std::vector<std::pair<int, int>> edges;
        for (std::size_t i = 0; i < active.size(); ++i)
            for (NodeId u : fine.star_adj[static_cast<std::size_t>(active[i])]) {
                auto it = local.find(u);
                if (it != local.end() && active[i] < u)
                    edges.emplace_back(static_cast<int>(i), it->second);
            }
        std::vector<double> a(active.size(), 0.0);
        const double inv = 1.0 / static_cast<double>(block);
        for (NodeId x = 0; x < block; ++x) {
            a[static_cast<std::size_t>(x)] = inv;                      // w part
            a[static_cast<std::size_t>(block + x)] = -inv;             // v part
        }
        double denom = constrained_min_energy(static_cast<int>(active.size()), edges, a, p);
        if (denom <= 0.0) return kInf;
        worst = std::max(worst, 1.0 / denom);
    }
    return worst;
}

std::vector<int> level1_symmetry_representatives(const ValidatedSystem& sys) {
    std::vector<int> reps;
    std::vector<bool> seen(static_cast<std::size_t>(sys.cell_count()), false);
    for (int s = 0; s < sys.cell_count(); ++s) {
        if (seen[static_cast<std::size_t>(s)]) continue;
        reps.push_back(s);
        for (const auto& [g, perm] : sys.cell_action)
            seen[static_cast<std::size_t>(perm[static_cast<std::size_t>(s)])] = true;
    }
    return reps;
}

namespace {

/// Orbit representatives (lexicographically smallest word per orbit) of the
/// level-n cells under the symmetry group.
std::vector<Word> symmetry_representatives(const ValidatedSystem& sys, int n) {
    const int N = sys.cell_count();
    const NodeId total = pow_ll(N, n);
    std::vector<Word> reps;
    for (NodeId id = 0; id < total; ++id) {
        Word w = decode_word(id, N, n);
        NodeId canonical = id;
        for (const DihedralElement& g : sys.group.elements)
            canonical = std::min(canonical, encode_word(group_action_on_words(sys, g, w), N));
        if (canonical == id) reps.push_back(std::move(w));
    }
    return reps;
}

}  // namespace

ScalingEstimate scaling_estimate(GraphCache& cache, double p, int M, int m_max, int workers) {
    if (m_max < 2) throw BadIndices("scaling estimates need at least two levels");
    const ValidatedSystem& sys = cache.system();
    ScalingEstimate est;
    est.p = p;
    est.M = M;
    est.values.assign(static_cast<std::size_t>(m_max), 0.0);

    // The shallowest base level whose balls leave something to separate.
    std::vector<Word> reps;
    for (int n = 1; n <= 4; ++n) {
        const LevelGraph& coarse = cache.at(n);
        std::vector<Word> candidates = symmetry_representatives(sys, n);
        for (const Word& w : candidates)
            if (gamma_ball(coarse, w, M, EdgeKind::Star).size() <
                static_cast<std::size_t>(coarse.node_count)) {
                est.base_level = n;
                reps = std::move(candidates);
                break;
            }
        if (!reps.empty()) break;
    }
    if (reps.empty()) throw NoneFound("every ball swallows its level; nothing to separate");

    // Pre-build every level so the worker threads only read the cache.
    for (int m = 1; m <= m_max; ++m) cache.at(est.base_level + m);

    struct Job {
        int m;
        Word rep;
        double value = 0.0;
    };
    std::vector<Job> jobs;
    for (int m = 1; m <= m_max; ++m)
        for (const Word& rep : reps) jobs.push_back({m, rep});
    workers = std::max(1, workers);
    auto run_range = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            jobs[i].value = conductance_constant(cache, jobs[i].rep, M, p, jobs[i].m);
    };
    if (workers == 1) {
        run_range(0, jobs.size());
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (jobs.size() + static_cast<std::size_t>(workers) - 1) /
                            static_cast<std::size_t>(workers);
        for (int t = 0; t < workers; ++t) {
            std::size_t lo = static_cast<std::size_t>(t) * chunk;
            std::size_t hi = std::min(jobs.size(), lo + chunk);
            if (lo < hi) pool.emplace_back(run_range, lo, hi);
        }
        for (std::thread& th : pool) th.join();
    }
    for (const Job& job : jobs)
        est.values[static_cast<std::size_t>(job.m - 1)] =
            std::max(est.values[static_cast<std::size_t>(job.m - 1)], job.value);
    for (int m = 2; m <= m_max; ++m)
        est.ratios.push_back(est.values[static_cast<std::size_t>(m - 1)] /
                             est.values[static_cast<std::size_t>(m - 2)]);
    for (int m = 1; m <= m_max; ++m)
        est.roots.push_back(std::pow(est.values[static_cast<std::size_t>(m - 1)],
                                     1.0 / static_cast<double>(m)));
    return est;
}

std::pair<double, double> dimar_bracket(GraphCache& cache, double p_lo, double p_hi, double tol,
                                        int M, int m_max) {
    if (!(p_lo < p_hi) || tol <= 0.0) throw BadBracket("empty or inverted bracket");
    auto ratio_at = [&](double p) { return scaling_estimate(cache, p, M, m_max).ratios.back(); };
    if (p_hi - p_lo <= tol) return {p_lo, p_hi};
    if (!(ratio_at(p_lo) > 1.0) || !(ratio_at(p_hi) < 1.0))
        throw BadBracket("finite-level ratio does not cross 1 inside the bracket");
    while (p_hi - p_lo > tol) {
        double mid = 0.5 * (p_lo + p_hi);
        if (ratio_at(mid) > 1.0)
            p_lo = mid;
        else
            p_hi = mid;
    }
    return {p_lo, p_hi};
}

double knight_ratio(GraphCache& cache, double p, int M, int m, int k) {
    const ValidatedSystem& sys = cache.system();
    const int N = system_alphabet(sys);
    double numerator = 0.0;
    for (int rep : level1_symmetry_representatives(sys))
        numerator = std::max(numerator, conductance_constant(cache, Word{rep}, M, p, m));

    const LevelGraph& coarse = cache.at(k);
    const LevelGraph& fine = cache.at(k + m);
    std::set<std::pair<NodeId, NodeId>> pair_reps;
    for (NodeId u = 0; u < coarse.node_count; ++u)
        for (NodeId v = u + 1; v < coarse.node_count; ++v) {
            Word wu = decode_word(u, N, k), wv = decode_word(v, N, k);
            std::pair<NodeId, NodeId> best{-1, -1};
            for (const DihedralElement& g : sys.group.elements) {
                NodeId gu = encode_word(group_action_on_words(sys, g, wu), N);
                NodeId gv = encode_word(group_action_on_words(sys, g, wv), N);
                std::pair<NodeId, NodeId> cand{std::min(gu, gv), std::max(gu, gv)};
                if (best.first < 0 || cand < best) best = cand;
            }
            pair_reps.insert(best);
        }

    double denominator = kInf;
    EnergyProblem base;
    base.node_count = static_cast<int>(fine.node_count);
    base.p = p;
    for (const auto& [a, b] : star_edge_list(fine))
        base.edges.emplace_back(static_cast<int>(a), static_cast<int>(b));
    const NodeId block = pow_ll(N, m);
    for (const auto& [u, v] : pair_reps) {
        EnergyProblem prob = base;
        for (NodeId x = u * block; x < (u + 1) * block; ++x)
            prob.boundary_one.push_back(static_cast<int>(x));
        for (NodeId x = v * block; x < (v + 1) * block; ++x)
            prob.boundary_zero.push_back(static_cast<int>(x));
        double value = min_energy(prob).value;
        if (value > 0.0) denominator = std::min(denominator, value);
    }
    if (!std::isfinite(denominator))
        throw DegenerateEdge("no connected cell pair at the requested level");
    return numerator / denominator;
}

std::string energy_csv(const std::vector<EnergyCsvRow>& rows) {
    std::string out = "system,p,M,m,quantity,value,iterations,residual\n";
    char buf[256];
    for (const EnergyCsvRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%.12g,%d,%d,%s,%.12g,%d,%.12g\n", r.system.c_str(),
                      r.p, r.M, r.m, r.quantity.c_str(), r.value, r.iterations, r.residual);
        out += buf;
    }
    return out;
}

}  // namespace polyfract
