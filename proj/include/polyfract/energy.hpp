#pragma once

#include <string>
#include <utility>
#include <vector>

#include "polyfract/paths.hpp"
#include "polyfract/system.hpp"

namespace polyfract {

/// Dirichlet-constrained discrete energy minimization data: an undirected
/// graph over the active nodes together with the two pinned boundary sets
/// (value 1 and value 0) and the exponent p > 1.
struct EnergyProblem {
    int node_count = 0;
    std::vector<std::pair<int, int>> edges;  // each unordered pair once
    std::vector<int> boundary_one;
    std::vector<int> boundary_zero;
    double p = 2.0;
};

/// Minimizer and value, with solver diagnostics: total inner iterations, the
/// final interior gradient residual, and the regularization stages used for
/// p < 2 continuation.
struct EnergySolution {
    double value = 0.0;
    std::vector<double> minimizer;
    int iterations = 0;
    double residual = 0.0;
    std::vector<double> regularization;
};

/// Sum over undirected edges of |f(u) - f(v)|^p.  BadExponent for p <= 1.
double p_energy(const std::vector<double>& f, const std::vector<std::pair<int, int>>& edges,
                double p);

/// Minimize the p-energy over functions pinned to 1 on boundary_one and 0 on
/// boundary_zero.  p = 2 solves the graph Laplacian Dirichlet problem by
/// preconditioned conjugate gradient (relative residual <= 1e-10); other
/// exponents run damped Newton with backtracking, stopping at relative energy
/// change <= 1e-9, with a 6-stage epsilon continuation down to 1e-8 for
/// p < 2.  Value 0 with a locally constant feasible minimizer when no path
/// joins the boundary sets.
EnergySolution min_energy(const EnergyProblem& prob);

/// Minimal p-energy at refinement depth m separating the descendants of w
/// from the descendants of the complement of its M-ball (star edges); 0 by
/// convention when the complement is empty.
double conductance_constant(GraphCache& cache, const Word& w, int M, double p, int m);

/// Worst-case ratio, over level-n adjacent cell pairs, of the p-th power of
/// the mean difference across the pair's depth-m refinements to the energy,
/// computed per edge as 1 / min{ E(f) : mean difference = 1 } and maximized
/// over symmetry-class representatives.  +infinity when some pair's
/// refinement graph lets the means differ at zero energy.
double neighbor_disparity(GraphCache& cache, int n, int m, double p);

/// Per-level sequence E(m) = max over symmetry representatives of the
/// conductance constant, with consecutive ratios and m-th roots.  The base
/// level is the smallest one at which some representative's ball leaves a
/// nonempty complement (1 on most systems; deeper when small levels are
/// swallowed whole by the ball).
struct ScalingEstimate {
    double p = 2.0;
    int M = 1;
    int base_level = 1;
    std::vector<double> values;  // E(1) .. E(m_max)
    std::vector<double> ratios;  // E(m)/E(m-1) for m = 2 .. m_max
    std::vector<double> roots;   // E(m)^(1/m)
};

ScalingEstimate scaling_estimate(GraphCache& cache, double p, int M, int m_max,
                                 int workers = 1);

/// Bisection of the exponent at which the finite-level ratio estimate
/// crosses 1, to width <= tol.  Requires ratio(p_lo) > 1 > ratio(p_hi)
/// (BadBracket otherwise); returns the input bracket when already narrow
/// enough.  A finite-level estimate, not a proof.
std::pair<double, double> dimar_bracket(GraphCache& cache, double p_lo, double p_hi, double tol,
                                        int M, int m_max);

/// Finite-level knight-move ratio: the worst level-1 conductance constant at
/// depth m divided by the smallest two-cell joining energy over distinct
/// level-k pairs (disconnected pairs excluded).
double knight_ratio(GraphCache& cache, double p, int M, int m, int k);

/// One emitted measurement row.
struct EnergyCsvRow {
    std::string system;
    double p = 0.0;
    int M = 0;
    int m = 0;
    std::string quantity;
    double value = 0.0;
    int iterations = 0;
    double residual = 0.0;
};

/// CSV with the fixed header system,p,M,m,quantity,value,iterations,residual.
std::string energy_csv(const std::vector<EnergyCsvRow>& rows);

/// Lexicographically smallest representative per orbit of the level-1 cells
/// under the symmetry group; shared by the scaling and ratio reductions.
std::vector<int> level1_symmetry_representatives(const ValidatedSystem& sys);

}  // namespace polyfract
