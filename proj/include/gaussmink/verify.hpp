#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gaussmink/body.hpp"
#include "gaussmink/grid.hpp"

namespace gaussmink {

struct SuiteCase {
    std::string id;        // input the row belongs to (body label, solver run)
    std::string quantity;  // identity or inequality being measured
    double value = 0.0;    // measured magnitude
    double bound = 0.0;    // allowed bound
    double violation = 0.0;  // value - bound; positive means failed
};

struct SuiteResult {
    std::string suite;
    int cases = 0;  // distinct inputs exercised
    double worst_violation = 0.0;
    bool pass = false;
    std::vector<SuiteCase> rows;
};

struct BodyGenOptions {
    double amp = 0.08;  // coefficient range of the trigonometric perturbation
    int k_min = 2;
    int k_max = 6;
    bool even = false;     // even modes only, node values mirrored exactly
    double margin = 0.05;  // curvature floor relative to the body scale
    double scale_min = 0.7;
    double scale_max = 1.4;
};

// Smooth random convex body: h = c (1 + s * (sum_k a_k cos k t +
// b_k sin k t)), where the damping s <= 1 is chosen so h'' + h stays at or
// above margin * c everywhere. One draw per call, deterministic in the rng
// state.
Body random_convex_body(const Grid& grid, std::mt19937_64& rng,
                        const BodyGenOptions& opts = {});

// Support/radial/polar/Wulff identity checks on random bodies at N = 1024,
// with exact-ball sanity rows.
SuiteResult run_duality_suite(std::uint64_t seed, int count);

// Central finite differences of the Gaussian volume along the L_p support
// families against the measure integrals, including the second-order
// convergence ratio between consecutive step sizes. t_list must be positive
// and decreasing.
SuiteResult run_variation_suite(std::uint64_t seed, int count,
                                const std::vector<double>& t_list);

// Isoperimetric deficits (p >= 1), the boundary-integral volume lower bound,
// and the half-volume corollary constant on rescaled bodies.
SuiteResult run_isoperimetric_suite(std::uint64_t seed, int count,
                                    const std::vector<double>& p_list);

// End-to-end solver checks: variational solves on uniform and two-bump even
// measures, continuation at p = 3, the uniqueness probe, and the a priori
// support bounds.
SuiteResult run_solver_cross_suite(std::uint64_t seed);

}  // namespace gaussmink
