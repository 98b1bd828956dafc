#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gaussmink/body.hpp"
#include "gaussmink/measure.hpp"

namespace gaussmink {

struct HomotopyConfig {
    double p = 2.0;
    int steps_init = 1;       // initial number of homotopy steps (dt = 1/steps_init)
    double step_min = 1e-6;   // smallest allowed dt before giving up
    double newton_tol = 1e-10;
    int newton_max = 40;
    // Constant path start; unset means automatic (geometric mean of the
    // pointwise constant radii implied by the density, mean density fallback).
    std::optional<double> c0;
    // Skip the small-mass gate for 1 <= p <= 2. The gate is sufficient for
    // existence, not necessary, so probing beyond it is allowed explicitly.
    bool override_mass_bound = false;
};

struct SolveReport {
    Body body;
    double residual_linf = 0.0;
    double gamma = 0.0;
    int homotopy_steps_used = 0;
    int newton_iterations_total = 0;
    double mass = 0.0;  // integrate(f) of the target density
    std::vector<std::string> warnings;
};

struct UniquenessReport {
    double max_pairwise_distance = 0.0;
    int converged = 0;
    // One entry per starting body: "converged" or the failure reason.
    std::vector<std::string> start_outcomes;
    std::vector<Body> solutions;
};

// Pointwise defect of the support equation in the plane:
//   (h'' + h) - 2*pi * h^{p-1} * exp((h'^2 + h^2)/2) * f.
// Zero iff h solves the L_p Gaussian Minkowski equation on the grid.
ScalarField residual(const ScalarField& h, const MeasureDensity& f, double p);

// Directional derivative of the residual at h in the additive perturbation
// delta; matches central finite differences to O(eps^2).
ScalarField linearized_apply(const ScalarField& h, const ScalarField& delta,
                             const MeasureDensity& f, double p);

// Radius s with (1/2pi) s^{2-p} e^{-s^2/2} = c0. Unique for p > 2 (the left
// side is strictly decreasing); for p <= 2 the root on the decreasing branch
// is returned, which is the one selected by the small-mass regime (Gaussian
// volume above 1/2, no zero modes in the linearization). NoRoot when c0
// exceeds the attainable maximum.
double constant_solution(double c0, double p);

// Eigenvalue of the linearization at the constant solution s0 acting on the
// k-th Fourier mode (planar case): -k^2 + (2 - p) - s0^2.
double constant_spectrum(double s0, double p, int k);

// Newton path-following along f_t = (1-t) c0 + t f from the constant
// solution at t = 0, with adaptive step halving/doubling and a damped inner
// Newton iteration. Requires p >= 1; enforces the small-mass bound
// integrate(f) < (2*pi)^{-p/2} for 1 <= p <= 2 unless overridden.
SolveReport continuation_solve(const MeasureDensity& f, const HomotopyConfig& cfg);

// Damped Newton from each starting body (no homotopy), p > 2 only. Starts
// that diverge are excluded and recorded in the outcome list; the distance
// is the maximum pairwise Hausdorff distance among the converged solutions.
UniquenessReport uniqueness_probe(const MeasureDensity& f, double p,
                                  const std::vector<Body>& inits,
                                  double newton_tol = 1e-10, int newton_max = 60);

// A-priori support bounds [lo, hi] for solutions with density f at p > 2:
// the barrier roots at the extreme density values.
std::pair<double, double> a_priori_bounds(const MeasureDensity& f, double p);

}  // namespace gaussmink
