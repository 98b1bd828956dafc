#pragma once

#include <optional>
#include <vector>

#include "gaussmink/body.hpp"
#include "gaussmink/measure.hpp"

namespace gaussmink {

struct VariationalOptions {
    int max_iter = 5000;
    // step0 < 0 selects the default 0.1 * min h of the initial body.
    double step0 = -1.0;
    double tol_kkt = 1e-3;
    // Spread threshold for the second-moment check (mass-normalized).
    double eps_spread = 1e-6;
    // Optional starting body; defaults to the half-mass ball. It is
    // projected onto the constraint set (evened, convexified if necessary,
    // rescaled) before use.
    std::optional<Body> init;
    // When set, receives the objective value of every accepted iterate.
    std::vector<double>* trace_objective = nullptr;
};

struct VariationalReport {
    Body body;
    double lambda = 0.0;        // mass(mu) / S_p total of the solution
    double kkt_residual = 0.0;  // max relative deviation of the S_p density from its target
    double objective = 0.0;
    int iterations = 0;
};

// Objective for p < 0: -(1/p) * integral of h^p dmu. Positive and convex in h.
double functional_J(const Body& body, const MeasureDensity& mu, double p);

// Log objective for p = 0: -integral of log(h) dmu.
double functional_E(const Body& body, const MeasureDensity& mu);

// Dilate the body so its Gaussian volume is exactly 1/2 (to 1e-13 on smooth
// bodies). The scale factor is bracketed on the polar-form volume of the
// stored radial samples (strictly increasing in the scale, so the root is
// unique), then polished against gaussian_volume of the dilated body.
Body rescale_to_half(const Body& body);

// Constrained maximization of J (p < 0) or E (p = 0) over even convex bodies
// with Gaussian volume 1/2, by projected gradient ascent: step along the
// smoothed gradient component tangent to the volume constraint, rebuild the
// iterate from its support samples (re-convexifying through the Wulff shape
// only when the candidate leaves the convex cone), rescale onto the volume
// target, and backtrack whenever the objective would decrease. Each iterate
// is exactly even and carries Gaussian volume 1/2 to the quadrature floor.
// Terminates when the KKT residual drops below tol_kkt; the trace records
// the objective of every accepted iterate, and the report describes the
// final iterate itself (its objective equals the last trace entry).
VariationalReport variational_solve(const MeasureDensity& mu, double p,
                                    const VariationalOptions& opts = {});

}  // namespace gaussmink
