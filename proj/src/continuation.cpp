#include "gaussmink/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "gaussmink/errors.hpp"
#include "gaussmink/gauss.hpp"

namespace gaussmink {

namespace {

// Scalar barrier g(s) = (1/2pi) s^{2-p} e^{-s^2/2}; constant densities c0
// correspond to constant solutions through g(s) = c0.
double barrier(double s, double p) {
    return std::pow(s, 2.0 - p) * std::exp(-0.5 * s * s) / (2.0 * M_PI);
}

Eigen::VectorXd residual_on_values(const Grid& g, const Eigen::VectorXd& h,
                                   const Eigen::VectorXd& fvals, double p) {
    Eigen::VectorXd dh = g.deriv1(h);
    Eigen::VectorXd curv = g.deriv2(h) + h;
    Eigen::ArrayXd expo = (0.5 * (dh.array().square() + h.array().square())).exp();
    return curv.array() - 2.0 * M_PI * fvals.array() * h.array().pow(p - 1.0) * expo;
}

Eigen::MatrixXd jacobian(const Grid& g, const Eigen::VectorXd& h,
                         const Eigen::VectorXd& fvals, double p) {
    Eigen::VectorXd dh = g.deriv1(h);
    Eigen::ArrayXd weight =
        2.0 * M_PI * fvals.array() * (0.5 * (dh.array().square() + h.array().square())).exp();
    Eigen::VectorXd diag_part =
        (weight * ((p - 1.0) * h.array().pow(p - 2.0) + h.array().pow(p))).matrix();
    Eigen::VectorXd d1_scale = (weight * h.array().pow(p - 1.0) * dh.array()).matrix();
    Eigen::MatrixXd jac = g.d2() - d1_scale.asDiagonal() * g.d1();
    jac.diagonal() += (1.0 - diag_part.array()).matrix();
    return jac;
}

struct NewtonResult {
    bool ok = false;
    int iters = 0;
    bool nonconvex_seen = false;
    std::string reason;
};

// Damped Newton on the fixed density fvals. Candidates must stay above the
// support floor and keep h'' + h > 0; violating steps are halved away.
// Mutates h only along accepted steps. The floor defaults to bare positivity;
// the uniqueness probe raises it because for p > 2 the discrete equation has
// a spurious root at h -> 0 (both curvature and density terms vanish) that
// plain positivity lets Newton slide into.
NewtonResult damped_newton(const Grid& g, Eigen::VectorXd& h, const Eigen::VectorXd& fvals,
                           double p, double tol, int max_iter, double floor = 0.0) {
    NewtonResult out;
    Eigen::VectorXd defect = residual_on_values(g, h, fvals, p);
    double rnorm = defect.lpNorm<Eigen::Infinity>();
    for (int it = 0; it < max_iter; ++it) {
        if (rnorm <= tol) {
            out.ok = true;
            out.iters = it;
            return out;
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(jacobian(g, h, fvals, p));
        if (!(lu.rcond() > 1e-14)) {
            fail("NewtonSingular",
                 "linearized system is numerically singular (rcond <= 1e-14)");
        }
        Eigen::VectorXd delta = lu.solve(-defect);
        bool stepped = false;
        for (double alpha = 1.0; alpha >= 1e-6; alpha *= 0.5) {
            Eigen::VectorXd cand = h + alpha * delta;
            if (!(cand.minCoeff() > floor)) continue;
            Eigen::VectorXd curv = g.deriv2(cand) + cand;
            if (!(curv.minCoeff() > 0.0)) {
                out.nonconvex_seen = true;
                continue;
            }
            Eigen::VectorXd cand_defect = residual_on_values(g, cand, fvals, p);
            const double cand_norm = cand_defect.lpNorm<Eigen::Infinity>();
            if (cand_norm < rnorm) {
                h = cand;
                defect = cand_defect;
                rnorm = cand_norm;
                stepped = true;
                break;
            }
        }
        if (!stepped) {
            out.iters = it;
            out.reason = "line search could not reduce the residual";
            return out;
        }
    }
    out.iters = max_iter;
    if (rnorm <= tol) {
        out.ok = true;
    } else {
        out.reason = "iteration budget exhausted";
    }
    return out;
}

double auto_c0(const MeasureDensity& f, double p) {
    // Geometric mean of the pointwise constant radii when every density value
    // admits one; otherwise fall back to the mean density.
    bool pointwise_ok = true;
    if (p < 2.0) {
        pointwise_ok = f.values().maxCoeff() <= barrier(std::sqrt(2.0 - p), p);
    } else if (p == 2.0) {
        pointwise_ok = f.values().maxCoeff() < 1.0 / (2.0 * M_PI);
    }
    if (pointwise_ok) {
        double log_sum = 0.0;
        for (Eigen::Index i = 0; i < f.values().size(); ++i) {
            log_sum += std::log(constant_solution(f.values()[i], p));
        }
        return barrier(std::exp(log_sum / static_cast<double>(f.values().size())), p);
    }
    return f.mass() / (2.0 * M_PI);
}

void require_positive_density(const MeasureDensity& f) {
    if (!(f.values().minCoeff() > 0.0)) {
        fail("InvalidField", "solver requires a strictly positive density");
    }
}

}  // namespace

ScalarField residual(const ScalarField& h, const MeasureDensity& f, double p) {
    if (!(h.grid == f.grid())) {
        fail("GridMismatch", "support field and density live on different grids");
    }
    if (!(h.values.minCoeff() > 0.0)) {
        fail("NonPositiveIterate", "support iterate must be strictly positive");
    }
    return make_field(h.grid, residual_on_values(h.grid, h.values, f.values(), p));
}

ScalarField linearized_apply(const ScalarField& h, const ScalarField& delta,
                             const MeasureDensity& f, double p) {
    if (!(h.grid == delta.grid) || !(h.grid == f.grid())) {
        fail("GridMismatch", "linearization inputs live on different grids");
    }
    if (!(h.values.minCoeff() > 0.0)) {
        fail("NonPositiveIterate", "support iterate must be strictly positive");
    }
    const Grid& g = h.grid;
    Eigen::VectorXd dh = g.deriv1(h.values);
    Eigen::VectorXd dd = g.deriv1(delta.values);
    Eigen::VectorXd curv_delta = g.deriv2(delta.values) + delta.values;
    Eigen::ArrayXd weight = 2.0 * M_PI * f.values().array() *
                            (0.5 * (dh.array().square() + h.values.array().square())).exp();
    Eigen::ArrayXd inner =
        (p - 1.0) * h.values.array().pow(p - 2.0) * delta.values.array() +
        h.values.array().pow(p - 1.0) *
            (dh.array() * dd.array() + h.values.array() * delta.values.array());
    return make_field(g, (curv_delta.array() - weight * inner).matrix());
}

double constant_solution(double c0, double p) {
    if (!(c0 > 0.0) || !std::isfinite(c0)) {
        fail("DomainError", "constant density must be positive and finite");
    }
    if (p == 2.0) {
        // Closed form: (1/2pi) e^{-s^2/2} = c0.
        if (!(c0 < 1.0 / (2.0 * M_PI))) {
            fail("NoRoot", "constant density exceeds the p = 2 barrier maximum 1/(2 pi)");
        }
        return std::sqrt(-2.0 * std::log(2.0 * M_PI * c0));
    }

    double lo, hi;
    if (p < 2.0) {
        const double s_peak = std::sqrt(2.0 - p);
        const double g_peak = barrier(s_peak, p);
        if (c0 > g_peak) {
            fail("NoRoot", "constant density " + std::to_string(c0) +
                               " exceeds the barrier maximum " + std::to_string(g_peak));
        }
        lo = s_peak;
        hi = s_peak;
        while (barrier(hi, p) >= c0 && hi < 1e8) hi *= 2.0;
    } else {
        // Strictly decreasing from +inf to 0: bracket the unique root.
        lo = 1.0;
        while (barrier(lo, p) <= c0 && lo > 1e-300) lo *= 0.5;
        hi = std::max(1.0, 2.0 * lo);
        while (barrier(hi, p) >= c0 && hi < 1e8) hi *= 2.0;
    }

    // Safeguarded Newton on the decreasing branch: g(lo) >= c0 >= g(hi).
    double s = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        const double val = barrier(s, p) - c0;
        if (std::abs(val) <= 1e-16 * c0 || hi - lo <= 1e-16 * hi) break;
        (val > 0.0 ? lo : hi) = s;
        const double slope = barrier(s, p) * ((2.0 - p) / s - s);
        double next = slope != 0.0 ? s - val / slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        s = next;
    }
    return s;
}

double constant_spectrum(double s0, double p, int k) {
    // Planar case: the s0^{n-2} prefactor is 1.
    return -static_cast<double>(k) * static_cast<double>(k) + (2.0 - p) - s0 * s0;
}

SolveReport continuation_solve(const MeasureDensity& f, const HomotopyConfig& cfg) {
    if (!(cfg.p >= 1.0)) {
        fail("UnsupportedExponent", "continuation covers p >= 1");
    }
    if (!(cfg.step_min > 0.0) || !(cfg.newton_tol > 0.0) || cfg.steps_init < 1 ||
        cfg.newton_max < 1) {
        fail("DomainError", "invalid homotopy configuration");
    }
    require_positive_density(f);
    const Grid& g = f.grid();
    const double mass = f.mass();

    if (cfg.p <= 2.0 && !cfg.override_mass_bound) {
        const double bound = std::pow(2.0 * M_PI, -0.5 * cfg.p);
        if (mass >= bound) {
            fail("MassBoundViolated", "integrate(f) = " + std::to_string(mass) +
                                          " >= (2 pi)^(-p/2) = " + std::to_string(bound) +
                                          "; pass the override to continue anyway");
        }
    }

    SolveReport rep;
    double c0 = cfg.c0 ? *cfg.c0 : auto_c0(f, cfg.p);
    if (!(c0 > 0.0) || !std::isfinite(c0)) {
        fail("DomainError", "homotopy start density c0 must be positive");
    }
    double s0 = constant_solution(c0, cfg.p);

    // Kernel modes of the linearization at the start would make the first
    // Newton system singular; nudge c0 away from them. With the decreasing
    // branch (2 - p) - s0^2 < 0, so this never fires in practice.
    for (int attempt = 0; attempt < 5; ++attempt) {
        bool degenerate = false;
        for (int k = 0; k <= g.size() / 2; ++k) {
            if (std::abs(constant_spectrum(s0, cfg.p, k)) < 1e-8) {
                degenerate = true;
                break;
            }
        }
        if (!degenerate) break;
        // Downward keeps a root: degeneracy of the k = 0 mode sits exactly at
        // the barrier peak, and raising c0 could step past it.
        c0 *= 0.99;
        s0 = constant_solution(c0, cfg.p);
        rep.warnings.push_back("degenerate linearization at the homotopy start; c0 perturbed by 1%");
    }

    Eigen::VectorXd h = Eigen::VectorXd::Constant(g.size(), s0);
    double t = 0.0;
    double dt = 1.0 / static_cast<double>(cfg.steps_init);
    bool stalled_only_nonconvex = true;
    while (t < 1.0) {
        const double t_next = (1.0 - t <= dt * (1.0 + 1e-12)) ? 1.0 : t + dt;
        Eigen::VectorXd ft =
            t_next == 1.0
                ? f.values()
                : Eigen::VectorXd(((1.0 - t_next) * c0 + t_next * f.values().array()).matrix());
        Eigen::VectorXd h_try = h;
        NewtonResult nr = damped_newton(g, h_try, ft, cfg.p, cfg.newton_tol, cfg.newton_max);
        rep.newton_iterations_total += nr.iters;
        if (nr.ok) {
            h = h_try;
            t = t_next;
            ++rep.homotopy_steps_used;
            dt *= 2.0;
            stalled_only_nonconvex = true;
        } else {
            dt *= 0.5;
            stalled_only_nonconvex = stalled_only_nonconvex && nr.nonconvex_seen;
            if (dt < cfg.step_min) {
                if (stalled_only_nonconvex) {
                    fail("NonConvexIterate",
                         "Newton candidates lost convexity persistently near t = " +
                             std::to_string(t));
                }
                fail("HomotopyStalled", "homotopy step fell below " +
                                            std::to_string(cfg.step_min) + " at t = " +
                                            std::to_string(t));
            }
        }
    }

    rep.body = body_from_support(make_field(g, h));
    rep.residual_linf =
        residual_on_values(g, h, f.values(), cfg.p).lpNorm<Eigen::Infinity>();
    rep.gamma = gaussian_volume(rep.body);
    rep.mass = mass;
    if (cfg.p <= 2.0 && rep.gamma <= 0.5) {
        rep.warnings.push_back(
            "gamma <= 1/2 at the solution; the small-mass regime predicts gamma > 1/2");
    }
    if (cfg.p > 2.0) {
        auto [lo, hi] = a_priori_bounds(f, cfg.p);
        if (h.minCoeff() < lo - 1e-9 || h.maxCoeff() > hi + 1e-9) {
            rep.warnings.push_back("solution leaves the a priori support bounds");
        }
    }
    return rep;
}

UniquenessReport uniqueness_probe(const MeasureDensity& f, double p,
                                  const std::vector<Body>& inits, double newton_tol,
                                  int newton_max) {
    if (!(p > 2.0)) {
        fail("UnsupportedExponent", "uniqueness probe requires p > 2");
    }
    require_positive_density(f);
    // Keep iterates away from the spurious h -> 0 root: genuine solutions
    // stay above the barrier root of the largest density value, so half of
    // it is a safe floor.
    const double support_floor = 0.5 * a_priori_bounds(f, p).first;
    UniquenessReport rep;
    for (const Body& start : inits) {
        if (!(start.grid() == f.grid())) {
            fail("GridMismatch", "starting body and density live on different grids");
        }
        Eigen::VectorXd h = start.support();
        NewtonResult nr;
        try {
            nr = damped_newton(f.grid(), h, f.values(), p, newton_tol, newton_max,
                               support_floor);
        } catch (const Error& err) {
            rep.start_outcomes.push_back(std::string("NewtonDiverged: ") + err.name());
            continue;
        }
        if (nr.ok) {
            rep.start_outcomes.push_back("converged");
            rep.solutions.push_back(body_from_support(make_field(f.grid(), h)));
            ++rep.converged;
        } else {
            rep.start_outcomes.push_back("NewtonDiverged: " + nr.reason);
        }
    }
    for (std::size_t i = 0; i < rep.solutions.size(); ++i) {
        for (std::size_t j = i + 1; j < rep.solutions.size(); ++j) {
            rep.max_pairwise_distance = std::max(
                rep.max_pairwise_distance, hausdorff_distance(rep.solutions[i], rep.solutions[j]));
        }
    }
    return rep;
}

std::pair<double, double> a_priori_bounds(const MeasureDensity& f, double p) {
    if (!(p > 2.0)) {
        fail("UnsupportedExponent", "a priori bounds use the decreasing barrier, p > 2");
    }
    require_positive_density(f);
    return {constant_solution(f.values().maxCoeff(), p),
            constant_solution(f.values().minCoeff(), p)};
}

}  // namespace gaussmink
