#include "gaussmink/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gaussmink/errors.hpp"
#include "gaussmink/gauss.hpp"

namespace gaussmink {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

void require_same_grid(const Body& body, const MeasureDensity& mu) {
    if (!(body.grid() == mu.grid())) {
        fail("GridMismatch", "body and measure live on different grids");
    }
}

double objective_value(const Eigen::VectorXd& h, const MeasureDensity& mu, double p) {
    const double w = mu.grid().weight();
    if (p == 0.0) {
        return -w * (h.array().log() * mu.values().array()).sum();
    }
    return -(1.0 / p) * w * (h.array().pow(p) * mu.values().array()).sum();
}

// d(objective)/dh per node, quadrature weight folded into the step size.
Eigen::VectorXd ascent_gradient(const Eigen::VectorXd& h, const MeasureDensity& mu, double p) {
    if (p == 0.0) {
        return -(mu.values().array() / h.array()).matrix();
    }
    return -(h.array().pow(p - 1.0) * mu.values().array()).matrix();
}

// Scale factor c with gamma(cK) = 1/2 in the polar form of the volume,
// (1/2pi) * integral of 1 - e^{-c^2 rho^2/2}. Strictly increasing in c with
// limits 0 and 1, so the root exists and is unique; bracketed Newton. Needs
// no derivatives of the support, so it behaves even on faceted bodies.
double half_volume_scale(const Body& body) {
    const Eigen::ArrayXd rho2 = body.radial().array().square();
    const double front = body.grid().weight() / kTwoPi;
    auto gamma_at = [&](double c) {
        return front * (1.0 - (-0.5 * c * c * rho2).exp()).sum();
    };
    double lo = 1.0, hi = 1.0;
    while (gamma_at(lo) >= 0.5) lo *= 0.5;
    while (gamma_at(hi) <= 0.5) hi *= 2.0;
    double c = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200 && hi - lo > 4e-16 * hi; ++iter) {
        const double gv = gamma_at(c) - 0.5;
        if (gv == 0.0) break;
        (gv < 0.0 ? lo : hi) = c;
        const double slope = front * (c * rho2 * (-0.5 * c * c * rho2).exp()).sum();
        double next = slope > 0.0 ? c - gv / slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        c = next;
    }
    return c;
}

// A(t) = (1 - e^{-t/2}) / t and its derivative, the radial shell factor of
// the volume quadrature as a function of t = |x|^2. Series branch for small
// t where the closed form cancels.
void shell_kernel(double t, double& a, double& ap) {
    if (t < 1e-3) {
        a = 0.5 - t / 8.0 + t * t / 48.0;
        ap = -0.125 + t / 24.0 - t * t / 128.0;
        return;
    }
    const double e = std::exp(-0.5 * t);
    a = (1.0 - e) / t;
    ap = (0.5 * t * e - (1.0 - e)) / (t * t);
}

// Exact gradient of gaussian_volume as a function of the support samples,
// with h' and h'' taken by the same spectral differentiation the quadrature
// uses. The differentiation matrices are antisymmetric (first order) and
// symmetric (second order), so their transposes are applied through the
// same public operations. On smooth bodies this matches the Gaussian
// surface-area density times the node weight up to the discretization
// residual; unlike that density formula it stays the exact gradient at
// finite N, so a step tangent to it changes the enforced volume only at
// second order and the rescale after the step is not a first-order tax on
// the objective.
Eigen::VectorXd spectral_volume_gradient(const Body& body) {
    const Grid& g = body.grid();
    const int n = g.size();
    const Eigen::VectorXd& h = body.support();
    const Eigen::VectorXd hp = g.deriv1(h);
    const Eigen::VectorXd kappa = g.deriv2(h) + h;
    Eigen::VectorXd point(n), v2(n), v1(n);
    for (int i = 0; i < n; ++i) {
        const double t = h[i] * h[i] + hp[i] * hp[i];
        double a, ap;
        shell_kernel(t, a, ap);
        point[i] = kappa[i] * (2.0 * ap * h[i] * h[i] + a) + a * h[i];
        v2[i] = a * h[i];
        v1[i] = 2.0 * ap * h[i] * hp[i] * kappa[i];
    }
    return (g.weight() / kTwoPi) * (point + g.deriv2(v2) - g.deriv1(v1));
}

struct KktState {
    double residual;
    double lambda;
};

KktState kkt_state(const Body& body, const MeasureDensity& mu, double p) {
    LpDensity d = lp_density(body, p);
    const double sp_total = integrate(d.density);
    const double mass = mu.mass();
    const double target_scale = sp_total / mass;
    const double fbar = mass / kTwoPi;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < d.density.values.size(); ++i) {
        const double fi = mu.values()[i];
        const double denom = target_scale * (fi > 0.0 ? fi : fbar);
        worst = std::max(worst, std::abs(d.density.values[i] - target_scale * fi) / denom);
    }
    return {worst, mass / sp_total};
}

}  // namespace

double functional_J(const Body& body, const MeasureDensity& mu, double p) {
    if (p >= 0.0) {
        fail("UnsupportedExponent", "functional J is defined for p < 0");
    }
    require_same_grid(body, mu);
    return objective_value(body.support(), mu, p);
}

double functional_E(const Body& body, const MeasureDensity& mu) {
    require_same_grid(body, mu);
    return objective_value(body.support(), mu, 0.0);
}

Body rescale_to_half(const Body& body) {
    const double c0 = half_volume_scale(body);
    const Eigen::ArrayXd rho2 = body.radial().array().square();
    const double front = body.grid().weight() / kTwoPi;

    // Polish against the actual volume of the dilated body so the returned
    // body, not just the polar-form surrogate, meets the 1/2 target. The
    // slope comes from the radial samples (smooth and strictly positive in
    // c); on smooth bodies the two quadratures agree closely and the polish
    // converges in a step or two.
    double c = c0;
    double best_c = c0;
    double best_gap = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 12; ++iter) {
        const double gv = gaussian_volume(scale_body(body, c)) - 0.5;
        if (std::abs(gv) < best_gap) {
            best_gap = std::abs(gv);
            best_c = c;
        }
        if (best_gap <= 1e-13) break;
        const double slope = front * (c * rho2 * (-0.5 * c * c * rho2).exp()).sum();
        if (!(slope > 0.0)) break;
        const double next = c - gv / slope;
        // A step escaping this bracket means the trigonometric quadrature
        // disagrees badly with the polar form (heavily kinked support);
        // keep the robust polar root rather than chase quadrature noise.
        if (!(next > 0.5 * c0 && next < 2.0 * c0)) break;
        c = next;
    }
    return scale_body(body, best_c);
}

VariationalReport variational_solve(const MeasureDensity& mu, double p,
                                    const VariationalOptions& opts) {
    if (p > 0.0) {
        fail("UnsupportedExponent", "variational solver covers p <= 0");
    }
    if (!mu.even()) {
        fail("MeasureNotEven", "variational solver requires an even measure");
    }
    if (!(mu.second_moment_min_eigenvalue() > opts.eps_spread)) {
        fail("MeasureConcentrated",
             "measure is concentrated near a single axis (second-moment eigenvalue <= " +
                 std::to_string(opts.eps_spread) + ")");
    }
    const Grid& g = mu.grid();

    if (opts.init && !(opts.init->grid() == g)) {
        fail("GridMismatch", "initial body and measure live on different grids");
    }
    const int n = g.size();
    const int half = n / 2;

    // Exact antipodal average. Applied to every candidate before it becomes
    // a body, so the evenness of each iterate holds bitwise, not just to
    // round-off; scaling preserves that exactly.
    auto even_average = [&](const Eigen::VectorXd& v) {
        Eigen::VectorXd out(n);
        for (int i = 0; i < half; ++i) {
            const double m = 0.5 * (v[i] + v[i + half]);
            out[i] = m;
            out[i + half] = m;
        }
        return out;
    };

    // Projection onto the constraint set. Candidates normally stay inside
    // the convex cone and go straight through the smooth constructor, which
    // keeps the iterate's derivative field spectral (a Wulff-built body
    // stores the contact-vertex derivative, which jumps as the contact
    // switches and would make the enforced volume discontinuous along the
    // iterate path). Candidates that leave the cone are convexified first
    // and then rebuilt through the same constructor, so both branches
    // produce the same kind of body and agree where they meet.
    auto project = [&](const Eigen::VectorXd& cand) {
        const Eigen::VectorXd he = even_average(cand);
        std::optional<Body> b;
        try {
            b = body_from_support(make_field(g, he));
        } catch (const Error&) {
            const Body w = symmetrize(wulff_shape(make_field(g, he)));
            b = body_from_support(w.support_field());
        }
        return rescale_to_half(*b);
    };

    // Smoothing operator for the search direction, built once per solve from
    // its Fourier symbol: 1/(1 + alpha k^2) for k <= N/4, zero above. The
    // damping part fixes stiffness: plain ascent has its stable step capped
    // by the constraint-manifold curvature, which grows like k^2, so the
    // iteration count would grow like N^2. The hard cutoff fixes a feedback
    // instability: the volume gradient amplifies mode k of the support by
    // about k^2, so with damping alone the highest modes pass through the
    // projection at unit gain and grow geometrically, driving the support
    // into wiggles that discrete convexity checks at the grid scale cannot
    // see. With the cutoff the direction can never feed frequencies the
    // solver would not resolve anyway. Symmetric positive semidefinite, so
    // the projected direction below keeps a nonnegative ascent rate.
    const double alpha = 1.0;
    const int kband = n / 4;
    Eigen::MatrixXd smoothing(n, n);
    {
        Eigen::MatrixXd basis(n, 2 * kband + 1);
        Eigen::VectorXd symbol(2 * kband + 1);
        basis.col(0).setOnes();
        symbol[0] = 0.5;  // halved like every Fourier-cosine DC term
        for (int k = 1; k <= kband; ++k) {
            for (int i = 0; i < n; ++i) {
                basis(i, 2 * k - 1) = std::cos(k * g.node(i));
                basis(i, 2 * k) = std::sin(k * g.node(i));
            }
            symbol[2 * k - 1] = symbol[2 * k] =
                1.0 / (1.0 + alpha * static_cast<double>(k) * static_cast<double>(k));
        }
        smoothing = (2.0 / n) * basis * symbol.asDiagonal() * basis.transpose();
    }

    Body body = project(opts.init ? opts.init->support()
                                  : Eigen::VectorXd::Constant(
                                        n, std::sqrt(2.0 * std::log(2.0))));

    double obj = objective_value(body.support(), mu, p);
    KktState kkt = kkt_state(body, mu, p);
    if (opts.trace_objective) opts.trace_objective->push_back(obj);

    double step = opts.step0 > 0.0 ? opts.step0 : 0.1 * body.support().minCoeff();
    const double step_floor = 1e-13 * body.support().maxCoeff();
    int iter = 0;
    for (; iter < opts.max_iter; ++iter) {
        if (kkt.residual <= opts.tol_kkt) break;
        const Eigen::VectorXd& h = body.support();

        const Eigen::VectorXd grad = ascent_gradient(h, mu, p);
        const Eigen::VectorXd normal = spectral_volume_gradient(body);
        const Eigen::VectorXd pg = smoothing * grad;
        const Eigen::VectorXd pn = smoothing * normal;
        // Smoothed gradient projected against the volume gradient in the
        // smoothed metric. Keeps <normal, dir> = 0, so the step moves the
        // enforced volume only at second order, and keeps <grad, dir> >= 0
        // with equality exactly at the discrete KKT points.
        Eigen::VectorXd dir = pg - (normal.dot(pg) / normal.dot(pn)) * pn;
        dir = even_average(dir);
        const double dir_scale = dir.lpNorm<Eigen::Infinity>();
        if (dir_scale == 0.0) break;
        dir /= dir_scale;

        bool accepted = false;
        while (step >= step_floor) {
            const Eigen::VectorXd candidate = h + step * dir;
            if (candidate.minCoeff() > 0.0) {
                try {
                    Body next = project(candidate);
                    const double next_obj = objective_value(next.support(), mu, p);
                    if (next_obj >= obj - 1e-12 * (1.0 + std::abs(obj))) {
                        body = std::move(next);
                        obj = next_obj;
                        accepted = true;
                        break;
                    }
                } catch (const Error&) {
                    // Degenerate candidate (hull or interpolation failure);
                    // treat like an objective decrease and shorten the step.
                }
            }
            step *= 0.5;
        }
        if (!accepted) {
            fail("NoProgress", "backtracking floor reached at iteration " +
                                   std::to_string(iter) + " with KKT residual " +
                                   std::to_string(kkt.residual));
        }
        kkt = kkt_state(body, mu, p);
        if (opts.trace_objective) opts.trace_objective->push_back(obj);
        step = std::min(step * 1.5, 0.5 * body.support().minCoeff());
    }

    VariationalReport rep;
    rep.body = body;
    rep.lambda = kkt.lambda;
    rep.kkt_residual = kkt.residual;
    rep.objective = obj;
    rep.iterations = iter;
    return rep;
}

}  // namespace gaussmink
