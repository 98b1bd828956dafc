#include "gaussmink/body.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "gaussmink/errors.hpp"
#include "polygon.hpp"

namespace gaussmink {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Periodic monotonicity-preserving cubic interpolation (Fritsch-Carlson
// derivative limiting) on strictly increasing knots covering one period.
class PeriodicPchip {
public:
    PeriodicPchip(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const size_t m = x_.size();
        std::vector<double> dx(m), slope(m);
        for (size_t j = 0; j < m; ++j) {
            const size_t j1 = (j + 1) % m;
            dx[j] = (j1 == 0 ? x_[0] + kTwoPi : x_[j1]) - x_[j];
            slope[j] = (y_[j1] - y_[j]) / dx[j];
        }
        d_.resize(m);
        for (size_t j = 0; j < m; ++j) {
            const size_t jm = (j + m - 1) % m;
            if (slope[jm] * slope[j] <= 0.0) {
                d_[j] = 0.0;  // local extremum: flat derivative avoids overshoot
            } else {
                const double w1 = 2.0 * dx[j] + dx[jm];
                const double w2 = dx[j] + 2.0 * dx[jm];
                d_[j] = (w1 + w2) / (w1 / slope[jm] + w2 / slope[j]);
            }
        }
        dx_ = std::move(dx);
    }

    double eval(double t) const {
        const size_t m = x_.size();
        while (t < x_[0]) t += kTwoPi;
        while (t >= x_[0] + kTwoPi) t -= kTwoPi;
        size_t j = std::upper_bound(x_.begin(), x_.end(), t) - x_.begin();
        j = (j == 0) ? m - 1 : j - 1;
        const size_t j1 = (j + 1) % m;
        const double h = dx_[j];
        const double s = (t - x_[j]) / h;
        const double s2 = s * s, s3 = s2 * s;
        const double h00 = 2 * s3 - 3 * s2 + 1;
        const double h10 = s3 - 2 * s2 + s;
        const double h01 = -2 * s3 + 3 * s2;
        const double h11 = s3 - s2;
        return h00 * y_[j] + h * h10 * d_[j] + h01 * y_[j1] + h * h11 * d_[j1];
    }

private:
    std::vector<double> x_, y_, dx_, d_;
};

// Direction angles and radii of the nodewise boundary points, with the u
// sequence unwrapped to a single increasing pass around the circle.
void boundary_angles(const Grid& grid, const Eigen::VectorXd& h, const Eigen::VectorXd& dh,
                     std::vector<double>& u, std::vector<double>& rho) {
    const int n = grid.size();
    u.resize(n);
    rho.resize(n);
    for (int i = 0; i < n; ++i) {
        const double c = std::cos(grid.node(i)), s = std::sin(grid.node(i));
        const double x = h[i] * c - dh[i] * s;
        const double y = h[i] * s + dh[i] * c;
        rho[i] = std::hypot(x, y);
        double a = std::atan2(y, x);
        if (a < 0.0) a += kTwoPi;
        u[i] = a;
    }
    // Unwrap: each step forward by the wrapped increment. The Gauss map of a
    // convex body is monotone; allow round-off slack, reject real reversals.
    const double slack = 1e-9;
    for (int i = 1; i < n; ++i) {
        double d = u[i] - u[i - 1];
        d -= kTwoPi * std::floor(d / kTwoPi);  // into [0, 2pi)
        if (d > std::numbers::pi) {
            // Looks like a backward step of 2pi - d.
            if (kTwoPi - d > slack)
                fail("DegenerateGauss", "boundary direction sequence reverses at node " +
                                            std::to_string(i));
            d = 0.0;
        }
        u[i] = u[i - 1] + d;
    }
}

// Radial samples on the grid nodes from the smooth-path caches.
Eigen::VectorXd radial_by_interpolation(const Grid& grid, const Eigen::VectorXd& h,
                                        const Eigen::VectorXd& dh) {
    std::vector<double> u, rho;
    boundary_angles(grid, h, dh, u, rho);
    // Merge stalls (flat facets at grid resolution) so knots strictly increase.
    std::vector<double> uk, rk;
    uk.reserve(u.size());
    rk.reserve(u.size());
    for (size_t i = 0; i < u.size(); ++i) {
        if (!uk.empty() && u[i] - uk.back() < 1e-13) continue;
        uk.push_back(u[i]);
        rk.push_back(rho[i]);
    }
    if (uk.size() < 4) fail("DegenerateGauss", "too few distinct boundary directions");
    // Bring the first knot into [0, 2pi) keeping increments.
    const double shift = kTwoPi * std::floor(uk[0] / kTwoPi);
    for (auto& v : uk) v -= shift;

    PeriodicPchip interp(std::move(uk), std::move(rk));
    Eigen::VectorXd out(grid.size());
    for (int i = 0; i < grid.size(); ++i) out[i] = interp.eval(grid.node(i));
    return out;
}

Body body_from_polygon(const detail::Polygon& poly, const Grid& grid) {
    Eigen::VectorXd h, dh;
    detail::support_on_grid(poly, grid, h, dh);
    Eigen::VectorXd rho = detail::radial_on_grid(poly, grid);
    return make_body_unchecked(grid, std::move(h), std::move(dh), std::move(rho));
}

void require_positive(const Eigen::VectorXd& v, const char* who) {
    for (int i = 0; i < v.size(); ++i)
        if (!(v[i] > 0.0))
            fail("NonPositiveSupport", std::string(who) + " has non-positive value at node " +
                                           std::to_string(i));
}

}  // namespace

Body make_body_unchecked(Grid grid, Eigen::VectorXd h, Eigen::VectorXd dh, Eigen::VectorXd rho) {
    Body b;
    b.grid_ = std::move(grid);
    b.h_ = std::move(h);
    b.dh_ = std::move(dh);
    b.rho_ = std::move(rho);
    return b;
}

Body body_from_support(const ScalarField& support, double eps_convex) {
    const Grid& grid = support.grid;
    const Eigen::VectorXd& h = support.values;
    require_positive(h, "support field");

    // Convexity test on the three-point stencil: the quantity
    //   (h_{i-1} + h_{i+1} - 2 cos(w) h_i) / w^2
    // approximates h'' + h on smooth fields and is exactly proportional to
    // the edge length of the wedge polygon on piecewise-linear (Wulff-shape)
    // supports, so polygonal bodies pass without the Gibbs oscillation a
    // spectral second derivative would show at their kinks.
    const int n = grid.size();
    const double w = grid.weight();
    const double two_cos = 2.0 * std::cos(w);
    const double strict_eps = 1e-9 * h.maxCoeff();
    const double eps = (eps_convex < 0.0) ? strict_eps : eps_convex;
    int worst_node = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double edge = (h[(i + n - 1) % n] + h[(i + 1) % n] - two_cos * h[i]) / (w * w);
        if (edge < worst) {
            worst = edge;
            worst_node = i;
        }
    }
    if (worst < -eps)
        fail("NotConvex", "discrete h'' + h = " + std::to_string(worst) + " at node " +
                              std::to_string(worst_node) + " (slack " + std::to_string(eps) + ")");

    Eigen::VectorXd dh = grid.deriv1(h);
    try {
        Eigen::VectorXd rho = radial_by_interpolation(grid, h, dh);
        return make_body_unchecked(grid, h, std::move(dh), std::move(rho));
    } catch (const Error&) {
        // The trig interpolant's derivative oscillates at support kinks and
        // can scramble the boundary direction sequence even though the field
        // is discretely convex. Such fields are wedge-polygon supports; take
        // the boundary data from that polygon instead. Callers that loosened
        // the convexity slack past round-off do not get this second chance.
        if (worst < -strict_eps) throw;
        std::vector<Eigen::Vector2d> pts;
        pts.reserve(n);
        for (int i = 0; i < n; ++i)
            pts.emplace_back(std::cos(grid.node(i)) / h[i], std::sin(grid.node(i)) / h[i]);
        const detail::Polygon poly = detail::polar(detail::convex_hull(std::move(pts)));
        Eigen::VectorXd hp, dhp;
        detail::support_on_grid(poly, grid, hp, dhp);
        Eigen::VectorXd rho = detail::radial_on_grid(poly, grid);
        return make_body_unchecked(grid, h, std::move(dhp), std::move(rho));
    }
}

Body ball_body(const Grid& grid, double radius) {
    if (!(radius > 0.0)) fail("NonPositiveSupport", "ball radius must be positive");
    const int n = grid.size();
    return make_body_unchecked(grid, Eigen::VectorXd::Constant(n, radius),
                               Eigen::VectorXd::Zero(n), Eigen::VectorXd::Constant(n, radius));
}

ScalarField radial_from_support(const Body& body) {
    return ScalarField{body.grid(), body.radial()};
}

BoundaryPoint boundary_point(const Body& body, double theta) {
    const Grid& grid = body.grid();
    double t = theta - kTwoPi * std::floor(theta / kTwoPi);
    const double pos_on_grid = t / grid.weight();
    const int nearest = static_cast<int>(std::lround(pos_on_grid)) % grid.size();

    double h, dh;
    if (std::abs(pos_on_grid - std::lround(pos_on_grid)) < 1e-12) {
        h = body.support()[nearest];
        dh = body.support_derivative()[nearest];
    } else {
        h = resample(body.support_field(), {theta})[0];
        dh = resample(ScalarField{grid, body.support_derivative()}, {theta})[0];
    }
    const double c = std::cos(theta), s = std::sin(theta);
    BoundaryPoint bp;
    bp.position = Eigen::Vector2d(h * c - dh * s, h * s + dh * c);
    bp.theta = theta;
    bp.rho = bp.position.norm();
    double u = std::atan2(bp.position.y(), bp.position.x());
    if (u < 0.0) u += kTwoPi;
    bp.u_angle = u;
    return bp;
}

Body wulff_shape(const ScalarField& f) {
    require_positive(f.values, "wulff input");
    const Grid& grid = f.grid;
    std::vector<Eigen::Vector2d> pts;
    pts.reserve(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
        const double inv = 1.0 / f.values[i];
        pts.emplace_back(inv * std::cos(grid.node(i)), inv * std::sin(grid.node(i)));
    }
    const detail::Polygon dual = detail::convex_hull(std::move(pts));
    return body_from_polygon(detail::polar(dual), grid);
}

Body convex_hull_body(const ScalarField& r) {
    require_positive(r.values, "radial field");
    const Grid& grid = r.grid;
    std::vector<Eigen::Vector2d> pts;
    pts.reserve(grid.size());
    for (int i = 0; i < grid.size(); ++i)
        pts.emplace_back(r.values[i] * std::cos(grid.node(i)),
                         r.values[i] * std::sin(grid.node(i)));
    return body_from_polygon(detail::convex_hull(std::move(pts)), grid);
}

Body polar_body(const Body& body) {
    return convex_hull_body(ScalarField{body.grid(), body.support().cwiseInverse()});
}

Body scale_body(const Body& body, double c) {
    if (!(c > 0.0) || !std::isfinite(c)) fail("InvalidScale", "scale factor must be positive");
    return make_body_unchecked(body.grid(), c * body.support(), c * body.support_derivative(),
                               c * body.radial());
}

Body symmetrize(const Body& body) {
    const Grid& grid = body.grid();
    const int n = grid.size(), half = n / 2;
    Eigen::VectorXd avg(n);
    for (int i = 0; i < n; ++i) avg[i] = 0.5 * (body.support()[i] + body.support()[(i + half) % n]);

    Body w = wulff_shape(ScalarField{grid, avg});
    // The Wulff shape of an even field is even; enforce exact node equality
    // against round-off so downstream evenness checks can compare bitwise.
    Eigen::VectorXd h = w.support(), dh = w.support_derivative(), rho = w.radial();
    for (int i = 0; i < half; ++i) {
        h[i] = h[i + half] = 0.5 * (h[i] + h[i + half]);
        dh[i] = dh[i + half] = 0.5 * (dh[i] + dh[i + half]);
        rho[i] = rho[i + half] = 0.5 * (rho[i] + rho[i + half]);
    }
    return make_body_unchecked(grid, std::move(h), std::move(dh), std::move(rho));
}

double hausdorff_distance(const Body& a, const Body& b) {
    if (!(a.grid() == b.grid())) fail("GridMismatch", "bodies live on different grids");
    return (a.support() - b.support()).lpNorm<Eigen::Infinity>();
}

}  // namespace gaussmink
