#include "polygon.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gaussmink/errors.hpp"

namespace gaussmink::detail {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return a.x() * b.y() - a.y() * b.x();
}

double angle_of(const Eigen::Vector2d& v) {
    double a = std::atan2(v.y(), v.x());
    if (a < 0.0) a += kTwoPi;
    return a;
}

}  // namespace

Polygon convex_hull(std::vector<Eigen::Vector2d> pts) {
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const auto& a, const auto& b) { return a == b; }),
              pts.end());
    const size_t m = pts.size();
    if (m < 3) fail("HullDegenerate", "fewer than 3 distinct points");

    double scale = 0.0;
    for (const auto& p : pts) scale = std::max(scale, p.lpNorm<Eigen::Infinity>());

    // Chain pops only on non-left turns. A tolerance here would be checked in
    // x-sorted order, and along a near-vertical edge that order is decided by
    // round-off in the x coordinates, so tolerance pops fire in an arbitrary
    // sequence and can eat true corner vertices. Round-off-level spurious
    // vertices that survive are dealt with below.
    std::vector<Eigen::Vector2d> hull(2 * m);
    size_t k = 0;
    for (size_t i = 0; i < m; ++i) {  // lower chain
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    const size_t lower = k + 1;
    for (size_t i = m - 1; i-- > 0;) {  // upper chain
        while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);  // last point repeats the first

    // Collinearity sweep in cyclic order: drop vertices within round-off of
    // the chord of their actual neighbors. Unlike a chain tolerance this is
    // stable, because each test uses the true adjacent vertices. Removing a
    // vertex moves support values by O(eps / edge length).
    const double eps = 1e-13 * scale * scale;
    bool removed = true;
    while (removed && hull.size() >= 3) {
        removed = false;
        for (size_t i = 0; i < hull.size() && hull.size() >= 3;) {
            const auto& a = hull[(i + hull.size() - 1) % hull.size()];
            const auto& c = hull[(i + 1) % hull.size()];
            if (cross(hull[i] - a, c - a) <= eps) {
                hull.erase(hull.begin() + static_cast<std::ptrdiff_t>(i));
                removed = true;
            } else {
                ++i;
            }
        }
    }
    if (hull.size() < 3) fail("HullDegenerate", "hull has fewer than 3 vertices");

    // Origin must be strictly interior (K in K^n_o); every CCW edge then has
    // positive moment about the origin.
    for (size_t i = 0; i < hull.size(); ++i) {
        const auto& a = hull[i];
        const auto& b = hull[(i + 1) % hull.size()];
        if (cross(a, b) <= 1e-13 * scale * scale)
            fail("HullDegenerate", "origin not strictly interior to hull");
    }

    // Rotate so vertex angles increase from verts[0].
    size_t start = 0;
    double amin = angle_of(hull[0]);
    for (size_t i = 1; i < hull.size(); ++i) {
        const double a = angle_of(hull[i]);
        if (a < amin) {
            amin = a;
            start = i;
        }
    }
    Polygon poly;
    poly.verts.reserve(hull.size());
    for (size_t i = 0; i < hull.size(); ++i) poly.verts.push_back(hull[(start + i) % hull.size()]);
    return poly;
}

Polygon polar(const Polygon& poly) {
    const size_t m = poly.verts.size();
    std::vector<Eigen::Vector2d> duals;
    duals.reserve(m);
    for (size_t i = 0; i < m; ++i) {
        const auto& a = poly.verts[i];
        const auto& b = poly.verts[(i + 1) % m];
        const double det = cross(a, b);  // positive, checked at construction
        duals.emplace_back((b.y() - a.y()) / det, (a.x() - b.x()) / det);
    }
    return convex_hull(std::move(duals));
}

void support_on_grid(const Polygon& poly, const Grid& grid,
                     Eigen::VectorXd& h, Eigen::VectorXd& dh) {
    const int n = grid.size();
    h.resize(n);
    dh.resize(n);
    for (int i = 0; i < n; ++i) {
        const double c = std::cos(grid.node(i));
        const double s = std::sin(grid.node(i));
        double best = -std::numeric_limits<double>::infinity();
        size_t arg = 0;
        for (size_t j = 0; j < poly.verts.size(); ++j) {
            const double val = poly.verts[j].x() * c + poly.verts[j].y() * s;
            if (val > best) {
                best = val;
                arg = j;
            }
        }
        h[i] = best;
        dh[i] = -poly.verts[arg].x() * s + poly.verts[arg].y() * c;
    }
}

Eigen::VectorXd radial_on_grid(const Polygon& poly, const Grid& grid) {
    const size_t m = poly.verts.size();
    std::vector<double> ang(m);
    for (size_t j = 0; j < m; ++j) ang[j] = angle_of(poly.verts[j]);

    const int n = grid.size();
    Eigen::VectorXd rho(n);
    for (int i = 0; i < n; ++i) {
        const double theta = grid.node(i);
        // Edge whose angular span [ang_j, ang_{j+1}) contains theta, with
        // cyclic wrap below ang[0] and above ang[m-1].
        size_t j = std::upper_bound(ang.begin(), ang.end(), theta) - ang.begin();
        j = (j == 0 || j == m) ? m - 1 : j - 1;
        const auto& a = poly.verts[j];
        const auto& b = poly.verts[(j + 1) % m];
        const Eigen::Vector2d u(std::cos(theta), std::sin(theta));
        const double denom = cross(u, b - a);
        if (std::abs(denom) < 1e-300) fail("HullDegenerate", "ray parallel to hull edge");
        rho[i] = cross(a, b) / denom;
    }
    return rho;
}

}  // namespace gaussmink::detail
