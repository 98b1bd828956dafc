#pragma once

// Internal planar-polygon helpers backing the Wulff-shape and convex-hull
// constructions. All polygons are convex, counterclockwise, with the origin
// strictly interior; under those assumptions support and radial evaluations
// at grid directions are exact up to round-off.

#include <Eigen/Dense>
#include <vector>

#include "gaussmink/grid.hpp"

namespace gaussmink::detail {

struct Polygon {
    // CCW vertex list, rotated so that the vertex polar angles are strictly
    // increasing within one period starting at angle(verts[0]).
    std::vector<Eigen::Vector2d> verts;
};

// Monotone-chain convex hull; collinear points are dropped so every kept
// point is a true vertex. Throws HullDegenerate for hulls with fewer than 3
// vertices or with the origin not strictly interior.
Polygon convex_hull(std::vector<Eigen::Vector2d> points);

// Polar polygon: vertices of P* are the duals of P's edges.
Polygon polar(const Polygon& poly);

// Support values max_j <w_j, u(theta_i)> and the tangential derivative
// <w_j*, u_perp(theta_i)> of the contact vertex, at every grid node.
void support_on_grid(const Polygon& poly, const Grid& grid,
                     Eigen::VectorXd& h, Eigen::VectorXd& dh);

// Radial function via ray-edge intersection at every grid node.
Eigen::VectorXd radial_on_grid(const Polygon& poly, const Grid& grid);

}  // namespace gaussmink::detail
