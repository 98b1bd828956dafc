#pragma once

#include <Eigen/Dense>

#include "gaussmink/grid.hpp"

namespace gaussmink {

// Boundary point of a convex body: position x = h(theta)*u + h'(theta)*u_perp
// where u = (cos theta, sin theta). u_angle is the direction angle of x (the
// radial Gauss map applied backwards) and rho = |x|, so rho^2 = h^2 + h'^2.
struct BoundaryPoint {
    Eigen::Vector2d position;
    double theta;    // outer normal angle
    double u_angle;  // direction angle of the position, in [0, 2*pi)
    double rho;      // |position|
};

// Planar convex body with interior origin, stored as support values at the
// grid nodes plus cached first derivative and radial samples. Bodies built
// from smooth support fields carry spectral derivatives; bodies built from
// polygon constructions (wulff_shape, convex_hull_body, polar_body) carry the
// polygon's exact contact derivatives and ray-intersection radii.
class Body {
public:
    const Grid& grid() const { return grid_; }
    const Eigen::VectorXd& support() const { return h_; }
    const Eigen::VectorXd& support_derivative() const { return dh_; }
    const Eigen::VectorXd& radial() const { return rho_; }

    ScalarField support_field() const { return ScalarField{grid_, h_}; }

    friend Body body_from_support(const ScalarField& support, double eps_convex);
    friend Body make_body_unchecked(Grid grid, Eigen::VectorXd h, Eigen::VectorXd dh,
                                    Eigen::VectorXd rho);

private:
    Grid grid_;
    Eigen::VectorXd h_, dh_, rho_;
};

// Validating constructor for smooth support fields. eps_convex < 0 selects
// the default slack 1e-9 * max h. Throws NonPositiveSupport, NotConvex, or
// DegenerateGauss (from the radial extraction).
Body body_from_support(const ScalarField& support, double eps_convex = -1.0);

// Internal: assembles a Body from consistent precomputed caches.
Body make_body_unchecked(Grid grid, Eigen::VectorXd h, Eigen::VectorXd dh, Eigen::VectorXd rho);

Body ball_body(const Grid& grid, double radius);

// Cached radial field rho(theta_i) (largest lambda with lambda*u in K).
ScalarField radial_from_support(const Body& body);

// Inverse Gauss map at an arbitrary normal angle. At grid nodes the cached
// derivative is used; elsewhere h and h' are trigonometrically interpolated
// (meaningful for smooth bodies).
BoundaryPoint boundary_point(const Body& body, double theta);

// Wulff shape [f]: intersection of the halfplanes <u_i, x> <= f_i, computed
// through the polar duality with the convex hull of the points u_i/f_i.
// Satisfies h_[f] <= f nodewise, with equality where the constraint is
// active; a fixed point of discretely convex support fields.
Body wulff_shape(const ScalarField& f);

// Convex hull body <r>: hull of the radial graph points r_i * u_i.
// Satisfies rho_<r> >= r at the nodes.
Body convex_hull_body(const ScalarField& r);

// Polar body via rho_{K*} = 1/h_K.
Body polar_body(const Body& body);

// Dilation by c > 0; all caches scale exactly.
Body scale_body(const Body& body, double c);

// Even part: h_i <- (h_i + h_{i+N/2})/2 followed by Wulff re-convexification.
// The result satisfies h_i == h_{i+N/2} exactly.
Body symmetrize(const Body& body);

// Sup distance of support values (the Hausdorff metric on convex bodies).
double hausdorff_distance(const Body& a, const Body& b);

}  // namespace gaussmink
