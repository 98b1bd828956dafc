#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

namespace gaussmink {

// Uniform periodic grid on the circle: theta_i = 2*pi*i/N, quadrature weight
// 2*pi/N per node. Immutable and cheap to copy (nodes and the trigonometric
// differentiation matrices live behind a shared pointer). Two grids compare
// equal iff they have the same node count.
class Grid {
public:
    Grid() = default;

    int size() const { return impl_->n; }
    double weight() const { return impl_->w; }
    double node(int i) const { return impl_->nodes[i]; }
    const Eigen::VectorXd& nodes() const { return impl_->nodes; }

    // Collocation derivative matrices of the trigonometric interpolant.
    // First-derivative matrix maps the Nyquist mode to zero (standard
    // convention); the second-derivative matrix keeps its -(N/2)^2 factor.
    const Eigen::MatrixXd& d1() const { return impl_->d1; }
    const Eigen::MatrixXd& d2() const { return impl_->d2; }

    // Matrix-vector products with the constant mode subtracted first. The
    // matrices annihilate constants analytically but not in floating point
    // (row sums accumulate ~N^2*eps of round-off), which is enough to spoil
    // closed-form identities on balls. Prefer these over raw d1()/d2() when
    // the input can be constant.
    Eigen::VectorXd deriv1(const Eigen::VectorXd& v) const;
    Eigen::VectorXd deriv2(const Eigen::VectorXd& v) const;

    bool operator==(const Grid& other) const { return size() == other.size(); }

    friend Grid make_grid(int n);

private:
    struct Impl {
        int n = 0;
        double w = 0.0;
        Eigen::VectorXd nodes;
        Eigen::MatrixXd d1, d2;
    };
    std::shared_ptr<const Impl> impl_;
};

// Real-valued function sampled at the grid nodes (support values, densities,
// perturbations). Values are validated finite at construction.
struct ScalarField {
    Grid grid;
    Eigen::VectorXd values;
};

// Throws InvalidGrid unless n is even and >= 16.
Grid make_grid(int n);

// Validates length and finiteness.
ScalarField make_field(const Grid& grid, Eigen::VectorXd values);
ScalarField constant_field(const Grid& grid, double value);

// Periodic-trapezoid quadrature: exact for trigonometric polynomials of
// degree < N/2.
double integrate(const ScalarField& field);

// Derivative of the trigonometric interpolant, order 1 or 2.
ScalarField differentiate(const ScalarField& field, int order);

// Trigonometric interpolation at arbitrary angles; exact at grid nodes.
std::vector<double> resample(const ScalarField& field, const std::vector<double>& angles);

// Resample onto another grid's nodes.
ScalarField resample_to_grid(const ScalarField& field, const Grid& target);

}  // namespace gaussmink
