#include "gaussmink/grid.hpp"

#include <cmath>
#include <numbers>

#include "gaussmink/errors.hpp"

namespace gaussmink {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Grid make_grid(int n) {
    if (n < 16 || n % 2 != 0)
        fail("InvalidGrid", "grid size must be even and at least 16, got " + std::to_string(n));

    auto impl = std::make_shared<Grid::Impl>();
    impl->n = n;
    impl->w = kTwoPi / n;
    impl->nodes.resize(n);
    for (int i = 0; i < n; ++i) impl->nodes[i] = kTwoPi * i / n;

    // Collocation matrices for the periodic trigonometric interpolant on an
    // even grid. Off-diagonal entries depend only on i-j, so build one
    // stencil column and fill both Toeplitz matrices from it.
    const double h = impl->w;
    Eigen::VectorXd c1(n), c2(n);
    c1[0] = 0.0;
    c2[0] = -std::numbers::pi * std::numbers::pi / (3.0 * h * h) - 1.0 / 6.0;
    for (int k = 1; k < n; ++k) {
        const double s = std::sin(0.5 * k * h);
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        c1[k] = 0.5 * sign * (std::cos(0.5 * k * h) / s);
        c2[k] = -sign / (2.0 * s * s);
    }
    impl->d1.resize(n, n);
    impl->d2.resize(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const int k = ((i - j) % n + n) % n;
            impl->d1(i, j) = c1[k];
            impl->d2(i, j) = c2[k];
        }
    }

    Grid g;
    g.impl_ = std::move(impl);
    return g;
}

Eigen::VectorXd Grid::deriv1(const Eigen::VectorXd& v) const {
    return impl_->d1 * (v.array() - v[0]).matrix();
}

Eigen::VectorXd Grid::deriv2(const Eigen::VectorXd& v) const {
    return impl_->d2 * (v.array() - v[0]).matrix();
}

ScalarField make_field(const Grid& grid, Eigen::VectorXd values) {
    if (values.size() != grid.size())
        fail("InvalidField", "value count " + std::to_string(values.size()) +
                                 " does not match grid size " + std::to_string(grid.size()));
    if (!values.allFinite()) fail("InvalidField", "field contains non-finite values");
    return ScalarField{grid, std::move(values)};
}

ScalarField constant_field(const Grid& grid, double value) {
    return make_field(grid, Eigen::VectorXd::Constant(grid.size(), value));
}

double integrate(const ScalarField& field) {
    return field.grid.weight() * field.values.sum();
}

ScalarField differentiate(const ScalarField& field, int order) {
    if (order != 1 && order != 2)
        fail("InvalidField", "derivative order must be 1 or 2, got " + std::to_string(order));
    return ScalarField{field.grid, order == 1 ? field.grid.deriv1(field.values)
                                              : field.grid.deriv2(field.values)};
}

namespace {

// Real Fourier coefficients of the interpolant:
//   f(t) = a0 + sum_{k=1}^{N/2-1} (a_k cos kt + b_k sin kt) + a_{N/2} cos(Nt/2).
struct TrigCoeffs {
    Eigen::VectorXd a, b;  // a has N/2+1 entries, b has N/2-1 (k = 1..N/2-1)
};

TrigCoeffs trig_coeffs(const ScalarField& field) {
    const int n = field.grid.size();
    const int half = n / 2;
    TrigCoeffs c;
    c.a.setZero(half + 1);
    c.b.setZero(half - 1);
    const auto& v = field.values;
    const auto& nodes = field.grid.nodes();
    c.a[0] = v.sum() / n;
    for (int k = 1; k < half; ++k) {
        double ca = 0.0, cb = 0.0;
        for (int i = 0; i < n; ++i) {
            ca += v[i] * std::cos(k * nodes[i]);
            cb += v[i] * std::sin(k * nodes[i]);
        }
        c.a[k] = 2.0 * ca / n;
        c.b[k - 1] = 2.0 * cb / n;
    }
    double cn = 0.0;
    for (int i = 0; i < n; ++i) cn += v[i] * ((i % 2 == 0) ? 1.0 : -1.0);
    c.a[half] = cn / n;
    return c;
}

double trig_eval(const TrigCoeffs& c, int n, double theta) {
    const int half = n / 2;
    double s = c.a[0];
    for (int k = 1; k < half; ++k)
        s += c.a[k] * std::cos(k * theta) + c.b[k - 1] * std::sin(k * theta);
    s += c.a[half] * std::cos(half * theta);
    return s;
}

}  // namespace

std::vector<double> resample(const ScalarField& field, const std::vector<double>& angles) {
    const TrigCoeffs c = trig_coeffs(field);
    std::vector<double> out(angles.size());
    for (size_t i = 0; i < angles.size(); ++i)
        out[i] = trig_eval(c, field.grid.size(), angles[i]);
    return out;
}

ScalarField resample_to_grid(const ScalarField& field, const Grid& target) {
    if (field.grid == target) return field;
    const TrigCoeffs c = trig_coeffs(field);
    Eigen::VectorXd v(target.size());
    for (int i = 0; i < target.size(); ++i)
        v[i] = trig_eval(c, field.grid.size(), target.node(i));
    return make_field(target, std::move(v));
}

}  // namespace gaussmink
