#include "gaussmink/gauss.hpp"

#include <cmath>
#include <numbers>

#include "gaussmink/errors.hpp"

namespace gaussmink {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
const double kInvSqrt2Pi = 1.0 / std::sqrt(kTwoPi);
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}  // namespace

double gaussian_volume(const Body& body) {
    const Grid& grid = body.grid();
    const Eigen::VectorXd& h = body.support();
    const Eigen::VectorXd& dh = body.support_derivative();
    const Eigen::VectorXd curv = grid.deriv2(h) + h;

    double acc = 0.0;
    for (int i = 0; i < grid.size(); ++i) {
        const double r2 = h[i] * h[i] + dh[i] * dh[i];
        const double jac = std::max(h[i] * curv[i] / r2, 0.0);
        acc += (1.0 - std::exp(-0.5 * r2)) * jac;
    }
    return acc * grid.weight() / kTwoPi;
}

LpDensity lp_density(const Body& body, double p) {
    const Grid& grid = body.grid();
    const Eigen::VectorXd& h = body.support();
    const Eigen::VectorXd& dh = body.support_derivative();
    const Eigen::VectorXd curv = grid.deriv2(h) + h;

    Eigen::VectorXd d(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
        const double r2 = h[i] * h[i] + dh[i] * dh[i];
        d[i] = std::pow(h[i], 1.0 - p) * std::exp(-0.5 * r2) * curv[i] / kTwoPi;
    }
    return LpDensity{p, ScalarField{grid, std::move(d)}};
}

double lp_total(const Body& body, double p) {
    return integrate(lp_density(body, p).density);
}

double lp_total_boundary_oracle(const Body& body, double p) {
    const Grid& grid = body.grid();
    const Eigen::VectorXd& h = body.support();
    const Eigen::VectorXd& dh = body.support_derivative();

    Eigen::VectorXd x(grid.size()), y(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
        const double c = std::cos(grid.node(i)), s = std::sin(grid.node(i));
        x[i] = h[i] * c - dh[i] * s;
        y[i] = h[i] * s + dh[i] * c;
    }
    const Eigen::VectorXd xp = grid.deriv1(x);
    const Eigen::VectorXd yp = grid.deriv1(y);

    double acc = 0.0;
    for (int i = 0; i < grid.size(); ++i) {
        const double c = std::cos(grid.node(i)), s = std::sin(grid.node(i));
        const double support = x[i] * c + y[i] * s;  // <x, nu>
        const double arc = std::hypot(xp[i], yp[i]);
        acc += std::exp(-0.5 * (x[i] * x[i] + y[i] * y[i])) * std::pow(support, 1.0 - p) * arc;
    }
    return acc * grid.weight() / kTwoPi;
}

double psi(double t) { return kInvSqrt2Pi * std::exp(-0.5 * t * t); }

double upsilon(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double upsilon_inverse(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        fail("DomainError", "quantile argument must lie strictly in (0,1)");

    double lo = -40.0, hi = 40.0, x = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double err = upsilon(x) - alpha;
        if (err > 0.0)
            hi = x;
        else
            lo = x;
        if (std::abs(err) < 1e-16 || hi - lo < 1e-15 * (1.0 + std::abs(x))) break;
        const double slope = psi(x);
        double next = (slope > 0.0) ? x - err / slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        x = next;
    }
    return x;
}

IsoperimetricReport isoperimetric_deficit(const Body& body, double p) {
    if (p < 1.0)
        fail("UnsupportedExponent", "isoperimetric bound holds for p >= 1, got p = " +
                                        std::to_string(p));
    IsoperimetricReport rep;
    rep.gamma = gaussian_volume(body);
    rep.total = lp_total(body, p);
    const double two_gamma = 2.0 * rep.gamma;
    rep.bound = two_gamma * std::pow(psi(upsilon_inverse(rep.gamma)) / two_gamma, p);
    rep.deficit = rep.total - rep.bound;
    return rep;
}

}  // namespace gaussmink
