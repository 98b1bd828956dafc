#pragma once

#include "gaussmink/body.hpp"
#include "gaussmink/grid.hpp"

namespace gaussmink {

// Per-radian density of the L_p Gaussian surface-area measure together with
// its exponent.
struct LpDensity {
    double p;
    ScalarField density;
};

struct IsoperimetricReport {
    double gamma;    // Gaussian volume of the body
    double total;    // S_p total
    double bound;    // isoperimetric lower bound at this gamma and p
    double deficit;  // total - bound, nonnegative for p >= 1
};

// Gaussian (standard normal) volume of the body. The radial integral is
// closed-form in the plane; the angular integral is taken in the support
// parametrization with the exact Jacobian du = h*(h''+h)/(h^2+h'^2) dtheta,
// which keeps the quadrature spectrally accurate and smooth in the data.
double gaussian_volume(const Body& body);

// Density of S_{p,gamma}: (1/2pi) * h^{1-p} * exp(-(h'^2+h^2)/2) * (h''+h).
LpDensity lp_density(const Body& body, double p);

// Total measure of the sphere: integrate(lp_density).
double lp_total(const Body& body, double p);

// Independent evaluation through boundary positions: the arc-length integral
// (1/2pi) * integral of exp(-|x|^2/2) <x,nu>^{1-p} over the boundary, with
// the arc element |x'(theta)| obtained by differentiating the position
// coordinates rather than reusing h''+h.
double lp_total_boundary_oracle(const Body& body, double p);

// Gaussian isoperimetric profile psi(t) = exp(-t^2/2)/sqrt(2pi), the standard
// normal CDF Upsilon, and its inverse (safeguarded Newton with bisection).
double psi(double t);
double upsilon(double x);
double upsilon_inverse(double alpha);

// Deficit against the L_p Gaussian isoperimetric bound
//   S_p >= n*gamma * (psi(Upsilon^{-1}(gamma)) / (n*gamma))^p,  n = 2.
// Requires p >= 1 (UnsupportedExponent otherwise).
IsoperimetricReport isoperimetric_deficit(const Body& body, double p);

}  // namespace gaussmink
