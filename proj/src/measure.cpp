#include "gaussmink/measure.hpp"

#include <cmath>

#include "gaussmink/errors.hpp"

namespace gaussmink {

MeasureDensity MeasureDensity::from_values(const ScalarField& density, bool even) {
    const Eigen::VectorXd& f = density.values;
    for (Eigen::Index i = 0; i < f.size(); ++i) {
        if (!std::isfinite(f[i]) || f[i] < 0.0) {
            fail("InvalidField", "measure density must be finite and nonnegative");
        }
    }
    const double mass = density.grid.weight() * f.sum();
    if (!(mass > 0.0)) {
        fail("InvalidField", "measure density must have positive total mass");
    }
    if (even) {
        const int n = density.grid.size();
        for (int i = 0; i < n / 2; ++i) {
            if (f[i] != f[i + n / 2]) {
                fail("MeasureNotEven",
                     "even measure requires f(theta) == f(theta+pi) exactly");
            }
        }
    }
    MeasureDensity mu;
    mu.f_ = density;
    mu.even_ = even;
    return mu;
}

double MeasureDensity::mass() const { return integrate(f_); }

double MeasureDensity::second_moment_min_eigenvalue() const {
    const Grid& g = f_.grid;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int i = 0; i < g.size(); ++i) {
        const double c = std::cos(g.node(i));
        const double s = std::sin(g.node(i));
        const double fi = f_.values[i];
        sxx += fi * c * c;
        sxy += fi * c * s;
        syy += fi * s * s;
    }
    const double w = g.weight();
    sxx *= w;
    sxy *= w;
    syy *= w;
    const double tr = sxx + syy;
    const double disc = std::sqrt(std::max(0.0, (sxx - syy) * (sxx - syy) + 4.0 * sxy * sxy));
    return (0.5 * (tr - disc)) / mass();
}

MeasureDensity uniform_measure(const Grid& grid, double total_mass) {
    ScalarField f = constant_field(grid, total_mass / (2.0 * M_PI));
    return MeasureDensity::from_values(f, true);
}

MeasureDensity with_mass(const MeasureDensity& mu, double total_mass) {
    if (!(total_mass > 0.0) || !std::isfinite(total_mass)) {
        fail("InvalidField", "target mass must be positive and finite");
    }
    ScalarField f = mu.density();
    f.values *= total_mass / mu.mass();
    return MeasureDensity::from_values(f, mu.even());
}

}  // namespace gaussmink
