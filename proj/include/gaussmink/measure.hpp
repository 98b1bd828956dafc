#pragma once

#include "gaussmink/grid.hpp"

namespace gaussmink {

// Nonnegative target-measure density f on the grid (per radian). The even
// flag asserts f_i == f_{i+N/2} exactly; solvers for the even problem demand
// it. Spread (not concentrated near a single axis through the origin) is
// checked by the callers that need it via second_moment_min_eigenvalue.
class MeasureDensity {
public:
    static MeasureDensity from_values(const ScalarField& density, bool even);

    const Grid& grid() const { return f_.grid; }
    const ScalarField& density() const { return f_; }
    const Eigen::VectorXd& values() const { return f_.values; }
    bool even() const { return even_; }
    double mass() const;

    // Smallest eigenvalue of the 2x2 second-moment matrix of f, normalized
    // by the mass. Zero for a density concentrated on one antipodal pair.
    double second_moment_min_eigenvalue() const;

private:
    ScalarField f_;
    bool even_ = false;
};

MeasureDensity uniform_measure(const Grid& grid, double total_mass);

// Rescale density so the measure has the requested total mass.
MeasureDensity with_mass(const MeasureDensity& mu, double total_mass);

}  // namespace gaussmink
