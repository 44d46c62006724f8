#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "vortexlab/approx.hpp"
#include "vortexlab/radial.hpp"
#include "vortexlab/spectral.hpp"

namespace vortexlab::diag {

// Normalized L1 distance between a simulated field and a reference
// evaluator: (1/Gamma) sum |w - ref| dx^2.
double l1_error(const spectral::SpectralField& w, const std::function<double(Vec2)>& ref,
                double circulation);

struct Moments {
    double circulation = 0.0;
    Vec2 center{};
    // second moments about the center: m[0]=xx, m[1]=xy, m[2]=yy
    double second[3] = {0.0, 0.0, 0.0};
};

// Discrete vorticity moments by quadrature; requires |circulation| above
// rounding (ZeroCirculation otherwise).
Moments vorticity_moments(const spectral::SpectralField& w);

struct QuadrupoleFit {
    double a_hat = 0.0;
    double b_hat = 0.0;
};

// Project the deviation from the Gaussian core at z with size ell onto the
// strain-locked quadrupole shape; under the metastable state the fitted
// pair reproduces the local strain rates.
QuadrupoleFit quadrupole_fit(const spectral::SpectralField& w, Vec2 z, double ell,
                             const radial::RadialProfile& w2, int n_theta = 256);

// Rescaled deviation sampled on a polar grid, theta fastest.
struct PolarField {
    std::shared_ptr<const radial::RadialGrid> grid;
    int n_theta = 256;
    std::vector<double> values;

    double& at(std::size_t i, int j) { return values[i * n_theta + j]; }
    double at(std::size_t i, int j) const { return values[i * n_theta + j]; }
};

PolarField sample_deviation(const spectral::SpectralField& w, Vec2 z, double ell,
                            double circulation,
                            const std::shared_ptr<const radial::RadialGrid>& grid,
                            int n_theta = 256);

struct WeightedEnergy {
    double energy = 0.0;   // int p w^2
    double dissipation = 0.0; // int p (|grad w|^2 + |xi|^2 w^2 + w^2)
};

// Gaussian-weighted quadratic functionals of a rescaled deviation; the
// input must decay below 1e-8 of its peak before the outer radius, else
// the weight amplifies noise (WeightOverflowRisk).
WeightedEnergy weighted_energy(const PolarField& w);

// Least-squares exponent of (t0/t) in a relaxation history; the late-time
// plateau is estimated as the mean of the final quarter.
double relaxation_fit(const std::vector<double>& t, const std::vector<double>& err);

struct TrackingRecord {
    double t = 0.0;
    double eps = 0.0;
    double l1_vs_lo_zhat = 0.0;
    double l1_vs_lo_z = 0.0;
    double l1_vs_omega_app = 0.0;
    double a_hat = 0.0;
    double b_hat = 0.0;
    Vec2 z_bar{}, z{}, z_hat{};
};

// All per-snapshot diagnostics of a tracked run in one sweep.
TrackingRecord track_snapshot(const spectral::Snapshot& snap, const VortexScenario& sc,
                              const approx::CenterTrajectory& traj_mod,
                              const approx::CenterTrajectory& traj_naive,
                              const radial::RadialProfile& w2);

} // namespace vortexlab::diag
