#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "vortexlab/flows.hpp"
#include "vortexlab/radial.hpp"
#include "vortexlab/scenario.hpp"

namespace vortexlab::approx {

using radial::ModeFunction;
using radial::RadialGrid;
using radial::RadialProfile;

// Sum of angular modes sharing one radial grid.
struct ModeSum {
    std::vector<ModeFunction> parts;

    double eval(double r, double theta) const;
    const ModeFunction* mode(int n) const;
    bool empty() const { return parts.empty(); }
};

// --- vortex-center trajectories -------------------------------------------

enum class CenterVariant {
    naive,    // z' = f(z, t)
    modified, // z' = f(z, t) + nu t Lap f(z, t)
};

// Dense-output trajectory: adaptive one-step integration knots plus cubic
// Hermite evaluation between them.
struct CenterTrajectory {
    CenterVariant variant = CenterVariant::modified;
    std::vector<double> times;
    std::vector<Vec2> z;
    std::vector<Vec2> zdot;

    Vec2 at(double t) const;
    Vec2 deriv(double t) const;
};

CenterTrajectory integrate_center(const VortexScenario& scenario, CenterVariant variant);

// --- approximate solution in self-similar variables ------------------------

// Flow-independent radial shapes entering the correction hierarchy,
// computed once per grid. All members are amplitudes on `grid`.
class ProfileCache {
public:
    explicit ProfileCache(std::shared_ptr<const RadialGrid> grid);

    const std::shared_ptr<const RadialGrid>& grid() const { return grid_; }
    const RadialProfile& w2() const { return w2_; }
    const RadialProfile& w2_stream() const { return phi2_; }
    const RadialProfile& w2_prime() const { return w2p_; }

    // second-order family
    const RadialProfile& til2_shape() const { return til2_; }
    // third-order family (mode-1 and mode-3 amplitudes)
    const RadialProfile& bar31_shape() const { return bar31_; }
    const RadialProfile& bar33_shape() const { return bar33_; }
    const RadialProfile& til31_shape() const { return til31_; }
    const RadialProfile& til33_shape() const { return til33_; }
    // fourth-order family
    const RadialProfile& inv2_w2() const { return inv2_w2_; }
    const RadialProfile& inv2_e4() const { return inv2_e4_; }
    const RadialProfile& inv4_e4() const { return inv4_e4_; }
    const RadialProfile& inv4_s4() const { return inv4_s4_; }
    const RadialProfile& s4_shape() const { return s4_; }

private:
    std::shared_ptr<const RadialGrid> grid_;
    RadialProfile w2_, phi2_, w2p_;
    RadialProfile til2_;
    RadialProfile bar31_, bar33_, til31_, til33_;
    RadialProfile inv2_w2_, inv2_e4_, inv4_e4_, inv4_s4_, s4_;
};

// Which correction families to keep when evaluating (ablation support).
struct Truncation {
    bool til2 = true;
    bool bar3 = true;
    bool til3 = true;
    bool fourth = true;
};

struct CorrectionProfiles {
    ModeSum bar2;   // mode 2
    ModeSum til2;   // mode 2
    ModeSum bar3;   // modes 1 and 3
    ModeSum til3;   // modes 1 and 3
    ModeSum fourth; // modes 2 and 4
};

struct ApproxSolution {
    VortexScenario scenario;
    double t = 0.0;
    double eps = 0.0;
    Vec2 z{};
    Vec2 zprime{};
    flows::StrainRates strain; // at (z(t), t)
    CorrectionProfiles profiles;
    std::shared_ptr<const RadialGrid> grid;

    // Omega0 + eps^2 (bar2 + delta til2) + eps^3 (bar3 + delta til3) + eps^4 fourth
    double eval_full(const Vec2& xi, const Truncation& keep = {}) const;

    // quadrature checks of the mass and first-moment identities
    double moment0() const;
    Vec2 moment1() const;
};

// Assemble the correction profiles at time t for a scenario whose center
// follows `traj` (the modified trajectory). Profiles are built on
// cache.grid(); strain coefficients are evaluated at (traj.at(t), t).
ApproxSolution build_approx(const VortexScenario& scenario, double t,
                            const CenterTrajectory& traj, const ProfileCache& cache);

// (sigma - L) Omega on one angular mode, L the self-similar drift-diffusion
// operator; fourth-order stencils with parity ghosts at the origin.
ModeFunction apply_diffusion_shift(const ModeFunction& mode, double sigma);

// Radial application of L on a mode-n amplitude (diagnostic helper).
std::vector<double> apply_lop(int n, const std::shared_ptr<const RadialGrid>& grid,
                              const std::vector<double>& values);

// Physical-space approximation: Gaussian core of size ell at z plus the
// strain-locked quadrupole correction.
double eval_omega_app(double circulation, double ell, const Vec2& z,
                      const flows::ExternalFlow& flow, double t, const Vec2& x,
                      const RadialProfile& w2);

// --- self-similar residual --------------------------------------------------

struct ResidualOptions {
    int weight_power = 6; // N in the (1+|xi|)^N weight
    double log_dt = 1e-3; // centered step in log t for the time derivative
    // Weighted norms are restricted to the core region: the N = 6 weight
    // does not suppress the r^8-type tails of the fourth-order profiles, so
    // beyond a few core radii the norm reflects tail growth, not the
    // asymptotic ordering.
    double r_cut = 5.0;
    int n_theta = 128;
    Truncation keep{};
};

struct ResidualNorms {
    double sup_weighted = 0.0;
    double l2_weighted = 0.0;
};

// Norms of the equation residual of the approximate solution at time t,
// weighted by (1+|xi|)^{-N} e^{+|xi|^2/4}.
ResidualNorms residual_norm(const VortexScenario& scenario, double t,
                            const CenterTrajectory& traj, const ProfileCache& cache,
                            const ResidualOptions& opts = {});

// L1 norm over the plane of a polar-coordinates evaluator, by quadrature on
// the grid (Simpson in r, trapezoid in theta).
double l1_polar(const std::shared_ptr<const RadialGrid>& grid,
                const std::function<double(double, double)>& f, int n_theta = 256);

// --- steady asymmetric-strain comparison ------------------------------------

struct BurgersSolution {
    std::shared_ptr<const RadialGrid> grid;
    double delta = 0.0;
    double lambda = 0.0;
    ModeSum correction; // modes 2 and 4; the mode-0 part is the Gaussian
    int iterations = 0;

    double eval(double r, double theta) const;
};

// Steady vortex in a linear strain of asymmetry lambda at inverse Reynolds
// number delta, by fixed-point iteration over angular modes {0, 2, 4}.
BurgersSolution solve_burgers(double delta, double lambda,
                              const std::shared_ptr<const RadialGrid>& grid);

} // namespace vortexlab::approx
