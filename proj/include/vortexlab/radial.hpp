#pragma once

#include <memory>
#include <string>
#include <vector>

#include "vortexlab/errors.hpp"

namespace vortexlab::radial {

// Uniform radial grid r_0 = 0 < r_1 < ... < r_M = r_max used for all
// per-mode profiles and boundary-value solves.
struct RadialGrid {
    std::vector<double> nodes;
    double dr = 0.0;
    std::string spacing = "uniform";

    static std::shared_ptr<const RadialGrid> uniform(double r_max, std::size_t cells);

    std::size_t size() const { return nodes.size(); }
    double r_max() const { return nodes.back(); }
};

// Nearly all profiles here decay like exp(-r^2/4); the few that do not are
// tagged so truncation at r_max can be audited.
enum class DecayClass { gaussian, algebraic, bounded };

// Scalar function of radius sampled on a RadialGrid.
// origin_order p records value = O(r^p) as r -> 0.
struct RadialProfile {
    std::shared_ptr<const RadialGrid> grid;
    std::vector<double> values;
    int origin_order = 0;
    DecayClass decay = DecayClass::gaussian;
    int algebraic_k = 0;

    RadialProfile() = default;
    RadialProfile(std::shared_ptr<const RadialGrid> g, int order = 0,
                  DecayClass d = DecayClass::gaussian);

    double operator()(std::size_t i) const { return values[i]; }
    std::size_t size() const { return values.size(); }
    double max_abs() const;
    // Cubic (Catmull-Rom) interpolation; returns 0 beyond r_max.
    double interp(double r) const;
};

// Angular mode n with radial amplitudes:
//   Omega(r, theta) = cos_part(r) cos(n theta) + sin_part(r) sin(n theta).
struct ModeFunction {
    int n = 0;
    RadialProfile cos_part;
    RadialProfile sin_part;

    ModeFunction() = default;
    ModeFunction(int n_, RadialProfile c, RadialProfile s);

    double eval(double r, double theta) const;
};

// Velocity field induced by a single ModeFunction, decomposed as
//   u_r     = ur_cos cos(n theta) + ur_sin sin(n theta)
//   u_theta = ut_cos cos(n theta) + ut_sin sin(n theta).
struct ModeVelocity {
    int n = 0;
    RadialProfile ur_cos, ur_sin, ut_cos, ut_sin;
};

// --- closed-form kernels of the Gaussian vortex ------------------------

// Angular velocity profile of the Gaussian vortex: (1 - e^{-r^2/4}) / (2 pi r^2).
double v_star(double r);
// Radial derivative weight of the Gaussian: e^{-r^2/4} / (8 pi).
double gauss_g(double r);
// Ratio g / v_star = (r^2/4) / (e^{r^2/4} - 1).
double h_ratio(double r);
// Gaussian vorticity profile e^{-r^2/4} / (4 pi).
double omega0(double r);

struct KernelValues {
    double v_star;
    double g;
    double h;
};
KernelValues kernel_functions(double r);

// fill a profile with f(r) on the grid
RadialProfile sample(const std::shared_ptr<const RadialGrid>& grid, double (*f)(double),
                     int origin_order, DecayClass d = DecayClass::gaussian);

// --- quadrature ---------------------------------------------------------

// Composite Simpson of values[i] * r_i^k on the grid (assumes even cell count).
double simpson_moment(const RadialProfile& p, int k);
double simpson_moment(const std::shared_ptr<const RadialGrid>& grid,
                      const std::vector<double>& values, int k);
// L2(r dr) norm and inner product.
double l2_norm(const RadialProfile& p);
double l2_dot(const RadialProfile& a, const RadialProfile& b);

// Norm in the Gaussian-weighted space: int e^{r^2/4} |Omega|^2 dxi over the
// plane, using the angular orthogonality of the mode. Gaussian-decaying
// amplitudes only.
double y_norm(const ModeFunction& m);

// --- boundary-value machinery -------------------------------------------

// Stream-function solve for one angular mode:
//   -phi'' - phi'/r + (n^2/r^2) phi = w,   phi(0) = 0,  phi'(R) = -(n/R) phi(R).
// The Robin condition encodes the O(r^{-n}) far-field decay.
RadialProfile solve_stream(int n, const RadialProfile& rhs);

// Inhomogeneous solve with the shifted potential, used to invert the
// advection operator:
//   -phi'' - phi'/r + (n^2/r^2 - h(r)) phi = rhs,  same boundary conditions.
// For n = 1 the operator has the neutral direction r v_star(r); the
// returned solution is the one orthogonal to it in L^2(r dr), and the
// forcing must satisfy the moment condition (see moment_defect).
RadialProfile solve_phi(int n, const RadialProfile& rhs);

// Relative defect of the n = 1 solvability integral int b r^2 dr for
// b = n v_star rhs. The inversion requires |defect| <= tol.
double moment_defect(int n, const RadialProfile& rhs);

constexpr double solvability_tol = 1e-8;

// --- advection operator on one angular mode ------------------------------

// Lambda Omega = U0 . grad Omega + BS[Omega] . grad Omega0 for Omega in the
// n-th angular subspace, n >= 1. Radially symmetric input is annihilated.
ModeFunction lambda_apply(const ModeFunction& mode);

struct LambdaInverseOptions {
    // When set, a small moment defect in an n = 1 forcing (at most
    // max_projected_defect, relative) is projected out instead of raising
    // SolvabilityViolation. Used when the defect is pure discretization
    // error of an analytically solvable forcing.
    bool project_forcing = false;
    double max_projected_defect = 1e-4;
};

// Solve Lambda Omega = forcing on the n-th angular subspace. For n = 1 the
// result is returned in the zero-first-moment gauge (the complement of the
// translation kernel), so that int xi_j Omega dxi = 0.
ModeFunction lambda_inverse(int n, const ModeFunction& forcing,
                            const LambdaInverseOptions& opts = {});

// Quadrupole weight w2: unique profile with
//   Lambda [w2 (a sin 2theta - b cos 2theta)] = (1/2) Omega0 r^2 (a cos 2theta + b sin 2theta),
// realized as w2 = h (phi2 + r^2/2) with phi2 the shifted-potential solve.
RadialProfile w2_profile(const std::shared_ptr<const RadialGrid>& grid);

// Companion stream amplitude phi2 (needed for the induced velocity).
RadialProfile w2_stream(const std::shared_ptr<const RadialGrid>& grid);

// Discretization-error indicator: residual of the w2 boundary-value
// problem measured with fourth-order stencils, max-norm over the interior.
double w2_bvp_residual(const std::shared_ptr<const RadialGrid>& grid);

// Velocity induced by a mode through its stream function.
ModeVelocity velocity_from_mode(const ModeFunction& mode);

// --- derivatives ----------------------------------------------------------

// Fourth-order finite-difference radial derivative (diagnostic use).
std::vector<double> ddr(const std::shared_ptr<const RadialGrid>& grid,
                        const std::vector<double>& values);

// Export as two-column CSV "r,value" with header line "# n=<n> part=<cos|sin>".
void write_profile_csv(const std::string& path, const RadialProfile& p, int n,
                       const std::string& part);

} // namespace vortexlab::radial
