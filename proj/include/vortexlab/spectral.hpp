#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "vortexlab/errors.hpp"
#include "vortexlab/flows.hpp"
#include "vortexlab/geometry.hpp"
#include "vortexlab/scenario.hpp"

namespace vortexlab::spectral {

// Doubly periodic box [x0, x0+L) x [y0, y0+L), N x N points, N a power of
// two. Physical storage is row-major with the first index along x1.
struct PeriodicGrid {
    double box_size = 0.0; // L
    std::size_t n = 0;     // N
    Vec2 origin{};         // lower-left corner

    static std::shared_ptr<const PeriodicGrid> make(double box_size, std::size_t n,
                                                    Vec2 origin);

    double dx() const { return box_size / static_cast<double>(n); }
    Vec2 center() const { return origin + Vec2{0.5 * box_size, 0.5 * box_size}; }
    Vec2 point(std::size_t a, std::size_t b) const {
        return origin + Vec2{dx() * static_cast<double>(a), dx() * static_cast<double>(b)};
    }
    // signed integer frequency of index a
    int wrap(std::size_t a) const {
        const auto ia = static_cast<int>(a);
        return ia <= static_cast<int>(n) / 2 ? ia : ia - static_cast<int>(n);
    }
};

// Scalar field stored as normalized discrete Fourier coefficients in the
// half-complex layout (N x (N/2+1)); real-valued in physical space by
// construction. The mean coefficient carries circulation / L^2 and is
// pinned by the stepper.
struct SpectralField {
    std::shared_ptr<const PeriodicGrid> grid;
    std::vector<std::complex<double>> hat;

    std::size_t rows() const { return grid->n; }
    std::size_t cols() const { return grid->n / 2 + 1; }
    std::complex<double>& at(std::size_t a, std::size_t b) { return hat[a * cols() + b]; }
    const std::complex<double>& at(std::size_t a, std::size_t b) const {
        return hat[a * cols() + b];
    }
    double mean() const { return hat[0].real(); }
};

struct SolverConfig {
    double cfl = 0.4;              // advective CFL number, in (0,1)
    double window_fraction = 0.4;  // radius of the unmodified background flow / L
    double dt_max = 1e9;           // optional hard cap on the step
};

// physical <-> spectral transforms (plans cached per grid size)
std::vector<double> to_physical(const SpectralField& f);
SpectralField to_spectral(const std::shared_ptr<const PeriodicGrid>& grid,
                          const std::vector<double>& phys);

// Gaussian vortex of circulation, core ell0 at z0, sampled with periodic
// images and pinned to the exact discrete circulation.
SpectralField init_gaussian(const std::shared_ptr<const PeriodicGrid>& grid,
                            double circulation, double ell0, Vec2 z0);

// Arbitrary initial vorticity from a pointwise evaluator (periodized within
// one image; intended for compactly concentrated fields), circulation pinned.
SpectralField init_from(const std::shared_ptr<const PeriodicGrid>& grid,
                        double circulation,
                        const std::function<double(Vec2)>& omega);

struct VelocityField {
    std::vector<double> u1, u2;
    double max_speed = 0.0;
};

// Periodic inverse-curl on the zero-mean part; the mean mode carries no
// velocity.
VelocityField biot_savart(const SpectralField& omega_hat);

// One explicit fourth-order substep scheme for the advection with the
// diffusion integrated exactly per substage.
class Stepper {
public:
    Stepper(std::shared_ptr<const PeriodicGrid> grid,
            std::shared_ptr<const flows::ExternalFlow> flow, double viscosity,
            SolverConfig config);

    // advance by dt (must satisfy the CFL bound); t is the current time
    void step(SpectralField& state, double t, double dt) const;

    // largest stable step at the current state
    double cfl_dt(const SpectralField& state, double t) const;

    const std::vector<double>& windowed_f1() const { return fw1_; }
    const std::vector<double>& windowed_f2() const { return fw2_; }

private:
    std::shared_ptr<const PeriodicGrid> grid_;
    std::shared_ptr<const flows::ExternalFlow> flow_;
    double nu_;
    SolverConfig config_;
    std::vector<double> fw1_, fw2_; // windowed background velocity (steady catalog)
    std::vector<unsigned char> dealias_;
    std::vector<double> k1_, k2_, k2abs_;

    void nonlinear(const SpectralField& w, std::vector<std::complex<double>>& out,
                   double* max_speed) const;
};

struct Snapshot {
    double t = 0.0;
    SpectralField field;
};

// Time-step from scenario.t_begin to scenario.t_end, invoking the consumer
// at every requested output time (monotone increasing times).
void simulate(const VortexScenario& scenario, const SpectralField& initial,
              const SolverConfig& config, const std::vector<double>& output_times,
              const std::function<void(const Snapshot&)>& consumer);

// Convenience wrapper collecting snapshots in memory.
std::vector<Snapshot> run_simulation(const VortexScenario& scenario,
                                     const SpectralField& initial,
                                     const SolverConfig& config,
                                     const std::vector<double>& output_times);

} // namespace vortexlab::spectral
