#include "vortexlab/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>

namespace vortexlab::spectral {

namespace {

// FFTW plan cache. Plan creation is not thread-safe; execution on distinct
// buffers is. Plans use FFTW_ESTIMATE so results are bit-reproducible
// across runs.
struct Plans {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

std::mutex plan_mutex;

const Plans& plans_for(std::size_t n) {
    static std::map<std::size_t, Plans> cache;
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto it = cache.find(n);
    if (it != cache.end())
        return it->second;
    const auto ni = static_cast<int>(n);
    std::vector<double> phys(n * n);
    std::vector<std::complex<double>> spec(n * (n / 2 + 1));
    Plans p;
    p.fwd = fftw_plan_dft_r2c_2d(ni, ni, phys.data(),
                                 reinterpret_cast<fftw_complex*>(spec.data()),
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.bwd = fftw_plan_dft_c2r_2d(ni, ni, reinterpret_cast<fftw_complex*>(spec.data()),
                                 phys.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
    return cache.emplace(n, p).first->second;
}

void execute_fwd(std::size_t n, std::vector<double>& phys,
                 std::vector<std::complex<double>>& spec) {
    const auto& p = plans_for(n);
    fftw_execute_dft_r2c(p.fwd, phys.data(), reinterpret_cast<fftw_complex*>(spec.data()));
    const double norm = 1.0 / static_cast<double>(n * n);
    for (auto& c : spec)
        c *= norm;
}

void execute_bwd(std::size_t n, std::vector<std::complex<double>> spec,
                 std::vector<double>& phys) {
    // c2r destroys its input; operate on the local copy
    const auto& p = plans_for(n);
    phys.resize(n * n);
    fftw_execute_dft_c2r(p.bwd, reinterpret_cast<fftw_complex*>(spec.data()), phys.data());
}

} // namespace

std::shared_ptr<const PeriodicGrid> PeriodicGrid::make(double box_size, std::size_t n,
                                                       Vec2 origin) {
    if (box_size <= 0.0)
        throw std::invalid_argument("PeriodicGrid: box size must be positive");
    if (n < 32 || (n & (n - 1)) != 0)
        throw std::invalid_argument("PeriodicGrid: N must be a power of two, >= 32");
    auto g = std::make_shared<PeriodicGrid>();
    g->box_size = box_size;
    g->n = n;
    g->origin = origin;
    return g;
}

std::vector<double> to_physical(const SpectralField& f) {
    std::vector<double> phys;
    execute_bwd(f.grid->n, f.hat, phys);
    return phys;
}

SpectralField to_spectral(const std::shared_ptr<const PeriodicGrid>& grid,
                          const std::vector<double>& phys) {
    SpectralField f;
    f.grid = grid;
    f.hat.resize(grid->n * (grid->n / 2 + 1));
    std::vector<double> tmp = phys;
    execute_fwd(grid->n, tmp, f.hat);
    return f;
}

SpectralField init_from(const std::shared_ptr<const PeriodicGrid>& grid, double circulation,
                        const std::function<double(Vec2)>& omega) {
    const std::size_t n = grid->n;
    std::vector<double> phys(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            phys[a * n + b] = omega(grid->point(a, b));
    SpectralField f = to_spectral(grid, phys);
    f.hat[0] = circulation / (grid->box_size * grid->box_size);
    return f;
}

SpectralField init_gaussian(const std::shared_ptr<const PeriodicGrid>& grid,
                            double circulation, double ell0, Vec2 z0) {
    if (ell0 < 3.0 * grid->dx())
        throw UnderResolved("init_gaussian: core below three grid spacings");
    const double L = grid->box_size;
    auto omega = [&](Vec2 x) {
        double acc = 0.0;
        for (int ix = -1; ix <= 1; ++ix)
            for (int iy = -1; iy <= 1; ++iy) {
                const Vec2 d = x - z0 + Vec2{L * ix, L * iy};
                acc += std::exp(-0.25 * d.norm2() / (ell0 * ell0));
            }
        return circulation / (4.0 * pi * ell0 * ell0) * acc;
    };
    return init_from(grid, circulation, omega);
}

VelocityField biot_savart(const SpectralField& w) {
    const auto& g = *w.grid;
    const std::size_t n = g.n, cols = n / 2 + 1;
    const double k0 = 2.0 * pi / g.box_size;
    std::vector<std::complex<double>> u1(n * cols), u2(n * cols);
    for (std::size_t a = 0; a < n; ++a) {
        const double kx = k0 * g.wrap(a);
        for (std::size_t b = 0; b < cols; ++b) {
            const double ky = k0 * static_cast<double>(b);
            const double kk = kx * kx + ky * ky;
            const std::complex<double> wh = w.hat[a * cols + b];
            if (kk == 0.0) {
                u1[a * cols + b] = 0.0;
                u2[a * cols + b] = 0.0;
            } else {
                const std::complex<double> i_over(0.0, 1.0 / kk);
                u1[a * cols + b] = i_over * ky * wh;
                u2[a * cols + b] = -i_over * kx * wh;
            }
        }
    }
    VelocityField out;
    execute_bwd(n, std::move(u1), out.u1);
    execute_bwd(n, std::move(u2), out.u2);
    for (std::size_t i = 0; i < out.u1.size(); ++i)
        out.max_speed = std::max(out.max_speed, std::hypot(out.u1[i], out.u2[i]));
    return out;
}

// ---------------------------------------------------------------------------

namespace {

// quintic smoothstep from 1 to 0 over [r0, r1]
double window_profile(double s, double r0, double r1) {
    if (s <= r0)
        return 1.0;
    if (s >= r1)
        return 0.0;
    const double q = (s - r0) / (r1 - r0);
    return 1.0 - q * q * q * (10.0 + q * (-15.0 + 6.0 * q));
}

} // namespace

Stepper::Stepper(std::shared_ptr<const PeriodicGrid> grid,
                 std::shared_ptr<const flows::ExternalFlow> flow, double viscosity,
                 SolverConfig config)
    : grid_(std::move(grid)), flow_(std::move(flow)), nu_(viscosity), config_(config) {
    if (config_.cfl <= 0.0 || config_.cfl >= 1.0)
        throw std::invalid_argument("Stepper: CFL number must lie in (0,1)");
    const std::size_t n = grid_->n, cols = n / 2 + 1;
    const double L = grid_->box_size;
    const double k0 = 2.0 * pi / L;

    k1_.resize(n * cols);
    k2_.resize(n * cols);
    k2abs_.resize(n * cols);
    dealias_.resize(n * cols);
    const int cut = static_cast<int>(n) / 3;
    for (std::size_t a = 0; a < n; ++a) {
        const int fa = grid_->wrap(a);
        for (std::size_t b = 0; b < cols; ++b) {
            const auto fb = static_cast<int>(b);
            k1_[a * cols + b] = k0 * fa;
            k2_[a * cols + b] = k0 * fb;
            k2abs_[a * cols + b] = k0 * k0 * (fa * fa + static_cast<double>(fb) * fb);
            dealias_[a * cols + b] = (std::abs(fa) <= cut && fb <= cut) ? 1 : 0;
        }
    }

    // windowed background velocity on the grid (catalog flows are steady)
    fw1_.resize(n * n);
    fw2_.resize(n * n);
    const Vec2 c = grid_->center();
    const double r0 = config_.window_fraction * L;
    const double r1 = std::min(0.48 * L, r0 + 0.08 * L);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            const Vec2 x = grid_->point(a, b);
            const double chi = window_profile((x - c).norm(), r0, r1);
            const Vec2 f = std::isfinite(flow_->t_char()) ? flow_->velocity(x, 0.0)
                                                          : Vec2{0.0, 0.0};
            fw1_[a * n + b] = chi * f.x;
            fw2_[a * n + b] = chi * f.y;
        }
}

void Stepper::nonlinear(const SpectralField& w, std::vector<std::complex<double>>& out,
                        double* max_speed) const {
    const std::size_t n = grid_->n, cols = n / 2 + 1, m = n * cols;
    std::vector<std::complex<double>> wh(m), d1(m), d2(m), u1h(m), u2h(m);
    for (std::size_t i = 0; i < m; ++i)
        wh[i] = dealias_[i] ? w.hat[i] : 0.0;
    const std::complex<double> iu(0.0, 1.0);
    for (std::size_t i = 0; i < m; ++i) {
        d1[i] = iu * k1_[i] * wh[i];
        d2[i] = iu * k2_[i] * wh[i];
        if (k2abs_[i] > 0.0) {
            u1h[i] = iu * k2_[i] * wh[i] / k2abs_[i];
            u2h[i] = -iu * k1_[i] * wh[i] / k2abs_[i];
        } else {
            u1h[i] = 0.0;
            u2h[i] = 0.0;
        }
    }
    std::vector<double> g1, g2, u1, u2;
    execute_bwd(n, std::move(d1), g1);
    execute_bwd(n, std::move(d2), g2);
    execute_bwd(n, std::move(u1h), u1);
    execute_bwd(n, std::move(u2h), u2);

    std::vector<double> prod(n * n);
    double vmax2 = 0.0;
    for (std::size_t i = 0; i < n * n; ++i) {
        const double v1 = u1[i] + fw1_[i];
        const double v2 = u2[i] + fw2_[i];
        vmax2 = std::max(vmax2, v1 * v1 + v2 * v2);
        prod[i] = -(v1 * g1[i] + v2 * g2[i]);
    }
    if (max_speed)
        *max_speed = std::sqrt(vmax2);
    out.resize(m);
    execute_fwd(n, prod, out);
    for (std::size_t i = 0; i < m; ++i)
        if (!dealias_[i])
            out[i] = 0.0;
}

double Stepper::cfl_dt(const SpectralField& state, double t) const {
    (void)t;
    auto vel = biot_savart(state);
    double vmax2 = 1e-60;
    for (std::size_t i = 0; i < vel.u1.size(); ++i) {
        const double v1 = vel.u1[i] + fw1_[i], v2 = vel.u2[i] + fw2_[i];
        vmax2 = std::max(vmax2, v1 * v1 + v2 * v2);
    }
    return std::min(config_.dt_max, config_.cfl * grid_->dx() / std::sqrt(vmax2));
}

void Stepper::step(SpectralField& state, double t, double dt) const {
    const std::size_t n = grid_->n, cols = n / 2 + 1, m = n * cols;
    std::vector<double> e1(m), e2(m);
    for (std::size_t i = 0; i < m; ++i) {
        e1[i] = std::exp(-0.5 * nu_ * k2abs_[i] * dt);
        e2[i] = e1[i] * e1[i];
    }
    const double mean0 = state.mean();

    std::vector<std::complex<double>> ka, kb, kc, kd;
    double vmax = 0.0;
    nonlinear(state, ka, &vmax);
    if (dt > config_.cfl * grid_->dx() / std::max(vmax, 1e-30) * 1.001)
        throw CFLViolation("step: dt exceeds the advective CFL bound");

    SpectralField tmp = state;
    for (std::size_t i = 0; i < m; ++i)
        tmp.hat[i] = e1[i] * (state.hat[i] + 0.5 * dt * ka[i]);
    nonlinear(tmp, kb, nullptr);

    for (std::size_t i = 0; i < m; ++i)
        tmp.hat[i] = e1[i] * state.hat[i] + 0.5 * dt * kb[i];
    nonlinear(tmp, kc, nullptr);

    for (std::size_t i = 0; i < m; ++i)
        tmp.hat[i] = e2[i] * state.hat[i] + dt * e1[i] * kc[i];
    nonlinear(tmp, kd, nullptr);

    for (std::size_t i = 0; i < m; ++i)
        state.hat[i] = e2[i] * state.hat[i] +
                       dt / 6.0 *
                           (e2[i] * ka[i] + 2.0 * e1[i] * (kb[i] + kc[i]) + kd[i]);
    // circulation is pinned: the only drift the mean mode could see is the
    // window's spurious divergence acting on vorticity-free fluid
    state.hat[0] = mean0;
}

void simulate(const VortexScenario& scenario, const SpectralField& initial,
              const SolverConfig& config, const std::vector<double>& output_times,
              const std::function<void(const Snapshot&)>& consumer) {
    const auto& grid = initial.grid;
    if (std::isfinite(scenario.d_eff) && grid->box_size < 8.0 * scenario.d_eff)
        throw RunError("simulate: box below eight effective vortex sizes");
    if (grid->box_size <
        40.0 * std::sqrt(scenario.viscosity * scenario.t_end) * (1.0 - 1e-12))
        throw RunError("simulate: box below forty diffusion lengths");

    Stepper stepper(grid, scenario.flow, scenario.viscosity, config);
    SpectralField state = initial;
    double t = scenario.t_begin;

    std::size_t next = 0;
    auto emit = [&]() {
        while (next < output_times.size() && std::fabs(output_times[next] - t) < 1e-12) {
            consumer(Snapshot{t, state});
            ++next;
        }
    };
    emit();
    while (next < output_times.size() || t < scenario.t_end - 1e-12) {
        const double target =
            next < output_times.size() ? output_times[next] : scenario.t_end;
        double dt = stepper.cfl_dt(state, t);
        if (t + dt >= target - 1e-12)
            dt = target - t;
        stepper.step(state, t, dt);
        t = t + dt >= target - 1e-12 ? target : t + dt;
        emit();
        if (t >= scenario.t_end - 1e-12 && next >= output_times.size())
            break;
    }
}

std::vector<Snapshot> run_simulation(const VortexScenario& scenario,
                                     const SpectralField& initial,
                                     const SolverConfig& config,
                                     const std::vector<double>& output_times) {
    std::vector<Snapshot> out;
    simulate(scenario, initial, config, output_times,
             [&](const Snapshot& s) { out.push_back(s); });
    return out;
}

} // namespace vortexlab::spectral
