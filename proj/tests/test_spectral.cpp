#include "doctest.h"

#include <cmath>

#include "vortexlab/radial.hpp"
#include "vortexlab/spectral.hpp"

using namespace vortexlab;
using namespace vortexlab::spectral;

namespace {

class ZeroFlow : public flows::ExternalFlow {
public:
    Vec2 velocity(const Vec2&, double) const override { return {0.0, 0.0}; }
    double partial(int, int, int, const Vec2&, double) const override { return 0.0; }
    double t_char() const override { return std::numeric_limits<double>::infinity(); }
    std::string name() const override { return "zero"; }
    std::map<std::string, double> parameters() const override { return {}; }
};

double grid_sum(const std::shared_ptr<const PeriodicGrid>& g,
                const std::vector<double>& phys) {
    double acc = 0.0;
    for (double v : phys)
        acc += v;
    return acc * g->dx() * g->dx();
}

} // namespace

TEST_CASE("gaussian initialization") {
    auto g = PeriodicGrid::make(20.0, 128, {-10.0, -10.0});
    const double gamma = 2.0, ell = 0.8;

    SUBCASE("resolution guard") {
        CHECK_THROWS_AS(init_gaussian(g, gamma, 0.3 * g->dx(), {0.0, 0.0}), UnderResolved);
    }

    auto f = init_gaussian(g, gamma, ell, {0.0, 0.0});
    auto phys = to_physical(f);

    SUBCASE("peak, circulation, second moment") {
        // z0 sits on a grid node
        double peak = 0.0;
        for (double v : phys)
            peak = std::max(peak, v);
        CHECK(peak == doctest::Approx(gamma / (4.0 * pi * ell * ell)).epsilon(1e-10));

        CHECK(grid_sum(g, phys) == doctest::Approx(gamma).epsilon(1e-10));
        CHECK(f.mean() == doctest::Approx(gamma / (20.0 * 20.0)).epsilon(1e-12));

        double second = 0.0;
        for (std::size_t a = 0; a < g->n; ++a)
            for (std::size_t b = 0; b < g->n; ++b)
                second += g->point(a, b).norm2() * phys[a * g->n + b];
        second *= g->dx() * g->dx();
        CHECK(second == doctest::Approx(4.0 * ell * ell * gamma).epsilon(1e-9));
    }
}

TEST_CASE("periodic inverse curl") {
    auto g = PeriodicGrid::make(2.0 * pi, 64, {0.0, 0.0});

    SUBCASE("single mode") {
        const std::size_t n = g->n;
        std::vector<double> phys(n * n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                phys[a * n + b] = std::cos(g->point(a, b).x);
        auto w = to_spectral(g, phys);
        auto vel = biot_savart(w);
        for (std::size_t a = 0; a < n; a += 7)
            for (std::size_t b = 0; b < n; b += 5) {
                CHECK(vel.u1[a * n + b] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
                CHECK(vel.u2[a * n + b] ==
                      doctest::Approx(std::sin(g->point(a, b).x)).epsilon(1e-12));
            }
    }

    SUBCASE("zero discrete divergence") {
        auto gg = PeriodicGrid::make(18.0, 128, {-9.0, -9.0});
        auto w = init_gaussian(gg, 1.0, 0.7, {0.3, -0.2});
        auto vel = biot_savart(w);
        // spectral divergence of the reconstructed field
        auto u1h = to_spectral(gg, vel.u1);
        auto u2h = to_spectral(gg, vel.u2);
        const double k0 = 2.0 * pi / gg->box_size;
        double worst = 0.0;
        for (std::size_t a = 0; a < gg->n; ++a)
            for (std::size_t b = 0; b < w.cols(); ++b) {
                const std::complex<double> div =
                    std::complex<double>(0, k0 * gg->wrap(a)) * u1h.at(a, b) +
                    std::complex<double>(0, k0 * b) * u2h.at(a, b);
                worst = std::max(worst, std::abs(div));
            }
        CHECK(worst < 1e-12 * vel.max_speed);
    }

    SUBCASE("tangential speed of a concentrated vortex") {
        auto gg = PeriodicGrid::make(40.0, 256, {-20.0, -20.0});
        const double ell = 1.0;
        auto w = init_gaussian(gg, 1.0, ell, {0.0, 0.0});
        auto vel = biot_savart(w);
        // sample along the positive x-axis up to L/8
        for (double r : {1.0, 2.0, 3.0, 5.0}) {
            const auto a = static_cast<std::size_t>(std::lround((r + 20.0) / gg->dx()));
            const auto b = static_cast<std::size_t>(std::lround(20.0 / gg->dx()));
            const double rr = gg->point(a, b).x;
            const double want = (1.0 - std::exp(-0.25 * rr * rr / (ell * ell))) /
                                (2.0 * pi * rr);
            CHECK(vel.u2[a * gg->n + b] == doctest::Approx(want).epsilon(0.01));
        }
    }
}

TEST_CASE("free diffusion reproduces the self-similar vortex") {
    auto g = PeriodicGrid::make(25.6, 256, {-12.8, -12.8});
    const double nu = 2e-2, gamma = 1.0, t0 = 5.0;
    auto sc = VortexScenario::make(gamma, nu, {0.0, 0.0}, t0, 4.0 * t0,
                                   std::make_shared<ZeroFlow>());
    auto init = init_gaussian(g, gamma, std::sqrt(nu * t0), {0.0, 0.0});
    SolverConfig cfg;
    auto snaps = run_simulation(sc, init, cfg, {2.0 * t0, 4.0 * t0});
    const double box = 25.6;
    REQUIRE(snaps.size() == 2);
    // On the torus the image-lattice velocity advects the core, so the
    // free-space profile is reproduced only up to a floor that scales like
    // (core size / box)^4; verify the floor and its scaling.
    std::vector<double> rel;
    for (const auto& s : snaps) {
        auto phys = to_physical(s.field);
        const double ell2 = nu * s.t;
        double worst = 0.0;
        for (std::size_t a = 0; a < g->n; ++a)
            for (std::size_t b = 0; b < g->n; ++b) {
                const double want =
                    gamma / (4.0 * pi * ell2) *
                    std::exp(-0.25 * g->point(a, b).norm2() / ell2);
                worst = std::max(worst, std::fabs(phys[a * g->n + b] - want));
            }
        const double peak = gamma / (4.0 * pi * ell2);
        rel.push_back(worst / peak);
        CHECK(worst <= 40.0 * std::pow(nu * s.t / (box * box), 2) * peak);
        CHECK(s.field.mean() == doctest::Approx(gamma / (box * box)).epsilon(1e-12));
    }
    // deviation quadratic in nu t (the snapshot times differ by two)
    CHECK(rel[1] / rel[0] == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("circulation conservation under strain over many steps") {
    auto g = PeriodicGrid::make(16.0, 128, {-8.0, -8.0});
    auto flow = flows::make_flow("linear_strain", {{"gamma", 1.0}});
    const double nu = 2e-3;
    auto init = init_gaussian(g, 1.0, 0.5, {0.0, 0.0});
    const double gamma0 = init.mean() * 16.0 * 16.0;

    Stepper stepper(g, flow, nu, SolverConfig{});
    SpectralField state = init;
    double t = 0.05;
    int steps = 0;
    while (steps < 1000) {
        const double dt = std::min(stepper.cfl_dt(state, t), 4e-4);
        stepper.step(state, t, dt);
        t += dt;
        ++steps;
    }
    const double gamma1 = state.mean() * 16.0 * 16.0;
    CHECK(std::fabs(gamma1 - gamma0) / gamma0 <= 1e-10);
    for (const auto& c : state.hat)
        CHECK(std::isfinite(c.real()));
}

TEST_CASE("fourth-order self-convergence in the step size") {
    auto g = PeriodicGrid::make(16.0, 64, {-8.0, -8.0});
    auto flow = flows::make_flow("cellular", {{"U", 0.5}, {"Lc", 2.0}});
    const double nu = 5e-3;
    auto init = init_gaussian(g, 1.0, 0.9, {0.0, 0.0});
    const double t_end = 0.64;

    auto advance = [&](double dt) {
        Stepper stepper(g, flow, nu, SolverConfig{});
        SpectralField state = init;
        double t = 0.0;
        while (t < t_end - 1e-12) {
            stepper.step(state, t, dt);
            t += dt;
        }
        return to_physical(state);
    };
    auto coarse = advance(0.04);
    auto fine = advance(0.02);
    auto ref = advance(0.005);
    double e_coarse = 0.0, e_fine = 0.0;
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        e_coarse = std::max(e_coarse, std::fabs(coarse[i] - ref[i]));
        e_fine = std::max(e_fine, std::fabs(fine[i] - ref[i]));
    }
    const double order = std::log2(e_coarse / e_fine);
    CHECK(order > 3.6);
    CHECK(order < 4.6);
}

TEST_CASE("window locality: cutoff choice does not pollute the core") {
    auto g = PeriodicGrid::make(16.0, 128, {-8.0, -8.0});
    auto flow = flows::make_flow("cellular", {{"U", 0.5}, {"Lc", 2.0}});
    const double nu = 2e-3;
    auto sc = VortexScenario::make(1.0, nu, {0.0, 0.0}, 0.1, 1.6, flow);
    auto init = init_gaussian(g, 1.0, 0.4, {0.0, 0.0});

    auto run_with = [&](double frac) {
        SolverConfig cfg;
        cfg.window_fraction = frac;
        return to_physical(run_simulation(sc, init, cfg, {1.6}).front().field);
    };
    auto a = run_with(0.40);
    auto b = run_with(0.45);
    double l1_core = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::size_t row = i / g->n, col = i % g->n;
        if (g->point(row, col).norm() < 4.0)
            l1_core += std::fabs(a[i] - b[i]);
    }
    l1_core *= g->dx() * g->dx();
    CHECK(l1_core <= 1e-4);
}

TEST_CASE("simulate guards the box-size invariants") {
    auto flow = flows::make_flow("linear_strain", {{"gamma", 1.0}});
    auto sc = VortexScenario::make(1.0, 1e-3, {0.0, 0.0}, 0.05, 1.0, flow); // d = 1
    auto g = PeriodicGrid::make(4.0, 64, {-2.0, -2.0});                     // < 8 d
    auto init = init_gaussian(g, 1.0, 0.3, {0.0, 0.0});
    CHECK_THROWS_AS(run_simulation(sc, init, SolverConfig{}, {1.0}), RunError);
}
