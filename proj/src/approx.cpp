#include "vortexlab/approx.hpp"

#include <array>
#include <cmath>

namespace vortexlab::approx {

using radial::DecayClass;

double ModeSum::eval(double r, double theta) const {
    double acc = 0.0;
    for (const auto& p : parts)
        acc += p.eval(r, theta);
    return acc;
}

const ModeFunction* ModeSum::mode(int n) const {
    for (const auto& p : parts)
        if (p.n == n)
            return &p;
    return nullptr;
}

// ---------------------------------------------------------------------------
// center trajectories

namespace {

Vec2 center_rhs(const VortexScenario& sc, CenterVariant variant, const Vec2& z, double t) {
    Vec2 v = sc.flow->velocity(z, t);
    if (variant == CenterVariant::modified)
        v += (sc.viscosity * t) * sc.flow->laplacian(z, t);
    return v;
}

Vec2 rk4_step(const VortexScenario& sc, CenterVariant variant, const Vec2& z, double t,
              double h) {
    const Vec2 k1 = center_rhs(sc, variant, z, t);
    const Vec2 k2 = center_rhs(sc, variant, z + 0.5 * h * k1, t + 0.5 * h);
    const Vec2 k3 = center_rhs(sc, variant, z + 0.5 * h * k2, t + 0.5 * h);
    const Vec2 k4 = center_rhs(sc, variant, z + h * k3, t + h);
    return z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

} // namespace

CenterTrajectory integrate_center(const VortexScenario& sc, CenterVariant variant) {
    CenterTrajectory traj;
    traj.variant = variant;
    const double span = sc.t_end; // integrate from t = 0 (or t_begin if positive)
    const double t0 = sc.t_begin;
    const double tchar = std::isfinite(sc.t0_char) ? sc.t0_char : span - t0;
    const double h_min = 1e-12 * tchar;
    const double tol = 1e-11 * sc.d_eff;

    double t = t0;
    Vec2 z = sc.z0;
    double h = std::min(tchar, span - t0) / 64.0;
    traj.times.push_back(t);
    traj.z.push_back(z);
    traj.zdot.push_back(center_rhs(sc, variant, z, t));

    while (t < sc.t_end - 1e-15 * span) {
        if (traj.times.size() > 10'000'000)
            throw RunError("integrate_center: step budget exhausted");
        h = std::min(h, sc.t_end - t);
        for (;;) {
            const Vec2 full = rk4_step(sc, variant, z, t, h);
            const Vec2 half = rk4_step(sc, variant,
                                       rk4_step(sc, variant, z, t, 0.5 * h), t + 0.5 * h,
                                       0.5 * h);
            const double err = (full - half).norm() / 15.0;
            if (err <= tol) {
                z = half + (half - full) / 15.0; // fifth-order combination
                t += h;
                if (err < tol / 64.0)
                    h *= 2.0;
                break;
            }
            h *= 0.5;
            if (h < h_min)
                throw StepSizeUnderflow("integrate_center: step below 1e-12 of the "
                                        "characteristic time");
        }
        traj.times.push_back(t);
        traj.z.push_back(z);
        traj.zdot.push_back(center_rhs(sc, variant, z, t));
    }
    return traj;
}

namespace {

std::size_t locate(const std::vector<double>& ts, double t) {
    auto it = std::upper_bound(ts.begin(), ts.end(), t);
    std::size_t i = it == ts.begin() ? 0 : static_cast<std::size_t>(it - ts.begin()) - 1;
    return std::min(i, ts.size() - 2);
}

} // namespace

Vec2 CenterTrajectory::at(double t) const {
    if (times.size() == 1 || t <= times.front())
        return z.front();
    if (t >= times.back())
        return z.back();
    const std::size_t i = locate(times, t);
    const double dt = times[i + 1] - times[i];
    const double u = (t - times[i]) / dt;
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
    const double h10 = u * (1 - u) * (1 - u);
    const double h01 = u * u * (3 - 2 * u);
    const double h11 = u * u * (u - 1);
    return h00 * z[i] + (h10 * dt) * zdot[i] + h01 * z[i + 1] + (h11 * dt) * zdot[i + 1];
}

Vec2 CenterTrajectory::deriv(double t) const {
    if (times.size() == 1 || t <= times.front())
        return zdot.front();
    if (t >= times.back())
        return zdot.back();
    const std::size_t i = locate(times, t);
    const double dt = times[i + 1] - times[i];
    const double u = (t - times[i]) / dt;
    const double g00 = 6 * u * (u - 1) / dt;
    const double g10 = (1 - u) * (1 - 3 * u);
    const double g01 = -g00;
    const double g11 = u * (3 * u - 2);
    return g00 * z[i] + g10 * zdot[i] + g01 * z[i + 1] + g11 * zdot[i + 1];
}

// ---------------------------------------------------------------------------
// the drift-diffusion operator on mode amplitudes

std::vector<double> apply_lop(int n, const std::shared_ptr<const RadialGrid>& grid,
                              const std::vector<double>& f) {
    const std::size_t m = f.size();
    const double dr = grid->dr;
    const double par = (n % 2 == 0) ? 1.0 : -1.0;
    std::vector<double> out(m, 0.0);

    const auto at = [&](std::ptrdiff_t i) -> double {
        if (i >= 0)
            return f[static_cast<std::size_t>(i)];
        return par * f[static_cast<std::size_t>(-i)];
    };

    std::size_t i0 = 1;
    if (n == 0) {
        // at the origin the radial Laplacian tends to 2 X''(0)
        const double d2 =
            (-at(2) + 16.0 * at(1) - 30.0 * at(0) + 16.0 * at(-1) - at(-2)) /
            (12.0 * dr * dr);
        out[0] = 2.0 * d2 + f[0];
    } else {
        out[0] = 0.0; // amplitudes are O(r^n)
    }
    for (std::size_t i = i0; i + 2 < m; ++i) {
        const double r = grid->nodes[i];
        const auto ii = static_cast<std::ptrdiff_t>(i);
        const double d1 =
            (at(ii - 2) - 8.0 * at(ii - 1) + 8.0 * at(ii + 1) - at(ii + 2)) / (12.0 * dr);
        const double d2 = (-at(ii - 2) + 16.0 * at(ii - 1) - 30.0 * at(ii) +
                           16.0 * at(ii + 1) - at(ii + 2)) /
                          (12.0 * dr * dr);
        out[i] = d2 + d1 / r - n * n / (r * r) * f[i] + 0.5 * r * d1 + f[i];
    }
    // one-sided at the outer edge (profiles are numerically zero there)
    for (std::size_t i = m - 2; i < m; ++i) {
        const double r = grid->nodes[i];
        const double d1 = (25.0 * f[i] - 48.0 * f[i - 1] + 36.0 * f[i - 2] -
                           16.0 * f[i - 3] + 3.0 * f[i - 4]) / (12.0 * dr);
        const double d2 = (45.0 * f[i] - 154.0 * f[i - 1] + 214.0 * f[i - 2] -
                           156.0 * f[i - 3] + 61.0 * f[i - 4] - 10.0 * f[i - 5]) /
                          (12.0 * dr * dr);
        out[i] = d2 + d1 / r - n * n / (r * r) * f[i] + 0.5 * r * d1 + f[i];
    }
    return out;
}

ModeFunction apply_diffusion_shift(const ModeFunction& mode, double sigma) {
    const auto& grid = mode.cos_part.grid;
    ModeFunction out(mode.n, RadialProfile(grid, mode.n), RadialProfile(grid, mode.n));
    auto lc = apply_lop(mode.n, grid, mode.cos_part.values);
    for (std::size_t i = 0; i < grid->size(); ++i)
        out.cos_part.values[i] = sigma * mode.cos_part.values[i] - lc[i];
    if (mode.n > 0) {
        auto ls = apply_lop(mode.n, grid, mode.sin_part.values);
        for (std::size_t i = 0; i < grid->size(); ++i)
            out.sin_part.values[i] = sigma * mode.sin_part.values[i] - ls[i];
    }
    return out;
}

// ---------------------------------------------------------------------------
// flow-independent shapes

namespace {

// amplitude-level inverse of the advection operator on mode n
RadialProfile invert_shape(int n, const RadialProfile& shape,
                           const radial::LambdaInverseOptions& opts = {}) {
    ModeFunction f(n, shape, RadialProfile(shape.grid, n));
    return radial::lambda_inverse(n, f, opts).sin_part;
}

RadialProfile shift_shape(int n, double sigma, const RadialProfile& shape) {
    RadialProfile out(shape.grid, shape.origin_order);
    auto l = apply_lop(n, shape.grid, shape.values);
    for (std::size_t i = 0; i < shape.size(); ++i)
        out.values[i] = sigma * shape.values[i] - l[i];
    return out;
}

} // namespace

ProfileCache::ProfileCache(std::shared_ptr<const RadialGrid> grid) : grid_(std::move(grid)) {
    using radial::omega0;
    const auto& g = grid_;
    const std::size_t m = g->size();

    w2_ = radial::w2_profile(g);
    phi2_ = radial::w2_stream(g);
    w2p_ = RadialProfile(g, 1);
    w2p_.values = radial::ddr(g, w2_.values);

    til2_ = invert_shape(2, shift_shape(2, 1.0, w2_));

    // third-order forcing amplitudes
    RadialProfile q1(g, 1), q3(g, 3), e4(g, 4);
    for (std::size_t i = 0; i < m; ++i) {
        const double r = g->nodes[i];
        q1.values[i] = omega0(r) * (r * r * r / 16.0 - 0.5 * r);
        q3.values[i] = 0.5 * omega0(r) * r * r * r;
        e4.values[i] = omega0(r) * r * r * r * r / 12.0;
    }
    bar31_ = invert_shape(1, q1);
    bar33_ = invert_shape(3, q3);
    radial::LambdaInverseOptions lenient;
    lenient.project_forcing = true;
    lenient.max_projected_defect = 1e-3;
    til31_ = invert_shape(1, shift_shape(1, 1.5, bar31_), lenient);
    til33_ = invert_shape(3, shift_shape(3, 1.5, bar33_));

    // fourth-order pieces
    s4_ = RadialProfile(g, 2);
    auto phi2p = radial::ddr(g, phi2_.values);
    for (std::size_t i = 1; i < m; ++i) {
        const double r = g->nodes[i];
        s4_.values[i] = (phi2p[i] * w2_.values[i] - phi2_.values[i] * w2p_.values[i]) / r +
                        w2_.values[i] - 0.5 * r * w2p_.values[i];
    }
    inv2_w2_ = invert_shape(2, w2_);
    inv2_e4_ = invert_shape(2, e4);
    inv4_e4_ = invert_shape(4, e4);
    inv4_s4_ = invert_shape(4, s4_);
}

// ---------------------------------------------------------------------------
// per-time assembly

namespace {

RadialProfile scaled(const RadialProfile& shape, double coeff) {
    RadialProfile out = shape;
    for (double& v : out.values)
        v *= coeff;
    return out;
}

struct Coefficients {
    double alpha = 0.0, beta = 0.0, chi = 0.0; // T0 a, T0 b, T0 c
    double alpha_dot = 0.0, beta_dot = 0.0;    // T0^2 da/dt, T0^2 db/dt
    double lap1 = 0.0, lap2 = 0.0;             // T0 d Lap f
    double acoef = 0.0, bcoef = 0.0;           // T0 d (third-derivative combos)
    double p2c = 0.0, p2s = 0.0, p4c = 0.0, p4s = 0.0; // T0 d^2 cubic projections
};

Coefficients flow_coefficients(const VortexScenario& sc, double t,
                               const CenterTrajectory& traj) {
    Coefficients co;
    if (!std::isfinite(sc.t0_char))
        return co; // vanishing background: all corrections are zero
    const auto& flow = *sc.flow;
    const double t0 = sc.t0_char, d = sc.d_eff;
    const Vec2 z = traj.at(t);

    auto s = flows::strain_rates(flow, z, t);
    co.alpha = t0 * s.a;
    co.beta = t0 * s.b;
    co.chi = t0 * s.c;

    const double h = 1e-3 * t0;
    auto sp = flows::strain_rates(flow, traj.at(t + h), t + h);
    auto sm = flows::strain_rates(flow, traj.at(t - h), t - h);
    co.alpha_dot = t0 * t0 * (sp.a - sm.a) / (2.0 * h);
    co.beta_dot = t0 * t0 * (sp.b - sm.b) / (2.0 * h);

    const Vec2 lap = flow.laplacian(z, t);
    co.lap1 = t0 * d * lap.x;
    co.lap2 = t0 * d * lap.y;

    // polar-harmonic content of the second differential
    const double f111 = flow.partial(0, 2, 0, z, t), f122 = flow.partial(0, 0, 2, z, t);
    const double f211 = flow.partial(1, 2, 0, z, t), f222 = flow.partial(1, 0, 2, z, t);
    co.acoef = t0 * d * (0.375 * f111 - 0.125 * f122);
    co.bcoef = t0 * d * (0.125 * f211 - 0.375 * f222);

    // cubic differential projected on the angular harmonics at unit radius
    constexpr int J = 64;
    double p0 = 0.0, scale = 0.0;
    for (int j = 0; j < J; ++j) {
        const double th = 2.0 * pi * j / J;
        const Vec2 xi{std::cos(th), std::sin(th)};
        const double P = dot(xi, flow.contract(3, z, t, xi));
        p0 += P;
        scale = std::max(scale, std::fabs(P));
        co.p2c += P * std::cos(2 * th);
        co.p2s += P * std::sin(2 * th);
        co.p4c += P * std::cos(4 * th);
        co.p4s += P * std::sin(4 * th);
    }
    const double w = t0 * d * d * 2.0 / J;
    co.p2c *= w;
    co.p2s *= w;
    co.p4c *= w;
    co.p4s *= w;
    // the radial average vanishes for a divergence-free field
    if (scale > 0.0 && std::fabs(p0 / J) > 1e-12 * scale)
        throw RunError("build_approx: cubic term has a radial component");
    return co;
}

} // namespace

ApproxSolution build_approx(const VortexScenario& sc, double t,
                            const CenterTrajectory& traj, const ProfileCache& cache) {
    ApproxSolution ap;
    ap.scenario = sc;
    ap.t = t;
    ap.eps = sc.eps(t);
    ap.grid = cache.grid();
    ap.z = traj.at(t);
    ap.zprime = center_rhs(sc, CenterVariant::modified, ap.z, t);
    ap.strain = std::isfinite(sc.t0_char) ? flows::strain_rates(*sc.flow, ap.z, t)
                                          : flows::StrainRates{};

    const auto co = flow_coefficients(sc, t, traj);
    const auto& g = cache.grid();

    ap.profiles.bar2.parts = {ModeFunction(2, scaled(cache.w2(), -co.beta),
                                           scaled(cache.w2(), co.alpha))};
    ap.profiles.til2.parts = {ModeFunction(2, scaled(cache.til2_shape(), co.alpha),
                                           scaled(cache.til2_shape(), co.beta))};
    ap.profiles.bar3.parts = {ModeFunction(1, scaled(cache.bar31_shape(), -co.lap2),
                                           scaled(cache.bar31_shape(), co.lap1)),
                              ModeFunction(3, scaled(cache.bar33_shape(), -co.bcoef),
                                           scaled(cache.bar33_shape(), co.acoef))};
    ap.profiles.til3.parts = {ModeFunction(1, scaled(cache.til31_shape(), co.lap1),
                                           scaled(cache.til31_shape(), co.lap2)),
                              ModeFunction(3, scaled(cache.til33_shape(), co.acoef),
                                           scaled(cache.til33_shape(), co.bcoef))};

    // fourth order: invert the mode-2 and mode-4 forcing amplitudes
    //   F2 = (cubic projection) e4 - 2 (strain x rotation) w2 + (strain-rate drift) w2
    //   F4 = (cubic projection) e4 + (strain quadratics) s4
    const double c2c = -(2.0 * co.beta * co.chi + co.alpha_dot);
    RadialProfile om4_2_cos(g, 2), om4_2_sin(g, 2), om4_4_cos(g, 4), om4_4_sin(g, 4);
    for (std::size_t i = 0; i < g->size(); ++i) {
        // Omega4 mode 2: cos = -w[F2.sin], sin = w[F2.cos]
        const double w_e4_2 = cache.inv2_e4().values[i];
        const double w_w2_2 = cache.inv2_w2().values[i];
        om4_2_cos.values[i] = -(co.p2s * w_e4_2 + c2c * w_w2_2);
        om4_2_sin.values[i] =
            co.p2c * w_e4_2 + (-(2.0 * co.alpha * co.chi) + co.beta_dot) * w_w2_2;
        // Omega4 mode 4: cos = -w[F4.sin], sin = w[F4.cos]
        const double w_e4_4 = cache.inv4_e4().values[i];
        const double w_s4_4 = cache.inv4_s4().values[i];
        om4_4_cos.values[i] =
            -(co.p4s * w_e4_4 + (co.alpha * co.alpha - co.beta * co.beta) * w_s4_4);
        om4_4_sin.values[i] = co.p4c * w_e4_4 - 2.0 * co.alpha * co.beta * w_s4_4;
    }
    ap.profiles.fourth.parts = {ModeFunction(2, om4_2_cos, om4_2_sin),
                                ModeFunction(4, om4_4_cos, om4_4_sin)};
    return ap;
}

double ApproxSolution::eval_full(const Vec2& xi, const Truncation& keep) const {
    const double r = xi.norm();
    const double theta = std::atan2(xi.y, xi.x);
    const double e2 = eps * eps, e3 = e2 * eps, e4 = e3 * eps;
    const double delta = scenario.delta;
    double acc = radial::omega0(r);
    acc += e2 * profiles.bar2.eval(r, theta);
    if (keep.til2)
        acc += e2 * delta * profiles.til2.eval(r, theta);
    if (keep.bar3)
        acc += e3 * profiles.bar3.eval(r, theta);
    if (keep.til3)
        acc += e3 * delta * profiles.til3.eval(r, theta);
    if (keep.fourth)
        acc += e4 * profiles.fourth.eval(r, theta);
    return acc;
}

double ApproxSolution::moment0() const {
    // only the radial part carries mass
    RadialProfile om0(grid, 0);
    for (std::size_t i = 0; i < grid->size(); ++i)
        om0.values[i] = radial::omega0(grid->nodes[i]);
    return 2.0 * pi * radial::simpson_moment(om0, 1);
}

Vec2 ApproxSolution::moment1() const {
    // only mode-1 amplitudes carry a first moment
    const double e3 = eps * eps * eps;
    Vec2 m{};
    auto add = [&](const ModeSum& s, double coeff) {
        if (const ModeFunction* p = s.mode(1)) {
            m.x += coeff * pi * radial::simpson_moment(p->cos_part, 2);
            m.y += coeff * pi * radial::simpson_moment(p->sin_part, 2);
        }
    };
    add(profiles.bar3, e3);
    add(profiles.til3, e3 * scenario.delta);
    return m;
}

// ---------------------------------------------------------------------------
// physical-space approximation

double eval_omega_app(double circulation, double ell, const Vec2& z,
                      const flows::ExternalFlow& flow, double t, const Vec2& x,
                      const RadialProfile& w2) {
    const Vec2 dxv = (x - z) / ell;
    const double r = dxv.norm();
    double val = circulation / (ell * ell) * radial::omega0(r);
    const auto s = flows::strain_rates(flow, z, t);
    if (r > 0.0) {
        const double c2 = (dxv.x * dxv.x - dxv.y * dxv.y) / (r * r);
        const double s2 = 2.0 * dxv.x * dxv.y / (r * r);
        val += w2.interp(r) * (s.a * s2 - s.b * c2);
    }
    return val;
}

// ---------------------------------------------------------------------------
// residual of the self-similar equation

namespace {

// per-mode amplitudes of the full approximation, scaling folded in
struct Assembled {
    std::array<std::vector<double>, 5> c, s;
};

Assembled assemble(const ApproxSolution& ap, const Truncation& keep) {
    const std::size_t m = ap.grid->size();
    Assembled a;
    for (int n = 0; n < 5; ++n) {
        a.c[n].assign(m, 0.0);
        a.s[n].assign(m, 0.0);
    }
    for (std::size_t i = 0; i < m; ++i)
        a.c[0][i] = radial::omega0(ap.grid->nodes[i]);

    const double e2 = ap.eps * ap.eps, e3 = e2 * ap.eps, e4 = e3 * ap.eps;
    const double delta = ap.scenario.delta;
    auto add = [&](const ModeSum& sum, double coeff) {
        for (const auto& p : sum.parts)
            for (std::size_t i = 0; i < m; ++i) {
                a.c[p.n][i] += coeff * p.cos_part.values[i];
                a.s[p.n][i] += coeff * p.sin_part.values[i];
            }
    };
    add(ap.profiles.bar2, e2);
    if (keep.til2)
        add(ap.profiles.til2, e2 * delta);
    if (keep.bar3)
        add(ap.profiles.bar3, e3);
    if (keep.til3)
        add(ap.profiles.til3, e3 * delta);
    if (keep.fourth)
        add(ap.profiles.fourth, e4);
    return a;
}

} // namespace

ResidualNorms residual_norm(const VortexScenario& sc, double t, const CenterTrajectory& traj,
                            const ProfileCache& cache, const ResidualOptions& opts) {
    const auto& g = cache.grid();
    const std::size_t m = g->size();
    const double h = opts.log_dt;

    const ApproxSolution ap = build_approx(sc, t, traj, cache);
    const ApproxSolution ap_p = build_approx(sc, t * std::exp(h), traj, cache);
    const ApproxSolution ap_m = build_approx(sc, t * std::exp(-h), traj, cache);
    const Assembled A = assemble(ap, opts.keep);
    const Assembled Ap = assemble(ap_p, opts.keep);
    const Assembled Am = assemble(ap_m, opts.keep);

    // radial work per mode: log-time derivative, diffusion operator, d/dr,
    // induced velocity
    std::array<std::vector<double>, 5> dtc, dts, lc, ls, drc, drs;
    std::array<std::vector<double>, 5> urc, urs, utc, uts;
    for (int n = 0; n < 5; ++n) {
        dtc[n].assign(m, 0.0);
        dts[n].assign(m, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            dtc[n][i] = (Ap.c[n][i] - Am.c[n][i]) / (2.0 * h);
            dts[n][i] = (Ap.s[n][i] - Am.s[n][i]) / (2.0 * h);
        }
        lc[n] = apply_lop(n, g, A.c[n]);
        ls[n] = apply_lop(n, g, A.s[n]);
        drc[n] = radial::ddr(g, A.c[n]);
        drs[n] = radial::ddr(g, A.s[n]);
        if (n == 0) {
            urc[0].assign(m, 0.0);
            urs[0].assign(m, 0.0);
            uts[0].assign(m, 0.0);
            utc[0].assign(m, 0.0);
            for (std::size_t i = 0; i < m; ++i)
                utc[0][i] = g->nodes[i] * radial::v_star(g->nodes[i]);
        } else {
            RadialProfile pc(g, n), ps(g, n);
            pc.values = A.c[n];
            ps.values = A.s[n];
            auto v = radial::velocity_from_mode(ModeFunction(n, pc, ps));
            urc[n] = v.ur_cos.values;
            urs[n] = v.ur_sin.values;
            utc[n] = v.ut_cos.values;
            uts[n] = v.ut_sin.values;
        }
    }

    const bool has_flow = std::isfinite(sc.t0_char);
    const double delta = sc.delta;
    ResidualNorms out;
    double l2 = 0.0;

    for (std::size_t i = 1; i < m; ++i) {
        const double r = g->nodes[i];
        if (r > opts.r_cut)
            break;
        const double wgt = std::exp(0.25 * r * r) / std::pow(1.0 + r, opts.weight_power);
        double row_l2 = 0.0;
        for (int j = 0; j < opts.n_theta; ++j) {
            const double th = 2.0 * pi * j / opts.n_theta;
            double cs[5], sn[5];
            for (int n = 0; n < 5; ++n) {
                cs[n] = std::cos(n * th);
                sn[n] = std::sin(n * th);
            }
            double dt_v = 0.0, lop_v = 0.0, dr_v = 0.0, dth_v = 0.0;
            double ur = 0.0, ut = 0.0;
            for (int n = 0; n < 5; ++n) {
                dt_v += dtc[n][i] * cs[n] + dts[n][i] * sn[n];
                lop_v += lc[n][i] * cs[n] + ls[n][i] * sn[n];
                dr_v += drc[n][i] * cs[n] + drs[n][i] * sn[n];
                dth_v += n * (-A.c[n][i] * sn[n] + A.s[n][i] * cs[n]);
                ur += urc[n][i] * cs[n] + urs[n][i] * sn[n];
                ut += utc[n][i] * cs[n] + uts[n][i] * sn[n];
            }
            Vec2 vel{ur * std::cos(th) - ut * std::sin(th),
                     ur * std::sin(th) + ut * std::cos(th)};
            if (has_flow) {
                const Vec2 xi{r * std::cos(th), r * std::sin(th)};
                vel += flows::rescaled_background(*sc.flow, ap.z, ap.zprime, t, xi, ap.eps,
                                                  sc.d_eff);
            }
            const Vec2 grad{std::cos(th) * dr_v - std::sin(th) * dth_v / r,
                            std::sin(th) * dr_v + std::cos(th) * dth_v / r};
            const double res = delta * (dt_v - lop_v) + dot(vel, grad);
            const double wres = std::fabs(res) * wgt;
            out.sup_weighted = std::max(out.sup_weighted, wres);
            row_l2 += wres * wres;
        }
        const double simp = (i + 1 == m || i == 0) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        l2 += row_l2 * (2.0 * pi / opts.n_theta) * r * simp * g->dr / 3.0;
    }
    out.l2_weighted = std::sqrt(l2);
    return out;
}

double l1_polar(const std::shared_ptr<const RadialGrid>& grid,
                const std::function<double(double, double)>& f, int n_theta) {
    double acc = 0.0;
    const std::size_t m = grid->size();
    for (std::size_t i = 0; i < m; ++i) {
        const double r = grid->nodes[i];
        double ring = 0.0;
        for (int j = 0; j < n_theta; ++j)
            ring += std::fabs(f(r, 2.0 * pi * j / n_theta));
        const double simp = (i == 0 || i + 1 == m) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        acc += ring * (2.0 * pi / n_theta) * r * simp * grid->dr / 3.0;
    }
    return acc;
}

} // namespace vortexlab::approx
