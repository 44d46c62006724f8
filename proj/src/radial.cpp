#include "vortexlab/radial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "vortexlab/geometry.hpp"

namespace vortexlab::radial {

std::shared_ptr<const RadialGrid> RadialGrid::uniform(double r_max, std::size_t cells) {
    if (r_max < 20.0)
        throw std::invalid_argument("RadialGrid: r_max must be >= 20");
    if (cells < 8 || cells % 2 != 0)
        throw std::invalid_argument("RadialGrid: need an even cell count >= 8");
    auto g = std::make_shared<RadialGrid>();
    g->dr = r_max / static_cast<double>(cells);
    g->nodes.resize(cells + 1);
    for (std::size_t i = 0; i <= cells; ++i)
        g->nodes[i] = g->dr * static_cast<double>(i);
    g->nodes.back() = r_max;
    return g;
}

RadialProfile::RadialProfile(std::shared_ptr<const RadialGrid> g, int order, DecayClass d)
    : grid(std::move(g)), values(grid->size(), 0.0), origin_order(order), decay(d) {}

double RadialProfile::max_abs() const {
    double m = 0.0;
    for (double v : values)
        m = std::max(m, std::fabs(v));
    return m;
}

double RadialProfile::interp(double r) const {
    const auto& rg = *grid;
    if (r < 0.0 || r > rg.r_max())
        return 0.0;
    const double s = r / rg.dr;
    const auto m = static_cast<std::ptrdiff_t>(values.size());
    auto i = static_cast<std::ptrdiff_t>(s);
    i = std::clamp<std::ptrdiff_t>(i, 0, m - 2);
    const double u = s - static_cast<double>(i);
    const auto at = [&](std::ptrdiff_t j) {
        j = std::clamp<std::ptrdiff_t>(j, 0, m - 1);
        return values[static_cast<std::size_t>(j)];
    };
    const double p0 = at(i - 1), p1 = at(i), p2 = at(i + 1), p3 = at(i + 2);
    // Catmull-Rom
    return p1 + 0.5 * u * (p2 - p0 +
           u * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
           u * (3.0 * (p1 - p2) + p3 - p0)));
}

ModeFunction::ModeFunction(int n_, RadialProfile c, RadialProfile s)
    : n(n_), cos_part(std::move(c)), sin_part(std::move(s)) {
    if (n == 0)
        for (double v : sin_part.values)
            if (v != 0.0)
                throw std::invalid_argument("ModeFunction: n = 0 requires sin_part == 0");
}

double ModeFunction::eval(double r, double theta) const {
    const double c = cos_part.interp(r);
    if (n == 0)
        return c;
    return c * std::cos(n * theta) + sin_part.interp(r) * std::sin(n * theta);
}

// ---------------------------------------------------------------------------
// kernels

double v_star(double r) {
    const double s = 0.25 * r * r;
    if (r < 1e-3) {
        // (1 - e^{-s})/(8 pi s), expanded to four terms
        return (1.0 - s / 2.0 + s * s / 6.0 - s * s * s / 24.0) / (8.0 * pi);
    }
    return -std::expm1(-s) / (2.0 * pi * r * r);
}

double gauss_g(double r) { return std::exp(-0.25 * r * r) / (8.0 * pi); }

double h_ratio(double r) {
    const double s = 0.25 * r * r;
    if (r < 1e-3) {
        // s/(e^s - 1), Bernoulli expansion (the s^3 coefficient vanishes)
        return 1.0 - s / 2.0 + s * s / 12.0 - s * s * s * s / 720.0;
    }
    return s / std::expm1(s);
}

double omega0(double r) { return std::exp(-0.25 * r * r) / (4.0 * pi); }

KernelValues kernel_functions(double r) {
    if (r < 0.0)
        throw std::invalid_argument("kernel_functions: r must be >= 0");
    return {v_star(r), gauss_g(r), h_ratio(r)};
}

RadialProfile sample(const std::shared_ptr<const RadialGrid>& grid, double (*f)(double),
                     int origin_order, DecayClass d) {
    RadialProfile p(grid, origin_order, d);
    for (std::size_t i = 0; i < grid->size(); ++i)
        p.values[i] = f(grid->nodes[i]);
    return p;
}

// ---------------------------------------------------------------------------
// quadrature

double simpson_moment(const std::shared_ptr<const RadialGrid>& grid,
                      const std::vector<double>& values, int k) {
    const std::size_t m = grid->size();
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double w = (i == 0 || i + 1 == m) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        acc += w * values[i] * std::pow(grid->nodes[i], k);
    }
    return acc * grid->dr / 3.0;
}

double simpson_moment(const RadialProfile& p, int k) {
    return simpson_moment(p.grid, p.values, k);
}

double l2_dot(const RadialProfile& a, const RadialProfile& b) {
    const std::size_t m = a.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double w = (i == 0 || i + 1 == m) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        acc += w * a.values[i] * b.values[i] * a.grid->nodes[i];
    }
    return acc * a.grid->dr / 3.0;
}

double l2_norm(const RadialProfile& p) { return std::sqrt(l2_dot(p, p)); }

double y_norm(const ModeFunction& m) {
    const auto& grid = m.cos_part.grid;
    const std::size_t sz = grid->size();
    double acc = 0.0;
    for (std::size_t i = 0; i < sz; ++i) {
        const double w = (i == 0 || i + 1 == sz) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        const double r = grid->nodes[i];
        const double c = m.cos_part.values[i];
        const double s = m.n == 0 ? 0.0 : m.sin_part.values[i];
        acc += w * (c * c + s * s) * std::exp(0.25 * r * r) * r;
    }
    acc *= grid->dr / 3.0;
    return std::sqrt((m.n == 0 ? 2.0 * pi : pi) * acc);
}

// ---------------------------------------------------------------------------
// tridiagonal boundary-value solves

namespace {

void thomas_solve(std::vector<double>& sub, std::vector<double>& diag,
                  std::vector<double>& sup, std::vector<double>& rhs) {
    const std::size_t m = diag.size();
    for (std::size_t i = 1; i < m; ++i) {
        const double w = sub[i] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[m - 1] /= diag[m - 1];
    for (std::size_t i = m - 1; i-- > 0;)
        rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
}

// One second-order central solve of
//   -phi'' - phi'/r + (n^2/r^2 - shift*h) phi = b,  phi(0)=0, phi'(R)=-(n/R)phi(R)
// on the given nodes. Returns values at all nodes (node 0 is zero).
std::vector<double> bvp_once(int n, bool with_h, const std::vector<double>& nodes,
                             double dr, const std::vector<double>& b) {
    const std::size_t m = nodes.size() - 1; // unknowns at nodes 1..M
    std::vector<double> sub(m), diag(m), sup(m), rhs(m);
    const double inv2 = 1.0 / (dr * dr);
    for (std::size_t j = 0; j < m; ++j) {
        const double r = nodes[j + 1];
        const double pot = n * n / (r * r) - (with_h ? h_ratio(r) : 0.0);
        sub[j] = -inv2 + 1.0 / (2.0 * r * dr);
        diag[j] = 2.0 * inv2 + pot;
        sup[j] = -inv2 - 1.0 / (2.0 * r * dr);
        rhs[j] = b[j + 1];
    }
    // Robin row at r = R via ghost elimination
    {
        const double R = nodes.back();
        const double pot = n * n / (R * R) - (with_h ? h_ratio(R) : 0.0);
        sub[m - 1] = -2.0 * inv2;
        diag[m - 1] = 2.0 * inv2 + 2.0 * n / (R * dr) + n / (R * R) + pot;
        sup[m - 1] = 0.0;
    }
    thomas_solve(sub, diag, sup, rhs);
    std::vector<double> phi(nodes.size(), 0.0);
    std::copy(rhs.begin(), rhs.end(), phi.begin() + 1);
    return phi;
}

// Remove the neutral direction r v_star(r) of the n = 1 shifted problem
// (L^2(r dr) orthogonality).
void project_out_neutral(const std::shared_ptr<const RadialGrid>& grid,
                         std::vector<double>& phi) {
    std::vector<double> k(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i)
        k[i] = grid->nodes[i] * v_star(grid->nodes[i]);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < grid->size(); ++i) {
        double w = (i == 0 || i + 1 == grid->size()) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        num += w * phi[i] * k[i] * grid->nodes[i];
        den += w * k[i] * k[i] * grid->nodes[i];
    }
    const double c = num / den;
    for (std::size_t i = 0; i < grid->size(); ++i)
        phi[i] -= c * k[i];
}

// Catmull-Rom resample of values onto the midpoint-refined grid.
std::vector<double> refine_values(const RadialProfile& p) {
    const std::size_t m = p.size();
    std::vector<double> out(2 * m - 1);
    for (std::size_t i = 0; i < m; ++i)
        out[2 * i] = p.values[i];
    for (std::size_t i = 0; i + 1 < m; ++i)
        out[2 * i + 1] = p.interp(p.grid->nodes[i] + 0.5 * p.grid->dr);
    return out;
}

// Second-order solve refined by one Richardson step: phi = (4 phi_{dr/2} - phi_dr)/3.
RadialProfile bvp_solve(int n, bool with_h, const RadialProfile& rhs) {
    const auto& grid = rhs.grid;
    auto coarse = bvp_once(n, with_h, grid->nodes, grid->dr, rhs.values);

    std::vector<double> fine_nodes(2 * grid->size() - 1);
    for (std::size_t i = 0; i + 1 < grid->size(); ++i) {
        fine_nodes[2 * i] = grid->nodes[i];
        fine_nodes[2 * i + 1] = grid->nodes[i] + 0.5 * grid->dr;
    }
    fine_nodes.back() = grid->nodes.back();
    auto fine = bvp_once(n, with_h, fine_nodes, 0.5 * grid->dr, refine_values(rhs));

    RadialProfile phi(grid, n, DecayClass::algebraic);
    phi.algebraic_k = n;
    for (std::size_t i = 0; i < grid->size(); ++i)
        phi.values[i] = (4.0 * fine[2 * i] - coarse[i]) / 3.0;
    if (n == 1 && with_h)
        project_out_neutral(grid, phi.values);
    return phi;
}

std::vector<double> neutral_profile(const std::shared_ptr<const RadialGrid>& grid) {
    std::vector<double> k(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i)
        k[i] = grid->nodes[i] * gauss_g(grid->nodes[i]);
    return k;
}

// Enforce int w r^2 dr = 0 by removing a multiple of r g(r); this is the
// zero-first-moment gauge of the inverted mode. int (r g) r^2 dr = 1/pi.
void enforce_moment_gauge(RadialProfile& w) {
    auto k = neutral_profile(w.grid);
    const double s = simpson_moment(w.grid, w.values, 2);
    for (std::size_t i = 0; i < w.size(); ++i)
        w.values[i] -= s * pi * k[i];
}

} // namespace

RadialProfile solve_stream(int n, const RadialProfile& rhs) {
    if (n < 1)
        throw std::invalid_argument("solve_stream: n must be >= 1");
    return bvp_solve(n, false, rhs);
}

double moment_defect(int n, const RadialProfile& rhs) {
    RadialProfile b(rhs.grid);
    std::vector<double> babs(rhs.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) {
        b.values[i] = n * v_star(rhs.grid->nodes[i]) * rhs.values[i];
        babs[i] = std::fabs(b.values[i]);
    }
    const double s = simpson_moment(b, 2);
    const double norm = simpson_moment(rhs.grid, babs, 2);
    return norm > 0.0 ? std::fabs(s) / norm : 0.0;
}

RadialProfile solve_phi(int n, const RadialProfile& rhs) {
    if (n < 1)
        throw std::invalid_argument("solve_phi: n must be >= 1");
    if (n == 1) {
        const double defect = moment_defect(n, rhs);
        if (defect > solvability_tol)
            throw SolvabilityViolation("solve_phi: n = 1 forcing violates the moment "
                                       "condition, relative defect " +
                                       std::to_string(defect));
    }
    return bvp_solve(n, true, rhs);
}

// ---------------------------------------------------------------------------
// advection operator

namespace {

// Radial amplitude of Lambda on mode n: M_n[w] = n (v_star w - g phi[w]).
RadialProfile lambda_amplitude(int n, const RadialProfile& w) {
    RadialProfile out(w.grid, n, DecayClass::gaussian);
    if (w.max_abs() == 0.0)
        return out;
    RadialProfile phi = solve_stream(n, w);
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double r = w.grid->nodes[i];
        out.values[i] = n * (v_star(r) * w.values[i] - gauss_g(r) * phi.values[i]);
    }
    return out;
}

RadialProfile negate(RadialProfile p) {
    for (double& v : p.values)
        v = -v;
    return p;
}

} // namespace

ModeFunction lambda_apply(const ModeFunction& mode) {
    if (mode.n == 0) {
        // radially symmetric fields are transported along their own streamlines
        return ModeFunction(0, RadialProfile(mode.cos_part.grid, 0),
                            RadialProfile(mode.cos_part.grid, 0));
    }
    return ModeFunction(mode.n, lambda_amplitude(mode.n, mode.sin_part),
                        negate(lambda_amplitude(mode.n, mode.cos_part)));
}

namespace {

// w = phi h + b/(n v_star) with phi the shifted-potential solve; the unique
// amplitude with M_n[w] = b.
RadialProfile invert_amplitude(int n, RadialProfile b, const LambdaInverseOptions& opts) {
    const auto& grid = b.grid;
    RadialProfile w(grid, n, DecayClass::gaussian);
    if (b.max_abs() == 0.0)
        return w;

    RadialProfile rhs(grid, std::max(0, b.origin_order - 2));
    for (std::size_t i = 0; i < grid->size(); ++i)
        rhs.values[i] = b.values[i] / (n * v_star(grid->nodes[i]));

    if (n == 1) {
        const double defect = moment_defect(1, rhs);
        if (defect > solvability_tol) {
            if (!opts.project_forcing || defect > opts.max_projected_defect)
                throw SolvabilityViolation(
                    "lambda_inverse: n = 1 forcing violates the moment condition, "
                    "relative defect " + std::to_string(defect));
            // remove the defect along r g(r) (unit r^2-moment direction is pi r g)
            const double s = simpson_moment(b, 2);
            auto k = neutral_profile(grid);
            for (std::size_t i = 0; i < grid->size(); ++i) {
                b.values[i] -= s * pi * k[i];
                rhs.values[i] = b.values[i] / (n * v_star(grid->nodes[i]));
            }
        }
    }

    RadialProfile phi = solve_phi(n, rhs);
    for (std::size_t i = 0; i < grid->size(); ++i)
        w.values[i] = phi.values[i] * h_ratio(grid->nodes[i]) + rhs.values[i];
    if (n == 1)
        enforce_moment_gauge(w);
    return w;
}

} // namespace

ModeFunction lambda_inverse(int n, const ModeFunction& forcing,
                            const LambdaInverseOptions& opts) {
    if (n < 1)
        throw std::invalid_argument("lambda_inverse: n must be >= 1");
    if (forcing.n != n)
        throw std::invalid_argument("lambda_inverse: forcing mode mismatch");
    // F = Bc cos + Bs sin  =>  Omega = -w[Bs] cos + w[Bc] sin
    return ModeFunction(n, negate(invert_amplitude(n, forcing.sin_part, opts)),
                        invert_amplitude(n, forcing.cos_part, opts));
}

// ---------------------------------------------------------------------------
// quadrupole weight

namespace {

RadialProfile w2_rhs(const std::shared_ptr<const RadialGrid>& grid) {
    RadialProfile rhs(grid, 2, DecayClass::gaussian);
    for (std::size_t i = 0; i < grid->size(); ++i) {
        const double r = grid->nodes[i];
        rhs.values[i] = 0.5 * r * r * h_ratio(r);
    }
    return rhs;
}

} // namespace

RadialProfile w2_stream(const std::shared_ptr<const RadialGrid>& grid) {
    return solve_phi(2, w2_rhs(grid));
}

RadialProfile w2_profile(const std::shared_ptr<const RadialGrid>& grid) {
    RadialProfile phi = w2_stream(grid);
    RadialProfile w2(grid, 2, DecayClass::gaussian);
    for (std::size_t i = 0; i < grid->size(); ++i) {
        const double r = grid->nodes[i];
        w2.values[i] = h_ratio(r) * (phi.values[i] + 0.5 * r * r);
    }
    for (std::size_t i = 1; i + 1 < grid->size(); ++i)
        if (w2.values[i] <= 0.0)
            throw ConvergenceFailure("w2_profile: lost positivity at r = " +
                                     std::to_string(grid->nodes[i]));
    const double res = w2_bvp_residual(grid);
    if (res > 1e-3)
        throw ConvergenceFailure("w2_profile: BVP residual " + std::to_string(res));
    return w2;
}

double w2_bvp_residual(const std::shared_ptr<const RadialGrid>& grid) {
    RadialProfile phi = w2_stream(grid);
    RadialProfile rhs = w2_rhs(grid);
    const double dr = grid->dr;
    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < grid->size(); ++i) {
        const double r = grid->nodes[i];
        const auto& f = phi.values;
        const double d1 = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * dr);
        const double d2 = (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] -
                           f[i + 2]) / (12.0 * dr * dr);
        const double lhs = -d2 - d1 / r + (4.0 / (r * r) - h_ratio(r)) * f[i];
        worst = std::max(worst, std::fabs(lhs - rhs.values[i]));
    }
    return worst / rhs.max_abs();
}

// ---------------------------------------------------------------------------
// induced velocity

ModeVelocity velocity_from_mode(const ModeFunction& mode) {
    const int n = mode.n;
    if (n < 1)
        throw std::invalid_argument("velocity_from_mode: n must be >= 1");
    const auto& grid = mode.cos_part.grid;
    RadialProfile phi_c = solve_stream(n, mode.cos_part);
    RadialProfile phi_s = solve_stream(n, mode.sin_part);

    ModeVelocity v;
    v.n = n;
    v.ur_cos = RadialProfile(grid, std::max(0, n - 1), DecayClass::algebraic);
    v.ur_sin = RadialProfile(grid, std::max(0, n - 1), DecayClass::algebraic);
    v.ut_cos = RadialProfile(grid, std::max(0, n - 1), DecayClass::algebraic);
    v.ut_sin = RadialProfile(grid, std::max(0, n - 1), DecayClass::algebraic);

    for (std::size_t i = 1; i < grid->size(); ++i) {
        const double r = grid->nodes[i];
        v.ur_cos.values[i] = n / r * phi_s.values[i];
        v.ur_sin.values[i] = -n / r * phi_c.values[i];
    }
    if (n == 1) {
        // limit of phi/r at the origin
        const auto lim = [&](const RadialProfile& p) {
            return 2.0 * p.values[1] / grid->nodes[1] - p.values[2] / grid->nodes[2];
        };
        v.ur_cos.values[0] = lim(phi_s);
        v.ur_sin.values[0] = -lim(phi_c);
    }
    auto dc = ddr(grid, phi_c.values);
    auto ds = ddr(grid, phi_s.values);
    for (std::size_t i = 0; i < grid->size(); ++i) {
        v.ut_cos.values[i] = -dc[i];
        v.ut_sin.values[i] = -ds[i];
    }
    return v;
}

std::vector<double> ddr(const std::shared_ptr<const RadialGrid>& grid,
                        const std::vector<double>& f) {
    const std::size_t m = f.size();
    const double dr = grid->dr;
    std::vector<double> d(m);
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * dr);
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * dr);
    for (std::size_t i = 2; i + 2 < m; ++i)
        d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * dr);
    d[m - 2] = (3.0 * f[m - 1] + 10.0 * f[m - 2] - 18.0 * f[m - 3] + 6.0 * f[m - 4] -
                f[m - 5]) / (12.0 * dr);
    d[m - 1] = (25.0 * f[m - 1] - 48.0 * f[m - 2] + 36.0 * f[m - 3] - 16.0 * f[m - 4] +
                3.0 * f[m - 5]) / (12.0 * dr);
    return d;
}

void write_profile_csv(const std::string& path, const RadialProfile& p, int n,
                       const std::string& part) {
    std::ofstream out(path);
    if (!out)
        throw RunError("write_profile_csv: cannot open " + path);
    out << "# n=" << n << " part=" << part << "\n";
    char line[64];
    for (std::size_t i = 0; i < p.size(); ++i) {
        std::snprintf(line, sizeof line, "%.12g,%.12g\n", p.grid->nodes[i], p.values[i]);
        out << line;
    }
}

} // namespace vortexlab::radial
