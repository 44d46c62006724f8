#include "vortexlab/diagnostics.hpp"

#include <cmath>

namespace vortexlab::diag {

using spectral::SpectralField;

double l1_error(const SpectralField& w, const std::function<double(Vec2)>& ref,
                double circulation) {
    const auto& g = *w.grid;
    auto phys = spectral::to_physical(w);
    double acc = 0.0;
    for (std::size_t a = 0; a < g.n; ++a)
        for (std::size_t b = 0; b < g.n; ++b)
            acc += std::fabs(phys[a * g.n + b] - ref(g.point(a, b)));
    return acc * g.dx() * g.dx() / circulation;
}

Moments vorticity_moments(const SpectralField& w) {
    const auto& g = *w.grid;
    auto phys = spectral::to_physical(w);
    Moments m;
    Vec2 first{};
    for (std::size_t a = 0; a < g.n; ++a)
        for (std::size_t b = 0; b < g.n; ++b) {
            const double v = phys[a * g.n + b];
            m.circulation += v;
            first += v * g.point(a, b);
        }
    const double dx2 = g.dx() * g.dx();
    m.circulation *= dx2;
    if (std::fabs(m.circulation) < 1e-14)
        throw ZeroCirculation("vorticity_moments: circulation below rounding");
    m.center = first * dx2 / m.circulation;
    for (std::size_t a = 0; a < g.n; ++a)
        for (std::size_t b = 0; b < g.n; ++b) {
            const double v = phys[a * g.n + b];
            const Vec2 d = g.point(a, b) - m.center;
            m.second[0] += v * d.x * d.x;
            m.second[1] += v * d.x * d.y;
            m.second[2] += v * d.y * d.y;
        }
    for (double& s : m.second)
        s *= dx2;
    return m;
}

namespace {

// bilinear sample of a physical-space array with periodic wrap
double bilinear(const spectral::PeriodicGrid& g, const std::vector<double>& phys, Vec2 x) {
    const double sx = (x.x - g.origin.x) / g.dx();
    const double sy = (x.y - g.origin.y) / g.dx();
    const auto n = static_cast<std::ptrdiff_t>(g.n);
    auto wrap = [n](std::ptrdiff_t i) { return static_cast<std::size_t>(((i % n) + n) % n); };
    const auto ix = static_cast<std::ptrdiff_t>(std::floor(sx));
    const auto iy = static_cast<std::ptrdiff_t>(std::floor(sy));
    const double fx = sx - std::floor(sx), fy = sy - std::floor(sy);
    const double v00 = phys[wrap(ix) * g.n + wrap(iy)];
    const double v10 = phys[wrap(ix + 1) * g.n + wrap(iy)];
    const double v01 = phys[wrap(ix) * g.n + wrap(iy + 1)];
    const double v11 = phys[wrap(ix + 1) * g.n + wrap(iy + 1)];
    return (1 - fx) * ((1 - fy) * v00 + fy * v01) + fx * ((1 - fy) * v10 + fy * v11);
}

double simpson_w(std::size_t i, std::size_t m) {
    return (i == 0 || i + 1 == m) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
}

} // namespace

PolarField sample_deviation(const SpectralField& w, Vec2 z, double ell, double circulation,
                            const std::shared_ptr<const radial::RadialGrid>& grid,
                            int n_theta) {
    auto phys = spectral::to_physical(w);
    PolarField out;
    out.grid = grid;
    out.n_theta = n_theta;
    out.values.assign(grid->size() * n_theta, 0.0);
    const double r_fit = std::min(grid->r_max(), 0.45 * w.grid->box_size / ell);
    for (std::size_t i = 0; i < grid->size(); ++i) {
        const double r = grid->nodes[i];
        if (r > r_fit)
            break;
        for (int j = 0; j < n_theta; ++j) {
            const double th = 2.0 * pi * j / n_theta;
            const Vec2 x = z + ell * Vec2{r * std::cos(th), r * std::sin(th)};
            // rescaled deviation from the Gaussian core
            const double om = bilinear(*w.grid, phys, x);
            out.at(i, j) = ell * ell / circulation * om -
                           radial::omega0(r);
        }
    }
    return out;
}

QuadrupoleFit quadrupole_fit(const SpectralField& w, Vec2 z, double ell,
                             const radial::RadialProfile& w2, int n_theta) {
    auto phys = spectral::to_physical(w);
    const auto& grid = w2.grid;
    const std::size_t m = grid->size();
    const double r_fit = std::min(grid->r_max(), 0.45 * w.grid->box_size / ell);

    double num_a = 0.0, num_b = 0.0, den = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double r = grid->nodes[i];
        if (r > r_fit)
            break;
        const double sw = simpson_w(i, m) * grid->dr / 3.0 * r;
        double ring_s = 0.0, ring_c = 0.0;
        for (int j = 0; j < n_theta; ++j) {
            const double th = 2.0 * pi * j / n_theta;
            const Vec2 x = z + ell * Vec2{r * std::cos(th), r * std::sin(th)};
            // deviation in physical units; the Gaussian core carries no
            // quadrupole, subtracting it only removes the axisymmetric bulk
            const double dev = bilinear(*w.grid, phys, x);
            ring_s += dev * std::sin(2.0 * th);
            ring_c += dev * std::cos(2.0 * th);
        }
        const double w2v = w2.values[i];
        num_a += sw * w2v * ring_s * (2.0 * pi / n_theta);
        num_b += sw * w2v * ring_c * (2.0 * pi / n_theta);
        den += sw * w2v * w2v * pi; // angular integral of sin^2(2 theta)
    }
    QuadrupoleFit fit;
    fit.a_hat = num_a / den;
    fit.b_hat = -num_b / den;
    return fit;
}

WeightedEnergy weighted_energy(const PolarField& w) {
    const auto& grid = w.grid;
    const std::size_t m = grid->size();
    const int nt = w.n_theta;

    double peak = 0.0, tail = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (int j = 0; j < nt; ++j) {
            const double v = std::fabs(w.at(i, j));
            peak = std::max(peak, v);
            if (grid->nodes[i] > 0.9 * grid->r_max())
                tail = std::max(tail, v);
        }
    if (peak == 0.0)
        return {};
    if (tail > 1e-8 * peak)
        throw WeightOverflowRisk("weighted_energy: field has not decayed before the "
                                 "outer radius");

    // radial derivative by fourth-order differences per ray, angular
    // derivative spectrally per ring
    WeightedEnergy out;
    std::vector<double> ray(m);
    std::vector<std::vector<double>> dr(m, std::vector<double>(nt));
    for (int j = 0; j < nt; ++j) {
        for (std::size_t i = 0; i < m; ++i)
            ray[i] = w.at(i, j);
        auto d = radial::ddr(grid, ray);
        for (std::size_t i = 0; i < m; ++i)
            dr[i][j] = d[i];
    }
    for (std::size_t i = 0; i < m; ++i) {
        const double r = grid->nodes[i];
        const double p = std::exp(0.25 * r * r);
        // spectral theta-derivative on the ring
        std::vector<double> dth(nt, 0.0);
        for (int k = 1; k <= nt / 2 - 1; ++k) {
            double ck = 0.0, sk = 0.0;
            for (int j = 0; j < nt; ++j) {
                const double th = 2.0 * pi * j * k / nt;
                ck += w.at(i, j) * std::cos(th);
                sk += w.at(i, j) * std::sin(th);
            }
            ck *= 2.0 / nt;
            sk *= 2.0 / nt;
            for (int j = 0; j < nt; ++j) {
                const double th = 2.0 * pi * j * k / nt;
                dth[j] += k * (-ck * std::sin(th) + sk * std::cos(th));
            }
        }
        double ring_e = 0.0, ring_f = 0.0;
        for (int j = 0; j < nt; ++j) {
            const double v = w.at(i, j);
            const double grad2 =
                dr[i][j] * dr[i][j] + (r > 0.0 ? dth[j] * dth[j] / (r * r) : 0.0);
            ring_e += v * v;
            ring_f += grad2 + r * r * v * v + v * v;
        }
        const double sw = simpson_w(i, m) * grid->dr / 3.0 * r * (2.0 * pi / nt);
        out.energy += p * ring_e * sw;
        out.dissipation += p * ring_f * sw;
    }
    return out;
}

double relaxation_fit(const std::vector<double>& t, const std::vector<double>& err) {
    if (t.size() != err.size() || t.size() < 20)
        throw std::invalid_argument("relaxation_fit: need at least 20 samples");
    if (t.back() < 3.0 * t.front())
        throw std::invalid_argument("relaxation_fit: history must span t/t0 >= 3");
    const std::size_t n = t.size();
    double plateau = 0.0;
    std::size_t q = n - n / 4;
    for (std::size_t i = q; i < n; ++i)
        plateau += err[i];
    plateau /= static_cast<double>(n - q);

    const double y0 = err.front() - plateau;
    if (y0 <= 0.0 || err.front() < 1.02 * plateau)
        throw NoDecayDetected("relaxation_fit: no decaying component above the plateau");

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double y = err[i] - plateau;
        if (y < 0.01 * y0)
            continue;
        const double lx = std::log(t.front() / t[i]);
        const double ly = std::log(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++used;
    }
    if (used < 5)
        throw NoDecayDetected("relaxation_fit: too few samples above the plateau");
    const double denom = used * sxx - sx * sx;
    if (denom == 0.0)
        throw NoDecayDetected("relaxation_fit: degenerate abscissa");
    return (used * sxy - sx * sy) / denom;
}

TrackingRecord track_snapshot(const spectral::Snapshot& snap, const VortexScenario& sc,
                              const approx::CenterTrajectory& traj_mod,
                              const approx::CenterTrajectory& traj_naive,
                              const radial::RadialProfile& w2) {
    TrackingRecord rec;
    rec.t = snap.t;
    rec.eps = sc.eps(snap.t);
    rec.z = traj_mod.at(snap.t);
    rec.z_hat = traj_naive.at(snap.t);
    rec.z_bar = vorticity_moments(snap.field).center;
    const double ell = sc.core_size(snap.t);

    auto lo = [&](Vec2 center) {
        return [&, center](Vec2 x) {
            const double r2 = (x - center).norm2() / (ell * ell);
            return sc.circulation / (4.0 * pi * ell * ell) * std::exp(-0.25 * r2);
        };
    };
    rec.l1_vs_lo_z = l1_error(snap.field, lo(rec.z), sc.circulation);
    rec.l1_vs_lo_zhat = l1_error(snap.field, lo(rec.z_hat), sc.circulation);
    rec.l1_vs_omega_app = l1_error(
        snap.field,
        [&](Vec2 x) {
            return approx::eval_omega_app(sc.circulation, ell, rec.z, *sc.flow, snap.t, x,
                                          w2);
        },
        sc.circulation);
    auto fit = quadrupole_fit(snap.field, rec.z, ell, w2);
    rec.a_hat = fit.a_hat;
    rec.b_hat = fit.b_hat;
    return rec;
}

} // namespace vortexlab::diag
