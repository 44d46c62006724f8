#include "vortexlab/flows.hpp"

#include <cmath>
#include <limits>

namespace vortexlab::flows {

Mat2 ExternalFlow::jacobian(const Vec2& x, double t) const {
    Mat2 j;
    j(0, 0) = partial(0, 1, 0, x, t);
    j(0, 1) = partial(0, 0, 1, x, t);
    j(1, 0) = partial(1, 1, 0, x, t);
    j(1, 1) = partial(1, 0, 1, x, t);
    return j;
}

Vec2 ExternalFlow::laplacian(const Vec2& x, double t) const {
    return {partial(0, 2, 0, x, t) + partial(0, 0, 2, x, t),
            partial(1, 2, 0, x, t) + partial(1, 0, 2, x, t)};
}

Vec2 ExternalFlow::contract(int k, const Vec2& x, double t, const Vec2& xi) const {
    // sum_m binom(k,m) d1^m d2^{k-m} f_i  xi1^m xi2^{k-m}
    static const double binom[5][5] = {{1, 0, 0, 0, 0},
                                       {1, 1, 0, 0, 0},
                                       {1, 2, 1, 0, 0},
                                       {1, 3, 3, 1, 0},
                                       {1, 4, 6, 4, 1}};
    Vec2 out;
    for (int m = 0; m <= k; ++m) {
        const double w = binom[k][m] * std::pow(xi.x, m) * std::pow(xi.y, k - m);
        out.x += w * partial(0, m, k - m, x, t);
        out.y += w * partial(1, m, k - m, x, t);
    }
    return out;
}

namespace {

class LinearStrain : public ExternalFlow {
public:
    explicit LinearStrain(double gamma, double omega_r = 0.0)
        : gamma_(gamma), omega_r_(omega_r) {}

    Vec2 velocity(const Vec2& x, double) const override {
        return {-0.5 * gamma_ * x.x - 0.5 * omega_r_ * x.y,
                0.5 * gamma_ * x.y + 0.5 * omega_r_ * x.x};
    }

    double partial(int i, int j1, int j2, const Vec2&, double) const override {
        if (j1 + j2 != 1)
            return 0.0;
        if (i == 0)
            return j1 == 1 ? -0.5 * gamma_ : -0.5 * omega_r_;
        return j1 == 1 ? 0.5 * omega_r_ : 0.5 * gamma_;
    }

    double t_char() const override { return 1.0 / std::max(gamma_, std::fabs(omega_r_)); }

    std::string name() const override {
        return omega_r_ == 0.0 ? "linear_strain" : "rotating_strain";
    }

    std::map<std::string, double> parameters() const override {
        if (omega_r_ == 0.0)
            return {{"gamma", gamma_}};
        return {{"gamma", gamma_}, {"omega_r", omega_r_}};
    }

private:
    double gamma_;
    double omega_r_;
};

// derivative ladders: d^j sin(x) = sin(x + j pi/2), d^k cos(x) = cos(x + k pi/2)
double dsin(int j, double x) { return std::sin(x + 0.5 * pi * j); }
double dcos(int j, double x) { return std::cos(x + 0.5 * pi * j); }

class Cellular : public ExternalFlow {
public:
    Cellular(double U, double Lc) : U_(U), Lc_(Lc) {}

    Vec2 velocity(const Vec2& x, double) const override {
        const double X = x.x / Lc_, Y = x.y / Lc_;
        return {-U_ * std::sin(X) * std::cos(Y), U_ * std::cos(X) * std::sin(Y)};
    }

    double partial(int i, int j1, int j2, const Vec2& x, double) const override {
        const double X = x.x / Lc_, Y = x.y / Lc_;
        const double scale = U_ / std::pow(Lc_, j1 + j2);
        if (i == 0)
            return -scale * dsin(j1, X) * dcos(j2, Y);
        return scale * dcos(j1, X) * dsin(j2, Y);
    }

    double t_char() const override { return Lc_ / (2.0 * U_); }
    std::string name() const override { return "cellular"; }
    std::map<std::string, double> parameters() const override {
        return {{"U", U_}, {"Lc", Lc_}};
    }

private:
    double U_;
    double Lc_;
};

class NoFlow : public ExternalFlow {
public:
    Vec2 velocity(const Vec2&, double) const override { return {0.0, 0.0}; }
    double partial(int, int, int, const Vec2&, double) const override { return 0.0; }
    double t_char() const override { return std::numeric_limits<double>::infinity(); }
    std::string name() const override { return "none"; }
    std::map<std::string, double> parameters() const override { return {}; }
};

double require(const std::map<std::string, double>& params, const std::string& key) {
    auto it = params.find(key);
    if (it == params.end() || it->second <= 0.0)
        throw UnknownKind("make_flow: missing or non-positive parameter '" + key + "'");
    return it->second;
}

} // namespace

std::shared_ptr<const ExternalFlow> make_flow(FlowKind kind,
                                              const std::map<std::string, double>& params) {
    switch (kind) {
    case FlowKind::linear_strain:
        return std::make_shared<LinearStrain>(require(params, "gamma"));
    case FlowKind::cellular:
        return std::make_shared<Cellular>(require(params, "U"), require(params, "Lc"));
    case FlowKind::rotating_strain: {
        auto it = params.find("omega_r");
        const double wr = it == params.end() ? 0.0 : it->second;
        return std::make_shared<LinearStrain>(require(params, "gamma"), wr);
    }
    case FlowKind::none:
        return std::make_shared<NoFlow>();
    }
    throw UnknownKind("make_flow: unhandled kind");
}

std::shared_ptr<const ExternalFlow> make_flow(const std::string& kind,
                                              const std::map<std::string, double>& params) {
    if (kind == "linear_strain")
        return make_flow(FlowKind::linear_strain, params);
    if (kind == "cellular")
        return make_flow(FlowKind::cellular, params);
    if (kind == "rotating_strain")
        return make_flow(FlowKind::rotating_strain, params);
    if (kind == "none")
        return make_flow(FlowKind::none, params);
    throw UnknownKind("make_flow: unknown kind '" + kind + "'");
}

StrainRates strain_rates(const ExternalFlow& flow, const Vec2& z, double t) {
    const Mat2 j = flow.jacobian(z, t);
    return {0.5 * (j(0, 0) - j(1, 1)), 0.5 * (j(1, 0) + j(0, 1)),
            0.5 * (j(1, 0) - j(0, 1))};
}

double jacobian_magnitude(const StrainRates& s) {
    return 2.0 * std::max(std::hypot(s.a, s.b), std::fabs(s.c));
}

Vec2 expansion_term(const ExternalFlow& flow, const Vec2& z, const Vec2& zprime, double t,
                    int k, bool hatted, const Vec2& xi, double d_eff) {
    const double t0 = flow.t_char();
    switch (k) {
    case 1:
        if (hatted)
            return {0.0, 0.0};
        return (t0 / d_eff) * (flow.velocity(z, t) - zprime);
    case 2:
        return t0 * flow.jacobian(z, t).apply(xi);
    case 3: {
        Vec2 e3 = 0.5 * flow.contract(2, z, t, xi);
        if (hatted)
            e3 = e3 - flow.laplacian(z, t);
        return t0 * d_eff * e3;
    }
    case 4:
        return (t0 * d_eff * d_eff / 6.0) * flow.contract(3, z, t, xi);
    default:
        throw std::invalid_argument("expansion_term: k must be 1..4");
    }
}

Vec2 rescaled_background(const ExternalFlow& flow, const Vec2& z, const Vec2& zprime,
                         double t, const Vec2& xi, double eps, double d_eff) {
    const double ell = eps * d_eff; // core size sqrt(nu t)
    const Vec2 fx = flow.velocity(z + ell * xi, t);
    return (eps * flow.t_char() / d_eff) * (fx - zprime);
}

FlowMetrics flow_metrics(const ExternalFlow& flow, const SampleBox& box, double t_begin,
                         double t_end, double circulation) {
    constexpr int nx = 64, nt = 16;
    double max_jac = 0.0;
    double max_deriv[3][5] = {};
    for (int it = 0; it < nt; ++it) {
        const double t =
            nt == 1 ? t_begin : t_begin + (t_end - t_begin) * it / double(nt - 1);
        for (int ix = 0; ix < nx; ++ix)
            for (int iy = 0; iy < nx; ++iy) {
                const Vec2 x{box.lo.x + (box.hi.x - box.lo.x) * ix / double(nx - 1),
                             box.lo.y + (box.hi.y - box.lo.y) * iy / double(nx - 1)};
                max_jac = std::max(max_jac, jacobian_magnitude(strain_rates(flow, x, t)));
                for (int m = 0; m <= 2; ++m)
                    for (int k = 0; k <= 4; ++k) {
                        if (m == 0 && k == 0) {
                            const Vec2 f = flow.velocity(x, t);
                            max_deriv[0][0] = std::max({max_deriv[0][0], std::fabs(f.x),
                                                        std::fabs(f.y)});
                            continue;
                        }
                        for (int i = 0; i < 2; ++i)
                            for (int j1 = 0; j1 <= k; ++j1) {
                                const double v =
                                    m == 0 ? flow.partial(i, j1, k - j1, x, t)
                                           : flow.dt_partial(m, i, j1, k - j1, x, t);
                                max_deriv[m][k] = std::max(max_deriv[m][k], std::fabs(v));
                            }
                    }
            }
    }
    FlowMetrics out;
    if (max_jac == 0.0) {
        out.t0_est = std::numeric_limits<double>::infinity();
        out.k_est = 0.0;
        return out;
    }
    out.t0_est = 1.0 / max_jac;
    const double t0 = out.t0_est;
    const double d = std::sqrt(circulation * t0);
    for (int m = 0; m <= 2; ++m)
        for (int k = 0; k <= 4; ++k)
            out.k_est += std::pow(t0, m) * std::pow(d, k) * max_deriv[m][k];
    out.k_est *= t0 / d;
    return out;
}

} // namespace vortexlab::flows
