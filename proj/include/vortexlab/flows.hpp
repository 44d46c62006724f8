#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "vortexlab/errors.hpp"
#include "vortexlab/geometry.hpp"

namespace vortexlab::flows {

// Symmetric-stretch, shear, and rotation components of the velocity
// Jacobian at a point:
//   a = (d1 f1 - d2 f2)/2,  b = (d1 f2 + d2 f1)/2,  c = (d1 f2 - d2 f1)/2.
struct StrainRates {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

// Divergence-free background velocity field with exact spatial derivatives
// up to fourth order. Catalog fields are steady; time enters the interface
// for generality and for the metrics below.
class ExternalFlow {
public:
    virtual ~ExternalFlow() = default;

    virtual Vec2 velocity(const Vec2& x, double t) const = 0;
    // d1^j1 d2^j2 f_i, for j1 + j2 <= 4
    virtual double partial(int i, int j1, int j2, const Vec2& x, double t) const = 0;
    // d_t^m of the above, m = 1, 2 (zero for the steady catalog)
    virtual double dt_partial(int /*m*/, int /*i*/, int /*j1*/, int /*j2*/, const Vec2&,
                              double) const {
        return 0.0;
    }

    // characteristic time 1/sup||Df||, in closed form per catalog entry
    virtual double t_char() const = 0;
    virtual std::string name() const = 0;
    virtual std::map<std::string, double> parameters() const = 0;

    // derived evaluators
    Mat2 jacobian(const Vec2& x, double t) const;
    Vec2 laplacian(const Vec2& x, double t) const;
    // D^k f [xi, ..., xi] for k = 2, 3, 4
    Vec2 contract(int k, const Vec2& x, double t, const Vec2& xi) const;
};

enum class FlowKind { linear_strain, cellular, rotating_strain, none };

// linear_strain(gamma):        f = (gamma/2) (-x1, x2)
// cellular(U, Lc):             f = U (-sin(x1/Lc) cos(x2/Lc), cos(x1/Lc) sin(x2/Lc))
// rotating_strain(gamma, w_r): linear strain plus rigid rotation (w_r/2) x^perp
// none:                        vanishing background (infinite characteristic time)
std::shared_ptr<const ExternalFlow> make_flow(FlowKind kind,
                                              const std::map<std::string, double>& params);
std::shared_ptr<const ExternalFlow> make_flow(const std::string& kind,
                                              const std::map<std::string, double>& params);

StrainRates strain_rates(const ExternalFlow& flow, const Vec2& z, double t);

// Magnitude of the Jacobian used for the characteristic time: the larger of
// twice the strain magnitude and twice the rotation rate (the nuclear norm
// of a trace-free 2x2 matrix).
double jacobian_magnitude(const StrainRates& s);

// Taylor term of the rescaled background velocity about the vortex center:
//   k=1: (T0/d)(f(z,t) - zprime)          (zero in the hatted variant)
//   k=2: T0 Df(z,t)[xi]
//   k=3: (1/2) T0 d D2f(z,t)[xi,xi]       (hatted: T0 d ((1/2) D2f[xi,xi] - Lap f))
//   k=4: (1/6) T0 d^2 D3f(z,t)[xi,xi,xi]
Vec2 expansion_term(const ExternalFlow& flow, const Vec2& z, const Vec2& zprime, double t,
                    int k, bool hatted, const Vec2& xi, double d_eff);

// Full rescaled background velocity E(f,z; xi,t) for a given center state.
Vec2 rescaled_background(const ExternalFlow& flow, const Vec2& z, const Vec2& zprime,
                         double t, const Vec2& xi, double eps, double d_eff);

struct SampleBox {
    Vec2 lo;
    Vec2 hi;
};

struct FlowMetrics {
    double t0_est = 0.0;  // 1/max||Df|| over the sample set (inf sentinel if Df = 0)
    double k_est = 0.0;   // weighted derivative sum measuring flow intensity
};

// Sampled estimates on a 64x64 lattice at 16 time slices. k_est sums
// (T0/d) T0^m d^k max|dt^m D^k f| over m <= 2, k <= 4 with max-abs-entry
// tensor norms; d = sqrt(circulation * T0).
FlowMetrics flow_metrics(const ExternalFlow& flow, const SampleBox& box,
                         double t_begin, double t_end, double circulation = 1.0);

} // namespace vortexlab::flows
