#include "vortexlab/scenario.hpp"

#include <stdexcept>

namespace vortexlab {

VortexScenario VortexScenario::make(double circulation, double viscosity, Vec2 z0,
                                    double t_begin, double t_end,
                                    std::shared_ptr<const flows::ExternalFlow> flow) {
    if (circulation <= 0.0)
        throw std::invalid_argument("VortexScenario: circulation must be positive");
    if (viscosity <= 0.0)
        throw std::invalid_argument("VortexScenario: viscosity must be positive");
    if (t_begin < 0.0 || t_end <= t_begin)
        throw std::invalid_argument("VortexScenario: need 0 <= t0 < T");
    if (!flow)
        throw std::invalid_argument("VortexScenario: flow is required");

    VortexScenario s;
    s.circulation = circulation;
    s.viscosity = viscosity;
    s.z0 = z0;
    s.t_begin = t_begin;
    s.t_end = t_end;
    s.flow = std::move(flow);
    s.delta = viscosity / circulation;
    if (s.delta >= 1.0)
        throw std::invalid_argument("VortexScenario: inverse Reynolds number must be < 1");
    s.t0_char = s.flow->t_char();
    s.d_eff = std::sqrt(circulation * s.t0_char);
    return s;
}

} // namespace vortexlab
