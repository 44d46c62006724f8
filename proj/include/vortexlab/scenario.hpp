#pragma once

#include <memory>

#include "vortexlab/flows.hpp"
#include "vortexlab/geometry.hpp"

namespace vortexlab {

// Bundle of physical parameters for one vortex run. The derived quantities
// delta = nu/Gamma, T0, d = sqrt(Gamma T0), eps(t) = sqrt(nu t)/d are fixed
// here once and used everywhere else.
struct VortexScenario {
    double circulation = 1.0; // Gamma > 0
    double viscosity = 0.0;   // nu
    Vec2 z0{};
    double t_begin = 0.0; // t0
    double t_end = 0.0;   // horizon T
    std::shared_ptr<const flows::ExternalFlow> flow;

    // derived, set by make()
    double delta = 0.0;
    double t0_char = 0.0; // characteristic flow time
    double d_eff = 0.0;   // sqrt(Gamma * T0)

    static VortexScenario make(double circulation, double viscosity, Vec2 z0,
                               double t_begin, double t_end,
                               std::shared_ptr<const flows::ExternalFlow> flow);

    double eps(double t) const { return std::sqrt(viscosity * t) / d_eff; }
    double core_size(double t) const { return std::sqrt(viscosity * t); }
};

} // namespace vortexlab
