#pragma once

#include <cstdint>
#include <string>

#include "vortexlab/config.hpp"

namespace vortexlab::cli {

struct RunOptions {
    std::string out_dir;
    std::string format = "csv"; // csv | binary field dumps
    int workers = 1;
    std::uint64_t seed = 0;
};

// Dispatch one subcommand; writes artifacts under opts.out_dir and returns
// the process exit status.
int run_scenario(const Config& cfg, const std::string& subcommand, const RunOptions& opts);

} // namespace vortexlab::cli
