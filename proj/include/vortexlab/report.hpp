#pragma once

#include <string>

namespace vortexlab::cli {

// Consolidate the artifacts of a finished run directory into summary.json
// plus two-column .dat files for plotting. Throws MissingArtifacts when the
// directory holds nothing recognizable. Returns the summary JSON text.
std::string export_report(const std::string& run_dir);

} // namespace vortexlab::cli
