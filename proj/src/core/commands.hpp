#pragma once

#include "core/report.hpp"

namespace fractrace {

// Executes one toolkit command described by a JSON object (the CLI builds
// these from argv; the C API accepts them directly). Artifacts are written
// under cmd["out"] when present, and the returned summary is also written to
// <out>/summary.json. summary["status"] is "ok" or "property_failure";
// configuration and I/O problems throw.
json run_command(const json& cmd);

}  // namespace fractrace
