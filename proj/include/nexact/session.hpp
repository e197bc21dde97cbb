#pragma once
#include <cstdint>
#include <string>

namespace nexact {

/* One batch run: parse the inputs, dispatch a command, render a report.
 * Zero-valued n and dimBound mean "use the defaults": n from the algebra
 * file (its `n = <k>` line, else 1) and dimBound = 2 * dim(A).  Reports are
 * deterministic functions of (inputs, config): reruns produce identical
 * bytes.  Failures escape as InputError / CapError / InternalError; the
 * caller maps them to exit statuses 1 / 2 / 3. */

struct SessionConfig {
    int n = 0;
    int dimBound = 0;
    int multBound = 2;       // summands per side in extension-closure checks
    uint64_t isoCap = 1u << 20;
    uint64_t latticeCap = 65536;
    uint64_t classCap = 4096;
    uint64_t subsetCap = 1u << 20;
    uint64_t seed = 0;
    std::string format = "text";  // or "structured"

    // Echoed into reports; empty when the input did not come from a file.
    std::string algebraPath;
    std::string modulesPath;
    std::string structurePath;
};

/* Commands: exn, maxn, structures, check, tr, resolve.  `modulesText` feeds
 * check/tr/resolve; `structureText` optionally restricts check to the named
 * bundle entries (default: the whole bundle). */
std::string run_command(const std::string& command, const SessionConfig& cfg,
                        const std::string& algebraText, const std::string& modulesText = "",
                        const std::string& structureText = "");

}  // namespace nexact
