#pragma once

// Verification suites shared by the command line and the acceptance runner.
// Every check reports pass, fail or inconclusive; nothing here throws on a
// failed identity.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hexwalk/partitions.hpp"
#include "json.hpp"

namespace hexwalk {

struct VerifyParams {
    /// Inclusive k range; each suite has its own default.
    std::optional<std::pair<int, int>> k_range;
    /// Largest strip / half-plane length cap.
    int cap = 24;
    bool slow = false;
    RunContext ctx;
};

struct SuiteReport {
    std::string suite;
    std::vector<AuditTerm> checks;

    bool failed() const;
    nlohmann::json to_json() const;
};

const std::vector<std::string>& suite_names();

/// Throws ContractError for an unknown suite.
SuiteReport run_suite(const std::string& name, const VerifyParams& params);

/// The trapezoid instances (i, x) used by the vertex, contour and trapezoid
/// suites; x sits on a right side low enough that Tria_{2i+1,x} dips below
/// the real axis. --slow adds Trap_9 at (1,3).
std::vector<std::pair<int, MidEdge>> default_trapezoids();

} // namespace hexwalk
