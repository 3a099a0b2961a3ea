#pragma once
// Self-check orchestration: runs the algebraic verification suite and
// collects per-item verdicts with failure witnesses, for human-readable
// or JSON consumption.

#include <cstdint>
#include <string>
#include <vector>

namespace g2gauge {

struct CheckResult {
    std::string name;
    bool pass = false;
    // Witness of the first violation on failure, short summary on pass.
    std::string detail;
};

struct Report {
    std::string suite;
    std::uint64_t seed = 0;
    std::vector<CheckResult> items;  // ordered by item name

    bool all_pass() const;
    int exit_code() const { return all_pass() ? 0 : 1; }
    std::string text() const;
    std::string json() const;  // schema g2gauge/report/1
};

struct VerifyOptions {
    std::uint64_t seed = 20260823;
    // Flips one generator entry before the suite runs; the Clifford
    // item must then fail and name the entry.
    bool corrupt_gamma = false;
};

Report run_verify(const VerifyOptions& options = {});

}  // namespace g2gauge
