#ifndef QUANTOPOS_SUITE_HPP
#define QUANTOPOS_SUITE_HPP

#include <string>
#include <vector>

#include "quantopos/scenario.hpp"
#include "quantopos/serialize.hpp"
#include "quantopos/topology.hpp"

namespace quantopos {

struct CheckResult {
    std::string name;
    std::string status;  // pass | fail | info
    std::vector<std::string> witnesses;
    double wall_ms = 0;
};

struct SuiteReport {
    uint64_t seed = 0;
    std::vector<CheckResult> checks;

    bool pass() const;
};

// Canonical serialization; wall times are console-only so the document is
// reproducible byte-for-byte at a fixed seed.
Json report_to_json(const SuiteReport& report);

struct SuiteOptions {
    size_t random_presheaves = 3;
    uint64_t hom_guard = 10'000'000;
};

SuiteReport run_suite(const Scenario& scenario, const ContextPoset& poset,
                      const SuiteOptions& options = {});
SuiteReport run_suite(const Scenario& scenario, const SuiteOptions& options = {});

}  // namespace quantopos

#endif
