#ifndef QUANTOPOS_SCENARIO_HPP
#define QUANTOPOS_SCENARIO_HPP

#include <string>
#include <vector>

#include "quantopos/bridge.hpp"

namespace quantopos {

// Parsed scenario file: the observables to quantize, optional extra
// contexts, the k values to probe, and the run configuration.
struct Scenario {
    ObservableSet observables;
    std::vector<NamedGenerators> extra_contexts;
    std::vector<double> k_values;
    Tolerance tolerance;
    uint64_t seed = 1;
};

Scenario parse_scenario_text(const std::string& text);
Scenario load_scenario(const std::string& path);

// Stable content hash for cache keys.
uint64_t fnv1a_hash(const std::string& text);

}  // namespace quantopos

#endif
