#ifndef QUANTOPOS_SERIALIZE_HPP
#define QUANTOPOS_SERIALIZE_HPP

#include <string>

#include "json.hpp"
#include "quantopos/bridge.hpp"
#include "quantopos/presheaf.hpp"
#include "quantopos/topology.hpp"

namespace quantopos {

// All exports use ordered JSON so serialized artifacts are byte-stable.
using Json = nlohmann::ordered_json;

Json matrix_to_json(const Mat& m);
Mat matrix_from_json_array(const Json& rows, Eigen::Index dim);

// Poset export: names, dims, order pairs, core and classicize tables; with
// bases included the poset can be reloaded without redoing linear algebra.
Json context_poset_to_json(const ObservableSet& obs, const ContextPoset& poset,
                           bool include_bases);
ContextPoset context_poset_from_json(const ObservableSet& obs, const Json& doc,
                                     const Tolerance& tol);

// Graph export: Hasse edges plus dashed core edges, in DOT.
std::string context_poset_to_dot(const ContextPoset& poset);

Json topology_to_json(const CoreTopology& top, const SheafClassifier& cls);

Json presheaf_to_json(const Presheaf& p);
Presheaf presheaf_from_json(const FinitePoset& poset, const Json& doc);

std::string dump_json(const Json& doc);

}  // namespace quantopos

#endif
