#ifndef QUANTOPOS_TOPOLOGY_HPP
#define QUANTOPOS_TOPOLOGY_HPP

#include <optional>
#include <string>
#include <vector>

#include "quantopos/geometric.hpp"
#include "quantopos/presheaf.hpp"

namespace quantopos {

// Selection of covering sieves per object, as a subpresheaf of Omega.
struct GrothendieckTopology {
    std::vector<std::vector<bool>> covering;

    bool covers(size_t v, size_t sieve_index) const { return covering[v][sieve_index]; }
};

// Per-object endomap of Omega fibers.
struct LawvereTierneyTopology {
    std::vector<std::vector<uint32_t>> j;

    NatTransform as_transform() const;
};

// A core table is any deflationary, monotone, idempotent endomap of the
// poset; the built context poset supplies one, hand-written tables are
// accepted after validation.
std::optional<std::string> validate_core_table(const FinitePoset& poset,
                                               const std::vector<size_t>& core);

// Everything the sheaf machinery needs, derived from one core table.
struct CoreTopology {
    FinitePoset poset;
    std::vector<size_t> core;
    MonotoneMap core_map;
    Omega omega;
    GrothendieckTopology J;
    LawvereTierneyTopology j;
};

CoreTopology make_core_topology(const FinitePoset& poset, std::vector<size_t> core,
                                size_t max_downset = 24);

// J(V) = sieves containing core(V); j_V(w) = {V' <= V : core(V') in w}.
GrothendieckTopology grothendieck_from_core(const Omega& omega, const std::vector<size_t>& core);
LawvereTierneyTopology lt_from_core(const Omega& omega, const std::vector<size_t>& core);

// General forms quantified over a chosen prequantization category; the
// argument lists the poset index of quantize(C) for each of its objects.
GrothendieckTopology grothendieck_general(const Omega& omega,
                                          const std::vector<size_t>& quantize_images);
LawvereTierneyTopology lt_general(const Omega& omega, const std::vector<size_t>& quantize_images);

std::optional<std::string> validate_grothendieck(const Omega& omega,
                                                 const GrothendieckTopology& J);
std::optional<std::string> validate_lawvere_tierney(const Omega& omega,
                                                    const LawvereTierneyTopology& j);

// Closure of a subobject: core form and general form.
Subobject closure_core(const Presheaf& q, const Subobject& s, const std::vector<size_t>& core);
Subobject closure_general(const Presheaf& q, const Subobject& s, const FinitePoset& poset,
                          const std::vector<size_t>& quantize_images);
// Closure induced by an arbitrary j through the classifying square.
Subobject closure_from_j(const Presheaf& q, const Subobject& s, const Omega& omega,
                         const LawvereTierneyTopology& j);

bool is_dense(const Presheaf& q, const Subobject& s, const std::vector<size_t>& core);

// zeta_Q : Q -> core^* Q, restriction along core(V) <= V.
NatTransform core_unit(const Presheaf& q, const MonotoneMap& core_map);
Presheaf sheafify(const Presheaf& q, const MonotoneMap& core_map);

struct TopologyAxiomReport {
    bool pass = true;
    std::vector<std::string> checks;
    std::vector<std::string> failures;
};

// Fiberwise Lawvere-Tierney and Grothendieck axioms, the classifying square
// for J, closure laws on sampled subobjects, and the exact
// j -> closure -> J -> j round trip.
TopologyAxiomReport topology_axiom_report(const FinitePoset& poset, const Omega& omega,
                                          const LawvereTierneyTopology& j,
                                          const GrothendieckTopology& J,
                                          uint64_t subobject_guard = 100'000);

// J2 subseteq J1 fiberwise; `expect_equal` additionally demands equality.
std::optional<std::string> coarsening_check(const Omega& omega, const GrothendieckTopology& j1,
                                            const GrothendieckTopology& j2, bool expect_equal);

// External form of the sheaf condition: a direct image witness along the
// given map (quantize on a category containing the proper one, or the
// fixpoint inclusion for hand-supplied core tables).
struct ExternalWitness {
    MonotoneMap quantize;
};

ExternalWitness fixpoint_witness(const FinitePoset& poset, const std::vector<size_t>& core);

struct SheafVerdict {
    bool zeta_iso = false;
    bool j_sheaf_extension = false;
    bool external_phi_star = false;
    bool agree = false;

    bool sheaf() const { return zeta_iso; }
};

// Evaluates all three criteria; they are provably equivalent, so a
// disagreement throws InternalCheckError.
SheafVerdict is_sheaf(const Presheaf& r, const CoreTopology& top, const ExternalWitness& ext,
                      uint64_t guard = 10'000'000);
SheafVerdict is_sheaf(const Presheaf& r, const CoreTopology& top, uint64_t guard = 10'000'000);

// Subobject classifier of the sheaf subcategory: the j-fixed sieves.
struct SheafClassifier {
    SubPresheaf sub;  // inside Omega
};

SheafClassifier sheaf_classifier(const CoreTopology& top);
// rho: core^* Omega_j -> Omega_j, the inverse of zeta at the classifier.
NatTransform classifier_core_inverse(const CoreTopology& top, const SheafClassifier& cls);

struct ClassificationReport {
    bool pass = true;
    size_t subsheaves = 0;
    size_t closed_subobjects = 0;
    size_t fixed_characteristics = 0;
    std::vector<std::string> failures;
};

// For a sheaf R: subsheaves, closed subobjects, and j-fixed characteristic
// morphisms coincide, in explicit bijection with Hom(R, Omega_j).
ClassificationReport closed_subobject_classification(const Presheaf& r, const CoreTopology& top,
                                                     const SheafClassifier& cls,
                                                     uint64_t guard = 1'000'000);

struct ComonadReport {
    bool pass = true;
    std::vector<size_t> fixed;
    std::vector<std::string> failures;
};

// The core endomap as a comonad: counit inclusion, identity comultiplication,
// idempotence, and the co-Eilenberg-Moore fixpoint set.
ComonadReport comonad_report(const FinitePoset& poset, const std::vector<size_t>& core,
                             const std::optional<std::vector<size_t>>& expected_fixed);

}  // namespace quantopos

#endif
