#ifndef QUANTOPOS_GEOMETRIC_HPP
#define QUANTOPOS_GEOMETRIC_HPP

#include <string>
#include <vector>

#include "quantopos/bridge.hpp"
#include "quantopos/presheaf.hpp"

namespace quantopos {

// Order-preserving map between finite posets, by object table.
struct MonotoneMap {
    FinitePoset source;
    FinitePoset target;
    std::vector<size_t> map;

    size_t operator()(size_t v) const { return map[v]; }
};

MonotoneMap make_monotone_map(FinitePoset source, FinitePoset target, std::vector<size_t> map);
MonotoneMap identity_map(const FinitePoset& poset);

// Poset maps carried by a built context poset.
MonotoneMap quantize_map(const ContextPoset& cposet, const ClassicalPoset& classical);
// Throws ProperCategoryMissing when some classicize-image is not an object
// of the chosen classical poset (only possible when it misses the proper
// category).
MonotoneMap classicize_map(const ContextPoset& cposet, const ClassicalPoset& classical);
MonotoneMap saturation_map(const ContextPoset& cposet, const ClassicalPoset& from,
                           const ClassicalPoset& proper);
MonotoneMap inclusion_map(const ClassicalPoset& sub, const ClassicalPoset& super);
// The core endomap on the context poset itself.
MonotoneMap core_endomap(const ContextPoset& cposet);

// f^* : presheaves on the target -> presheaves on the source.
Presheaf inverse_image(const MonotoneMap& f, const Presheaf& q);
NatTransform inverse_image_transform(const MonotoneMap& f, const NatTransform& theta);

// f_* : fiber at V is the set of matching families, i.e. natural
// transformations (1_{downset V})_f -> P, kept explicitly. A family is a
// per-source-object pick, -1 where the indicator fiber is empty.
struct DirectImage {
    Presheaf pre;
    std::vector<std::vector<std::vector<int32_t>>> families;

    size_t family_index(size_t v, const std::vector<int32_t>& picks) const;  // throws
};

DirectImage direct_image(const MonotoneMap& f, const Presheaf& p, uint64_t guard = 10'000'000);
// Post-composition on families: f_* theta for theta : P -> P'.
NatTransform direct_image_transform(const MonotoneMap& f, const NatTransform& theta,
                                    const Presheaf& p_to, const DirectImage& from,
                                    const DirectImage& to);

// f_! : fiber at V is pairs (p, C) with V <= f(C), modulo the zig-zag
// closure of agreement on a common lower context; computed by union-find.
struct LeftKan {
    Presheaf pre;
    // nodes[v]: deterministic list of (source object, element) pairs
    std::vector<std::vector<std::pair<size_t, uint32_t>>> nodes;
    std::vector<std::vector<uint32_t>> class_of;  // aligned with nodes[v]

    uint32_t class_index(size_t v, size_t c, uint32_t p) const;  // throws
};

LeftKan left_kan(const MonotoneMap& f, const Presheaf& p);
NatTransform left_kan_transform(const MonotoneMap& f, const NatTransform& theta,
                                const Presheaf& p_from, const LeftKan& from, const LeftKan& to);

// Unit Q -> f_* f^* Q of the inverse/direct adjunction.
NatTransform direct_unit(const MonotoneMap& f, const Presheaf& q, const DirectImage& fstar_of_fq);
// Unit P -> f^* f_! P of the Kan/inverse adjunction.
NatTransform kan_unit(const MonotoneMap& f, const Presheaf& p, const LeftKan& kan);

// Transposes realizing the two Hom-set bijections.
NatTransform transpose_to_source(const MonotoneMap& f, const Presheaf& p, const Presheaf& q,
                                 const DirectImage& di, const NatTransform& tau);
NatTransform transpose_to_target(const MonotoneMap& f, const Presheaf& p, const Presheaf& q,
                                 const DirectImage& di, const NatTransform& sigma);
NatTransform kan_transpose_to_target(const MonotoneMap& f, const Presheaf& p, const Presheaf& q,
                                     const LeftKan& kan, const NatTransform& nu);
NatTransform kan_transpose_to_source(const MonotoneMap& f, const Presheaf& p, const Presheaf& q,
                                     const LeftKan& kan, const NatTransform& lambda);

struct NamedPresheaf {
    std::string name;
    Presheaf pre;
};

struct AdjunctionRecord {
    std::string p_name;
    std::string q_name;
    size_t hom_inverse = 0;   // |Hom(f*Q, P)|
    size_t hom_direct = 0;    // |Hom(Q, f_*P)|
    size_t hom_kan = 0;       // |Hom(f!P, Q)|
    size_t hom_source = 0;    // |Hom(P, f*Q)|
};

struct AdjunctionReport {
    bool pass = true;
    std::vector<AdjunctionRecord> records;
    std::vector<std::string> failures;
};

// For every sampled pair: both Hom-set counts agree, the explicit transposes
// are mutually inverse, and each transpose target is the unique solution of
// its defining triangle. Unit naturality is checked against sampled
// morphisms; left exactness of f^* on terminal/product/pullback diagrams.
AdjunctionReport adjunction_report(const MonotoneMap& f,
                                   const std::vector<NamedPresheaf>& sources,
                                   const std::vector<NamedPresheaf>& targets,
                                   uint64_t guard = 10'000'000);

// The natural isomorphism quantize_* P -> classicize^* P, component
// alpha -> alpha at classicize(V).
NatTransform direct_image_evaluation_iso(const MonotoneMap& classicize_m, const DirectImage& di);
NatTransform direct_image_evaluation_iso_inverse(const MonotoneMap& classicize_m,
                                                 const Presheaf& p, const DirectImage& di);

struct FactorizationReport {
    bool pass = true;
    std::vector<std::string> checks;
    std::vector<std::string> failures;
};

// The three factorization facts: saturation^* quantize^* = quantize^*
// strictly, quantize_* saturation_* P iso to quantize_* P through the
// explicit transpose, and the direct-image unit being an isomorphism with
// its stated inverse.
FactorizationReport factorization_report(const ObservableSet& obs, const ContextPoset& cposet,
                                         const std::vector<NamedPresheaf>& classical_samples,
                                         const std::vector<NamedPresheaf>& quantum_samples,
                                         uint64_t guard = 10'000'000);

}  // namespace quantopos

#endif
