#ifndef QUANTOPOS_BRIDGE_HPP
#define QUANTOPOS_BRIDGE_HPP

#include <optional>
#include <string>
#include <vector>

#include "quantopos/observables.hpp"
#include "quantopos/poset.hpp"
#include "quantopos/star_algebra.hpp"

namespace quantopos {

// Quantization functor on a single context: the double commutant of
// {e^{ik a_hat}, e^{-ik a_hat} : a in C}. Monotone in C; commutative.
StarAlgebra quantize(const ObservableSet& obs, const CommutativeContext& c, double k = 1.0,
                     const Tolerance& tol = {});

// Classicization functor: the labels whose exponentials land in v.
// Throws NonCommutativePreimage when the preimage fails to commute.
CommutativeContext classicize(const ObservableSet& obs, const StarAlgebra& v, double k = 1.0,
                              const Tolerance& tol = {});

struct NamedGenerators {
    std::string name;
    std::vector<Mat> generators;
};

// Finite surrogate for the full context category: every quantize-image of a
// commutative subset, the user-declared extra contexts, and the scalars.
struct ContextPoset {
    std::vector<StarAlgebra> contexts;
    std::vector<std::string> names;
    std::vector<std::vector<bool>> leq;          // leq[u][v] : u included in v
    std::vector<size_t> core_of;                 // v -> quantize(classicize(v))
    std::vector<CommutativeContext> classical_of;  // v -> classicize(v)
    size_t bottom = 0;                           // index of the scalar algebra

    // All commutative subsets of O in canonical order, and where each lands.
    std::vector<CommutativeContext> classical_objects;
    std::vector<size_t> quantize_of;  // classical index -> context index

    size_t size() const { return contexts.size(); }
    bool is_leq(size_t u, size_t v) const { return leq[u][v]; }
    size_t classical_index(const CommutativeContext& c) const;  // throws UnknownObject

    FinitePoset poset_view() const;
};

ContextPoset build_context_poset(const ObservableSet& obs,
                                 const std::vector<NamedGenerators>& extras, double k = 1.0,
                                 const Tolerance& tol = {}, size_t max_classical = 4096);

std::optional<std::string> validate_context_poset(const ContextPoset& poset,
                                                  const Tolerance& tol = {});

// sharp = classicize . quantize, computed through the poset tables.
CommutativeContext saturate(const ContextPoset& poset, const CommutativeContext& c);

// Fixpoints of saturate: the proper prequantization category.
std::vector<CommutativeContext> proper_category(const ContextPoset& poset);

// Fixpoints of the core map: context indices with core_of[v] == v.
std::vector<size_t> core_fixed_contexts(const ContextPoset& poset);

struct GaloisViolation {
    std::string law;
    std::string witness;
};

struct GaloisReport {
    bool pass = true;
    std::vector<GaloisViolation> counterexamples;
};

// Exhaustively checks the adjunction equivalence, both unit inequalities,
// the triple identities, idempotence, the factorization through the proper
// category, and the order isomorphism between the two fixpoint sets.
GaloisReport galois_report(const ObservableSet& obs, const ContextPoset& poset,
                           const Tolerance& tol = {});

struct KInvarianceEntry {
    double k = 0;
    std::string context;
    bool equal = true;
    bool collision_flag = false;  // degenerate spectrum at this k (or at k=1)
};

struct KInvarianceReport {
    std::vector<KInvarianceEntry> entries;

    bool all_equal_or_flagged() const;
};

KInvarianceReport k_invariance_report(const ObservableSet& obs, const ContextPoset& poset,
                                      const std::vector<double>& ks, const Tolerance& tol = {});

// Poset of a chosen prequantization category (any subset of the commutative
// subsets of O), ordered by inclusion.
struct ClassicalPoset {
    std::vector<CommutativeContext> contexts;
    FinitePoset po;

    size_t index_of(const CommutativeContext& c) const;  // throws UnknownObject
};

ClassicalPoset make_classical_poset(const ObservableSet& obs,
                                    std::vector<CommutativeContext> contexts);

}  // namespace quantopos

#endif
