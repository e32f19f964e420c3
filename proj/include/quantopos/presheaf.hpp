#ifndef QUANTOPOS_PRESHEAF_HPP
#define QUANTOPOS_PRESHEAF_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "quantopos/poset.hpp"

namespace quantopos {

// Set-valued presheaf on a finite poset. Fiber elements are interned ids
// with labels; restriction maps are index tables res[v][u] for u <= v.
struct Presheaf {
    FinitePoset poset;
    std::vector<std::vector<std::string>> elems;
    std::vector<std::vector<std::vector<uint32_t>>> res;

    size_t objects() const { return poset.size(); }
    size_t fiber_size(size_t v) const { return elems[v].size(); }
    uint32_t restricted(size_t v, size_t u, uint32_t e) const { return res[v][u][e]; }
};

// Componentwise map between fibers; pair it with its source and target.
struct NatTransform {
    std::vector<std::vector<uint32_t>> comp;

    bool operator==(const NatTransform& other) const { return comp == other.comp; }
};

// Componentwise subset of an ambient presheaf, closed under restriction.
struct Subobject {
    std::vector<Bitset> keep;
};

std::optional<std::string> validate_presheaf(const Presheaf& p);
std::optional<std::string> validate_nat(const Presheaf& source, const Presheaf& target,
                                        const NatTransform& t);
std::optional<std::string> validate_subobject(const Presheaf& ambient, const Subobject& s);

bool presheaf_equal(const Presheaf& a, const Presheaf& b);

NatTransform identity_transform(const Presheaf& p);
NatTransform compose_transforms(const NatTransform& first, const NatTransform& then);
bool transform_bijective(const Presheaf& source, const Presheaf& target, const NatTransform& t);

Presheaf terminal_presheaf(const FinitePoset& poset);
// The unique morphism into the terminal object.
NatTransform bang_transform(const Presheaf& p);

// Subobject classifier: fibers are all sieves, restriction is intersection.
struct Omega {
    Presheaf pre;
    std::vector<std::vector<Sieve>> sieves;
    std::vector<size_t> top_index;
    std::vector<size_t> empty_index;

    size_t index_of(size_t v, const Bitset& members) const;  // throws UnknownObject
};

Omega make_omega(const FinitePoset& poset, size_t max_downset = 24);
// true: 1 -> Omega, picking the maximal sieve in every fiber.
NatTransform true_transform(const Omega& omega);

// All natural transformations P -> Q in a deterministic order. Guarded by
// the raw candidate count before pruning.
std::vector<NatTransform> hom_enumerate(const Presheaf& p, const Presheaf& q,
                                        uint64_t guard = 10'000'000);

// Yoneda-style representable: the one-point subterminal on the downset of v.
Presheaf one_down(const FinitePoset& poset, size_t v);
// One-point presheaf supported exactly on a sieve; subobject of one_down.
Presheaf one_omega(const FinitePoset& poset, const Sieve& omega);

// Q restricted to the downset of v, as a subobject of Q.
Subobject q_down(const Presheaf& q, size_t v);

// Materializes a subobject as a presheaf plus the fiberwise index embedding.
struct SubPresheaf {
    Presheaf pre;
    std::vector<std::vector<uint32_t>> embed;
};
SubPresheaf subobject_presheaf(const Presheaf& ambient, const Subobject& s);
NatTransform inclusion_transform(const SubPresheaf& sub);

Subobject full_subobject(const Presheaf& q);
Subobject intersect_subobjects(const Subobject& a, const Subobject& b);
bool subobject_equal(const Subobject& a, const Subobject& b);
bool subobject_leq(const Subobject& a, const Subobject& b);

// chi_V(q) = {V' <= V : q|_{V'} in S(V')}, valued in Omega.
NatTransform characteristic_morphism(const Presheaf& q, const Subobject& s, const Omega& omega);
// Pullback of true along chi; inverts characteristic_morphism.
Subobject subobject_of_char(const Presheaf& q, const Omega& omega, const NatTransform& chi);

// Finite limits, computed fiberwise.
struct ProductPresheaf {
    Presheaf pre;
    NatTransform onto_first;
    NatTransform onto_second;
};
ProductPresheaf product(const Presheaf& p, const Presheaf& q);

struct PullbackPresheaf {
    Presheaf pre;
    NatTransform onto_first;
    NatTransform onto_second;
};
PullbackPresheaf pullback(const Presheaf& p, const Presheaf& q, const Presheaf& r,
                          const NatTransform& f, const NatTransform& g);

struct EqualizerPresheaf {
    Presheaf pre;
    NatTransform include;
};
EqualizerPresheaf equalizer(const Presheaf& p, const Presheaf& q, const NatTransform& f,
                            const NatTransform& g);

// R^Q with R^Q(V) = Hom(Q_{downset V}, R); keeps the witnessing transforms.
struct ExponentialPresheaf {
    Presheaf pre;
    std::vector<std::vector<NatTransform>> elements;
};
ExponentialPresheaf exponential(const Presheaf& q, const Presheaf& r,
                                uint64_t guard = 10'000'000);

// Currying of h : S x Q -> R into S -> R^Q, realizing the exponential
// bijection Hom(S x Q, R) = Hom(S, R^Q).
NatTransform curry_transform(const Presheaf& s, const Presheaf& q, const Presheaf& r,
                             const ExponentialPresheaf& power, const NatTransform& h);

std::optional<NatTransform> find_isomorphism(const Presheaf& p, const Presheaf& q,
                                             uint64_t guard = 10'000'000);

// All subobjects of Q, deterministic order; guarded by the candidate count.
std::vector<Subobject> enumerate_subobjects(const Presheaf& q, uint64_t guard = 1'000'000);

// Functorial by construction: elements are drawn from the limit of the
// already-built lower fibers, so restriction maps automatically commute.
Presheaf random_presheaf(const FinitePoset& poset, std::mt19937_64& rng, size_t max_fiber = 3);

std::string describe_transform(const Presheaf& source, const Presheaf& target,
                               const NatTransform& t);

}  // namespace quantopos

#endif
