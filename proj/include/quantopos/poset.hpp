#ifndef QUANTOPOS_POSET_HPP
#define QUANTOPOS_POSET_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quantopos/errors.hpp"

namespace quantopos {

// Fixed-universe bitset; sieve fibers can get large, so set operations stay
// O(words).
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    size_t universe() const { return n_; }
    void set(size_t i) { w_[i >> 6] |= (uint64_t{1} << (i & 63)); }
    void reset(size_t i) { w_[i >> 6] &= ~(uint64_t{1} << (i & 63)); }
    bool test(size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }

    size_t count() const;
    bool any() const;
    bool subset_of(const Bitset& other) const;

    Bitset operator&(const Bitset& other) const;
    Bitset operator|(const Bitset& other) const;
    bool operator==(const Bitset& other) const { return n_ == other.n_ && w_ == other.w_; }
    bool operator!=(const Bitset& other) const { return !(*this == other); }
    // Total order used for canonical sieve enumeration.
    bool operator<(const Bitset& other) const;

private:
    size_t n_ = 0;
    std::vector<uint64_t> w_;
};

// Finite poset with objects 0..size-1; down[v] is the principal downset of v.
struct FinitePoset {
    std::vector<Bitset> down;
    std::vector<std::string> labels;

    size_t size() const { return down.size(); }
    bool leq(size_t a, size_t b) const { return down[b].test(a); }
    const std::string& label(size_t v) const { return labels[v]; }

    // Hasse edges (u, v) with u covered by v.
    std::vector<std::pair<size_t, size_t>> cover_pairs() const;
    // All strict pairs (u, v) with u < v.
    std::vector<std::pair<size_t, size_t>> strict_pairs() const;
    // Maximal elements of the strict downset of v.
    std::vector<size_t> maximal_strictly_below(size_t v) const;
};

// Builds from a reflexive relation table; validates the poset axioms.
FinitePoset make_poset(const std::vector<std::vector<bool>>& leq, std::vector<std::string> labels);

std::optional<std::string> validate_poset(const FinitePoset& p);

// Downward-closed subset of the principal downset of an object.
struct Sieve {
    size_t at = 0;
    Bitset members;
};

bool sieve_valid(const FinitePoset& p, const Sieve& s);
Sieve maximal_sieve(const FinitePoset& p, size_t v);
Sieve restrict_sieve(const FinitePoset& p, const Sieve& s, size_t v_smaller);

// All sieves at v, ordered by (size, bit pattern). Guarded: throws
// SearchSpaceTooLarge when the principal downset exceeds max_downset.
std::vector<Sieve> enumerate_sieves(const FinitePoset& p, size_t v, size_t max_downset = 24);

}  // namespace quantopos

#endif
