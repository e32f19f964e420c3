#include "quantopos/poset.hpp"

#include <algorithm>
#include <bit>

namespace quantopos {

size_t Bitset::count() const {
    size_t c = 0;
    for (uint64_t w : w_) c += static_cast<size_t>(std::popcount(w));
    return c;
}

bool Bitset::any() const {
    for (uint64_t w : w_) {
        if (w) return true;
    }
    return false;
}

bool Bitset::subset_of(const Bitset& other) const {
    for (size_t i = 0; i < w_.size(); ++i) {
        if (w_[i] & ~other.w_[i]) return false;
    }
    return true;
}

Bitset Bitset::operator&(const Bitset& other) const {
    Bitset out(n_);
    for (size_t i = 0; i < w_.size(); ++i) out.w_[i] = w_[i] & other.w_[i];
    return out;
}

Bitset Bitset::operator|(const Bitset& other) const {
    Bitset out(n_);
    for (size_t i = 0; i < w_.size(); ++i) out.w_[i] = w_[i] | other.w_[i];
    return out;
}

bool Bitset::operator<(const Bitset& other) const {
    // Lexicographic from the low words; any total order works as long as it
    // is stable across runs.
    return w_ < other.w_;
}

std::vector<std::pair<size_t, size_t>> FinitePoset::cover_pairs() const {
    std::vector<std::pair<size_t, size_t>> out;
    for (size_t v = 0; v < size(); ++v) {
        for (size_t u = 0; u < size(); ++u) {
            if (u == v || !leq(u, v)) continue;
            bool covered = true;
            for (size_t w = 0; w < size() && covered; ++w) {
                if (w != u && w != v && leq(u, w) && leq(w, v)) covered = false;
            }
            if (covered) out.emplace_back(u, v);
        }
    }
    return out;
}

std::vector<std::pair<size_t, size_t>> FinitePoset::strict_pairs() const {
    std::vector<std::pair<size_t, size_t>> out;
    for (size_t v = 0; v < size(); ++v) {
        for (size_t u = 0; u < size(); ++u) {
            if (u != v && leq(u, v)) out.emplace_back(u, v);
        }
    }
    return out;
}

std::vector<size_t> FinitePoset::maximal_strictly_below(size_t v) const {
    std::vector<size_t> out;
    for (size_t u = 0; u < size(); ++u) {
        if (u == v || !leq(u, v)) continue;
        bool maximal = true;
        for (size_t w = 0; w < size() && maximal; ++w) {
            if (w != u && w != v && leq(u, w) && leq(w, v)) maximal = false;
        }
        if (maximal) out.push_back(u);
    }
    return out;
}

FinitePoset make_poset(const std::vector<std::vector<bool>>& leq, std::vector<std::string> labels) {
    size_t n = leq.size();
    FinitePoset p;
    p.labels = std::move(labels);
    if (p.labels.size() != n) throw ShapeMismatch("make_poset: label count mismatch");
    p.down.assign(n, Bitset(n));
    for (size_t v = 0; v < n; ++v) {
        if (leq[v].size() != n) throw ShapeMismatch("make_poset: relation table is not square");
        for (size_t u = 0; u < n; ++u) {
            if (leq[u][v]) p.down[v].set(u);
        }
    }
    if (auto why = validate_poset(p)) throw ShapeMismatch("make_poset: " + *why);
    return p;
}

std::optional<std::string> validate_poset(const FinitePoset& p) {
    size_t n = p.size();
    for (size_t v = 0; v < n; ++v) {
        if (!p.leq(v, v)) return "relation is not reflexive at " + p.label(v);
    }
    for (size_t u = 0; u < n; ++u) {
        for (size_t v = 0; v < n; ++v) {
            if (u != v && p.leq(u, v) && p.leq(v, u)) {
                return "relation is not antisymmetric on (" + p.label(u) + ", " + p.label(v) + ")";
            }
        }
    }
    for (size_t u = 0; u < n; ++u) {
        for (size_t v = 0; v < n; ++v) {
            if (!p.leq(u, v)) continue;
            for (size_t w = 0; w < n; ++w) {
                if (p.leq(v, w) && !p.leq(u, w)) {
                    return "relation is not transitive through " + p.label(v);
                }
            }
        }
    }
    return std::nullopt;
}

bool sieve_valid(const FinitePoset& p, const Sieve& s) {
    if (s.at >= p.size() || s.members.universe() != p.size()) return false;
    if (!s.members.subset_of(p.down[s.at])) return false;
    for (size_t v = 0; v < p.size(); ++v) {
        if (!s.members.test(v)) continue;
        for (size_t u = 0; u < p.size(); ++u) {
            if (p.leq(u, v) && !s.members.test(u)) return false;
        }
    }
    return true;
}

Sieve maximal_sieve(const FinitePoset& p, size_t v) {
    if (v >= p.size()) throw UnknownObject("maximal_sieve: object index out of range");
    return Sieve{v, p.down[v]};
}

Sieve restrict_sieve(const FinitePoset& p, const Sieve& s, size_t v_smaller) {
    if (!p.leq(v_smaller, s.at)) {
        throw InvalidSieve("restrict_sieve: target is not below the sieve's object");
    }
    return Sieve{v_smaller, s.members & p.down[v_smaller]};
}

std::vector<Sieve> enumerate_sieves(const FinitePoset& p, size_t v, size_t max_downset) {
    if (v >= p.size()) throw UnknownObject("enumerate_sieves: object index out of range");
    std::vector<size_t> elems;
    for (size_t u = 0; u < p.size(); ++u) {
        if (p.leq(u, v)) elems.push_back(u);
    }
    if (elems.size() > max_downset) {
        throw SearchSpaceTooLarge("enumerate_sieves: principal downset too large");
    }
    std::vector<Sieve> out;
    for (uint64_t mask = 0; mask < (uint64_t{1} << elems.size()); ++mask) {
        Bitset members(p.size());
        for (size_t i = 0; i < elems.size(); ++i) {
            if (mask & (uint64_t{1} << i)) members.set(elems[i]);
        }
        bool closed = true;
        for (size_t i = 0; i < elems.size() && closed; ++i) {
            if (!members.test(elems[i])) continue;
            for (size_t j = 0; j < elems.size() && closed; ++j) {
                if (p.leq(elems[j], elems[i]) && !members.test(elems[j])) closed = false;
            }
        }
        if (closed) out.push_back(Sieve{v, std::move(members)});
    }
    std::sort(out.begin(), out.end(), [](const Sieve& a, const Sieve& b) {
        size_t ca = a.members.count(), cb = b.members.count();
        if (ca != cb) return ca < cb;
        return a.members < b.members;
    });
    return out;
}

}  // namespace quantopos
