#include "quantopos/presheaf.hpp"

#include <algorithm>

namespace quantopos {

namespace {

// Linear extension: u <= v implies u comes first.
std::vector<size_t> topo_order(const FinitePoset& poset) {
    std::vector<size_t> order(poset.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return poset.down[a].count() < poset.down[b].count();
    });
    return order;
}

void allocate_tables(Presheaf& p) {
    size_t n = p.poset.size();
    p.elems.resize(n);
    p.res.assign(n, std::vector<std::vector<uint32_t>>(n));
}

// Checks the naturality square of t on the single order pair u <= v.
bool natural_on_pair(const Presheaf& p, const Presheaf& q, const NatTransform& t, size_t u,
                     size_t v) {
    for (uint32_t e = 0; e < p.fiber_size(v); ++e) {
        if (q.restricted(v, u, t.comp[v][e]) != t.comp[u][p.restricted(v, u, e)]) return false;
    }
    return true;
}

uint64_t saturating_mul(uint64_t a, uint64_t b) {
    if (a == 0 || b == 0) return 0;
    if (a > UINT64_MAX / b) return UINT64_MAX;
    return a * b;
}

uint64_t saturating_pow(uint64_t base, uint64_t exp) {
    uint64_t out = 1;
    for (uint64_t i = 0; i < exp; ++i) out = saturating_mul(out, base);
    return out;
}

}  // namespace

std::optional<std::string> validate_presheaf(const Presheaf& p) {
    size_t n = p.poset.size();
    if (p.elems.size() != n || p.res.size() != n) return "fiber/restriction table size mismatch";
    for (size_t v = 0; v < n; ++v) {
        if (p.res[v].size() != n) return "restriction table row size mismatch";
        for (size_t u = 0; u < n; ++u) {
            if (!p.poset.leq(u, v)) continue;
            if (p.res[v][u].size() != p.fiber_size(v)) {
                return "missing restriction map for (" + p.poset.label(u) + " <= " +
                       p.poset.label(v) + ")";
            }
            for (uint32_t e = 0; e < p.fiber_size(v); ++e) {
                if (p.res[v][u][e] >= p.fiber_size(u)) {
                    return "restriction image out of range at (" + p.poset.label(u) + " <= " +
                           p.poset.label(v) + ")";
                }
            }
        }
    }
    for (size_t v = 0; v < n; ++v) {
        for (uint32_t e = 0; e < p.fiber_size(v); ++e) {
            if (p.res[v][v][e] != e) {
                return "restriction along " + p.poset.label(v) + " <= " + p.poset.label(v) +
                       " is not the identity";
            }
        }
    }
    for (size_t v = 0; v < n; ++v) {
        for (size_t u = 0; u < n; ++u) {
            if (u == v || !p.poset.leq(u, v)) continue;
            for (size_t w = 0; w < n; ++w) {
                if (w == u || !p.poset.leq(w, u)) continue;
                for (uint32_t e = 0; e < p.fiber_size(v); ++e) {
                    if (p.res[u][w][p.res[v][u][e]] != p.res[v][w][e]) {
                        return "restrictions do not compose through " + p.poset.label(u) +
                               " between " + p.poset.label(w) + " and " + p.poset.label(v);
                    }
                }
            }
        }
    }
    return std::nullopt;
}

std::optional<std::string> validate_nat(const Presheaf& source, const Presheaf& target,
                                        const NatTransform& t) {
    size_t n = source.poset.size();
    if (target.poset.size() != n) return "source and target posets differ in size";
    if (t.comp.size() != n) return "component count mismatch";
    for (size_t v = 0; v < n; ++v) {
        if (t.comp[v].size() != source.fiber_size(v)) {
            return "component size mismatch at " + source.poset.label(v);
        }
        for (uint32_t e : t.comp[v]) {
            if (e >= target.fiber_size(v)) return "component image out of range";
        }
    }
    for (size_t v = 0; v < n; ++v) {
        for (size_t u = 0; u < n; ++u) {
            if (u == v || !source.poset.leq(u, v)) continue;
            if (!natural_on_pair(source, target, t, u, v)) {
                return "naturality fails on (" + source.poset.label(u) + " <= " +
                       source.poset.label(v) + ")";
            }
        }
    }
    return std::nullopt;
}

std::optional<std::string> validate_subobject(const Presheaf& ambient, const Subobject& s) {
    size_t n = ambient.poset.size();
    if (s.keep.size() != n) return "fiber count mismatch";
    for (size_t v = 0; v < n; ++v) {
        if (s.keep[v].universe() != ambient.fiber_size(v)) {
            return "fiber mask size mismatch at " + ambient.poset.label(v);
        }
    }
    for (size_t v = 0; v < n; ++v) {
        for (size_t u = 0; u < n; ++u) {
            if (u == v || !ambient.poset.leq(u, v)) continue;
            for (uint32_t e = 0; e < ambient.fiber_size(v); ++e) {
                if (s.keep[v].test(e) && !s.keep[u].test(ambient.restricted(v, u, e))) {
                    return "not closed under restriction on (" + ambient.poset.label(u) +
                           " <= " + ambient.poset.label(v) + ")";
                }
            }
        }
    }
    return std::nullopt;
}

bool presheaf_equal(const Presheaf& a, const Presheaf& b) {
    if (a.poset.size() != b.poset.size()) return false;
    for (size_t v = 0; v < a.poset.size(); ++v) {
        if (a.poset.down[v] != b.poset.down[v]) return false;
    }
    return a.elems == b.elems && a.res == b.res;
}

NatTransform identity_transform(const Presheaf& p) {
    NatTransform t;
    t.comp.resize(p.objects());
    for (size_t v = 0; v < p.objects(); ++v) {
        t.comp[v].resize(p.fiber_size(v));
        for (uint32_t e = 0; e < p.fiber_size(v); ++e) t.comp[v][e] = e;
    }
    return t;
}

NatTransform compose_transforms(const NatTransform& first, const NatTransform& then) {
    NatTransform out;
    out.comp.resize(first.comp.size());
    for (size_t v = 0; v < first.comp.size(); ++v) {
        out.comp[v].resize(first.comp[v].size());
        for (size_t e = 0; e < first.comp[v].size(); ++e) {
            out.comp[v][e] = then.comp[v][first.comp[v][e]];
        }
    }
    return out;
}

bool transform_bijective(const Presheaf& source, const Presheaf& target, const NatTransform& t) {
    for (size_t v = 0; v < source.objects(); ++v) {
        if (source.fiber_size(v) != target.fiber_size(v)) return false;
        std::vector<bool> hit(target.fiber_size(v), false);
        for (uint32_t e : t.comp[v]) {
            if (hit[e]) return false;
            hit[e] = true;
        }
    }
    return true;
}

Presheaf terminal_presheaf(const FinitePoset& poset) {
    Presheaf p;
    p.poset = poset;
    allocate_tables(p);
    for (size_t v = 0; v < poset.size(); ++v) {
        p.elems[v] = {"pt"};
        for (size_t u = 0; u < poset.size(); ++u) {
            if (poset.leq(u, v)) p.res[v][u] = {0};
        }
    }
    return p;
}

NatTransform bang_transform(const Presheaf& p) {
    NatTransform t;
    t.comp.resize(p.objects());
    for (size_t v = 0; v < p.objects(); ++v) t.comp[v].assign(p.fiber_size(v), 0);
    return t;
}

size_t Omega::index_of(size_t v, const Bitset& members) const {
    for (size_t i = 0; i < sieves[v].size(); ++i) {
        if (sieves[v][i].members == members) return i;
    }
    throw UnknownObject("Omega::index_of: sieve not present in fiber");
}

Omega make_omega(const FinitePoset& poset, size_t max_downset) {
    Omega omega;
    omega.pre.poset = poset;
    allocate_tables(omega.pre);
    omega.sieves.resize(poset.size());
    omega.top_index.resize(poset.size());
    omega.empty_index.resize(poset.size());
    for (size_t v = 0; v < poset.size(); ++v) {
        omega.sieves[v] = enumerate_sieves(poset, v, max_downset);
        for (size_t i = 0; i < omega.sieves[v].size(); ++i) {
            const Sieve& s = omega.sieves[v][i];
            std::string label = "{";
            bool first = true;
            for (size_t u = 0; u < poset.size(); ++u) {
                if (!s.members.test(u)) continue;
                if (!first) label += ",";
                label += poset.label(u);
                first = false;
            }
            label += "}";
            omega.pre.elems[v].push_back(label);
            if (s.members == poset.down[v]) omega.top_index[v] = i;
            if (!s.members.any()) omega.empty_index[v] = i;
        }
    }
    for (size_t v = 0; v < poset.size(); ++v) {
        for (size_t u = 0; u < poset.size(); ++u) {
            if (!poset.leq(u, v)) continue;
            auto& table = omega.pre.res[v][u];
            table.resize(omega.sieves[v].size());
            for (size_t i = 0; i < omega.sieves[v].size(); ++i) {
                Bitset cut = omega.sieves[v][i].members & poset.down[u];
                table[i] = static_cast<uint32_t>(omega.index_of(u, cut));
            }
        }
    }
    return omega;
}

NatTransform true_transform(const Omega& omega) {
    NatTransform t;
    t.comp.resize(omega.pre.objects());
    for (size_t v = 0; v < omega.pre.objects(); ++v) {
        t.comp[v] = {static_cast<uint32_t>(omega.top_index[v])};
    }
    return t;
}

std::vector<NatTransform> hom_enumerate(const Presheaf& p, const Presheaf& q, uint64_t guard) {
    if (p.poset.size() != q.poset.size() || p.poset.down != q.poset.down) {
        throw ShapeMismatch("hom_enumerate: presheaves live on different posets");
    }
    size_t n = p.poset.size();

    uint64_t candidates = 1;
    for (size_t v = 0; v < n; ++v) {
        if (p.fiber_size(v) > 0 && q.fiber_size(v) == 0) return {};
        candidates = saturating_mul(candidates, saturating_pow(q.fiber_size(v), p.fiber_size(v)));
    }
    if (candidates > guard) {
        throw SearchSpaceTooLarge("hom_enumerate: " + std::to_string(candidates) +
                                  " candidates exceed the guard");
    }

    std::vector<NatTransform> out;
    NatTransform current;
    current.comp.assign(n, {});

    // Depth-first over objects; each level assigns the full component map at
    // one object and prunes against every comparable assigned object.
    auto assign = [&](auto&& self, size_t v) -> void {
        if (v == n) {
            out.push_back(current);
            return;
        }
        size_t fp = p.fiber_size(v);
        size_t fq = q.fiber_size(v);
        std::vector<uint32_t> pick(fp, 0);
        while (true) {
            current.comp[v].assign(pick.begin(), pick.end());
            bool ok = true;
            for (size_t u = 0; u < v && ok; ++u) {
                if (p.poset.leq(u, v)) ok = natural_on_pair(p, q, current, u, v);
                if (ok && p.poset.leq(v, u)) ok = natural_on_pair(p, q, current, v, u);
            }
            if (ok) self(self, v + 1);
            // odometer step
            size_t i = 0;
            while (i < fp) {
                if (++pick[i] < fq) break;
                pick[i] = 0;
                ++i;
            }
            if (i == fp) break;
            if (fp == 0) break;
        }
        current.comp[v].clear();
    };
    assign(assign, 0);
    return out;
}

Presheaf one_down(const FinitePoset& poset, size_t v) {
    if (v >= poset.size()) throw UnknownObject("one_down: object index out of range");
    return one_omega(poset, maximal_sieve(poset, v));
}

Presheaf one_omega(const FinitePoset& poset, const Sieve& omega) {
    if (!sieve_valid(poset, omega)) throw InvalidSieve("one_omega: not a valid sieve");
    Presheaf p;
    p.poset = poset;
    allocate_tables(p);
    for (size_t v = 0; v < poset.size(); ++v) {
        if (omega.members.test(v)) p.elems[v] = {"pt"};
        for (size_t u = 0; u < poset.size(); ++u) {
            if (!poset.leq(u, v)) continue;
            if (omega.members.test(v)) {
                // downward closure guarantees u is in the sieve as well
                p.res[v][u] = {0};
            } else {
                p.res[v][u] = {};
            }
        }
    }
    return p;
}

Subobject q_down(const Presheaf& q, size_t v) {
    if (v >= q.poset.size()) throw UnknownObject("q_down: object index out of range");
    Subobject s;
    s.keep.resize(q.objects());
    for (size_t u = 0; u < q.objects(); ++u) {
        s.keep[u] = Bitset(q.fiber_size(u));
        if (q.poset.leq(u, v)) {
            for (uint32_t e = 0; e < q.fiber_size(u); ++e) s.keep[u].set(e);
        }
    }
    return s;
}

SubPresheaf subobject_presheaf(const Presheaf& ambient, const Subobject& s) {
    if (auto why = validate_subobject(ambient, s)) {
        throw NotASubobject("subobject_presheaf: " + *why);
    }
    SubPresheaf out;
    out.pre.poset = ambient.poset;
    allocate_tables(out.pre);
    out.embed.resize(ambient.objects());
    std::vector<std::vector<uint32_t>> back(ambient.objects());
    for (size_t v = 0; v < ambient.objects(); ++v) {
        back[v].assign(ambient.fiber_size(v), UINT32_MAX);
        for (uint32_t e = 0; e < ambient.fiber_size(v); ++e) {
            if (!s.keep[v].test(e)) continue;
            back[v][e] = static_cast<uint32_t>(out.embed[v].size());
            out.embed[v].push_back(e);
            out.pre.elems[v].push_back(ambient.elems[v][e]);
        }
    }
    for (size_t v = 0; v < ambient.objects(); ++v) {
        for (size_t u = 0; u < ambient.objects(); ++u) {
            if (!ambient.poset.leq(u, v)) continue;
            auto& table = out.pre.res[v][u];
            for (uint32_t e : out.embed[v]) {
                table.push_back(back[u][ambient.restricted(v, u, e)]);
            }
        }
    }
    return out;
}

NatTransform inclusion_transform(const SubPresheaf& sub) {
    NatTransform t;
    t.comp.resize(sub.embed.size());
    for (size_t v = 0; v < sub.embed.size(); ++v) t.comp[v] = sub.embed[v];
    return t;
}

Subobject full_subobject(const Presheaf& q) {
    Subobject s;
    s.keep.resize(q.objects());
    for (size_t v = 0; v < q.objects(); ++v) {
        s.keep[v] = Bitset(q.fiber_size(v));
        for (uint32_t e = 0; e < q.fiber_size(v); ++e) s.keep[v].set(e);
    }
    return s;
}

Subobject intersect_subobjects(const Subobject& a, const Subobject& b) {
    Subobject out;
    out.keep.resize(a.keep.size());
    for (size_t v = 0; v < a.keep.size(); ++v) out.keep[v] = a.keep[v] & b.keep[v];
    return out;
}

bool subobject_equal(const Subobject& a, const Subobject& b) { return a.keep == b.keep; }

bool subobject_leq(const Subobject& a, const Subobject& b) {
    for (size_t v = 0; v < a.keep.size(); ++v) {
        if (!a.keep[v].subset_of(b.keep[v])) return false;
    }
    return true;
}

NatTransform characteristic_morphism(const Presheaf& q, const Subobject& s, const Omega& omega) {
    if (auto why = validate_subobject(q, s)) {
        throw NotASubobject("characteristic_morphism: " + *why);
    }
    NatTransform chi;
    chi.comp.resize(q.objects());
    for (size_t v = 0; v < q.objects(); ++v) {
        chi.comp[v].resize(q.fiber_size(v));
        for (uint32_t e = 0; e < q.fiber_size(v); ++e) {
            Bitset members(q.poset.size());
            for (size_t u = 0; u < q.poset.size(); ++u) {
                if (q.poset.leq(u, v) && s.keep[u].test(q.restricted(v, u, e))) members.set(u);
            }
            chi.comp[v][e] = static_cast<uint32_t>(omega.index_of(v, members));
        }
    }
    return chi;
}

Subobject subobject_of_char(const Presheaf& q, const Omega& omega, const NatTransform& chi) {
    Subobject s;
    s.keep.resize(q.objects());
    for (size_t v = 0; v < q.objects(); ++v) {
        s.keep[v] = Bitset(q.fiber_size(v));
        for (uint32_t e = 0; e < q.fiber_size(v); ++e) {
            if (chi.comp[v][e] == omega.top_index[v]) s.keep[v].set(e);
        }
    }
    return s;
}

ProductPresheaf product(const Presheaf& p, const Presheaf& q) {
    if (p.poset.size() != q.poset.size()) {
        throw MalformedDiagram("product: presheaves live on different posets");
    }
    ProductPresheaf out;
    out.pre.poset = p.poset;
    allocate_tables(out.pre);
    out.onto_first.comp.resize(p.objects());
    out.onto_second.comp.resize(p.objects());
    for (size_t v = 0; v < p.objects(); ++v) {
        for (uint32_t i = 0; i < p.fiber_size(v); ++i) {
            for (uint32_t j = 0; j < q.fiber_size(v); ++j) {
                out.pre.elems[v].push_back("(" + p.elems[v][i] + "," + q.elems[v][j] + ")");
                out.onto_first.comp[v].push_back(i);
                out.onto_second.comp[v].push_back(j);
            }
        }
    }
    for (size_t v = 0; v < p.objects(); ++v) {
        size_t qs = q.fiber_size(v);
        for (size_t u = 0; u < p.objects(); ++u) {
            if (!p.poset.leq(u, v)) continue;
            auto& table = out.pre.res[v][u];
            size_t qu = q.fiber_size(u);
            for (uint32_t i = 0; i < p.fiber_size(v); ++i) {
                for (uint32_t j = 0; j < qs; ++j) {
                    table.push_back(static_cast<uint32_t>(p.restricted(v, u, i) * qu +
                                                          q.restricted(v, u, j)));
                }
            }
        }
    }
    return out;
}

PullbackPresheaf pullback(const Presheaf& p, const Presheaf& q, const Presheaf& r,
                          const NatTransform& f, const NatTransform& g) {
    if (validate_nat(p, r, f) || validate_nat(q, r, g)) {
        throw MalformedDiagram("pullback: legs are not valid transforms into the corner");
    }
    PullbackPresheaf out;
    out.pre.poset = p.poset;
    allocate_tables(out.pre);
    out.onto_first.comp.resize(p.objects());
    out.onto_second.comp.resize(p.objects());
    std::vector<std::vector<uint32_t>> pair_index(p.objects());
    for (size_t v = 0; v < p.objects(); ++v) {
        pair_index[v].assign(p.fiber_size(v) * std::max<size_t>(q.fiber_size(v), 1), UINT32_MAX);
        for (uint32_t i = 0; i < p.fiber_size(v); ++i) {
            for (uint32_t j = 0; j < q.fiber_size(v); ++j) {
                if (f.comp[v][i] != g.comp[v][j]) continue;
                pair_index[v][i * q.fiber_size(v) + j] =
                    static_cast<uint32_t>(out.pre.elems[v].size());
                out.pre.elems[v].push_back("(" + p.elems[v][i] + "," + q.elems[v][j] + ")");
                out.onto_first.comp[v].push_back(i);
                out.onto_second.comp[v].push_back(j);
            }
        }
    }
    for (size_t v = 0; v < p.objects(); ++v) {
        for (size_t u = 0; u < p.objects(); ++u) {
            if (!p.poset.leq(u, v)) continue;
            auto& table = out.pre.res[v][u];
            for (size_t e = 0; e < out.pre.elems[v].size(); ++e) {
                uint32_t i = out.onto_first.comp[v][e];
                uint32_t j = out.onto_second.comp[v][e];
                uint32_t iu = p.restricted(v, u, i);
                uint32_t ju = q.restricted(v, u, j);
                table.push_back(pair_index[u][iu * q.fiber_size(u) + ju]);
            }
        }
    }
    return out;
}

EqualizerPresheaf equalizer(const Presheaf& p, const Presheaf& q, const NatTransform& f,
                            const NatTransform& g) {
    if (validate_nat(p, q, f) || validate_nat(p, q, g)) {
        throw MalformedDiagram("equalizer: arrows are not parallel transforms");
    }
    EqualizerPresheaf out;
    Subobject keep;
    keep.keep.resize(p.objects());
    for (size_t v = 0; v < p.objects(); ++v) {
        keep.keep[v] = Bitset(p.fiber_size(v));
        for (uint32_t e = 0; e < p.fiber_size(v); ++e) {
            if (f.comp[v][e] == g.comp[v][e]) keep.keep[v].set(e);
        }
    }
    SubPresheaf sub = subobject_presheaf(p, keep);
    out.pre = std::move(sub.pre);
    out.include = inclusion_transform(sub);
    return out;
}

namespace {

// Restricts a transform out of Q_{downset v} to Q_{downset u}.
NatTransform mask_transform(const NatTransform& t, const FinitePoset& poset, size_t u) {
    NatTransform out;
    out.comp.resize(t.comp.size());
    for (size_t w = 0; w < t.comp.size(); ++w) {
        if (poset.leq(w, u)) out.comp[w] = t.comp[w];
    }
    return out;
}

}  // namespace

ExponentialPresheaf exponential(const Presheaf& q, const Presheaf& r, uint64_t guard) {
    if (q.poset.size() != r.poset.size()) {
        throw MalformedDiagram("exponential: presheaves live on different posets");
    }
    ExponentialPresheaf out;
    out.pre.poset = q.poset;
    allocate_tables(out.pre);
    out.elements.resize(q.objects());
    for (size_t v = 0; v < q.objects(); ++v) {
        SubPresheaf down = subobject_presheaf(q, q_down(q, v));
        std::vector<NatTransform> homs = hom_enumerate(down.pre, r, guard);
        // down.pre shares ambient fiber indices on the downset of v, because
        // q_down keeps whole fibers there; components can be read directly.
        out.elements[v] = std::move(homs);
        for (size_t i = 0; i < out.elements[v].size(); ++i) {
            out.pre.elems[v].push_back("g" + std::to_string(i));
        }
    }
    for (size_t v = 0; v < q.objects(); ++v) {
        for (size_t u = 0; u < q.objects(); ++u) {
            if (!q.poset.leq(u, v)) continue;
            auto& table = out.pre.res[v][u];
            for (const NatTransform& t : out.elements[v]) {
                NatTransform cut = mask_transform(t, q.poset, u);
                auto it = std::find(out.elements[u].begin(), out.elements[u].end(), cut);
                if (it == out.elements[u].end()) {
                    throw InternalCheckError("exponential: restricted transform not found");
                }
                table.push_back(static_cast<uint32_t>(it - out.elements[u].begin()));
            }
        }
    }
    return out;
}

NatTransform curry_transform(const Presheaf& s, const Presheaf& q, const Presheaf& r,
                             const ExponentialPresheaf& power, const NatTransform& h) {
    (void)r;
    NatTransform out;
    out.comp.resize(s.objects());
    for (size_t v = 0; v < s.objects(); ++v) {
        for (uint32_t x = 0; x < s.fiber_size(v); ++x) {
            // the partial application of h to x, as a transform Q_{downset v} -> R
            NatTransform applied;
            applied.comp.resize(s.objects());
            for (size_t w = 0; w < s.objects(); ++w) {
                if (!s.poset.leq(w, v)) continue;
                uint32_t xw = s.restricted(v, w, x);
                for (uint32_t e = 0; e < q.fiber_size(w); ++e) {
                    // product fibers are enumerated row-major over (S, Q)
                    applied.comp[w].push_back(
                        h.comp[w][xw * static_cast<uint32_t>(q.fiber_size(w)) + e]);
                }
            }
            auto it = std::find(power.elements[v].begin(), power.elements[v].end(), applied);
            if (it == power.elements[v].end()) {
                throw InternalCheckError("curry_transform: partial application is not natural");
            }
            out.comp[v].push_back(static_cast<uint32_t>(it - power.elements[v].begin()));
        }
    }
    return out;
}

std::optional<NatTransform> find_isomorphism(const Presheaf& p, const Presheaf& q,
                                             uint64_t guard) {
    for (size_t v = 0; v < p.objects(); ++v) {
        if (p.fiber_size(v) != q.fiber_size(v)) return std::nullopt;
    }
    for (const NatTransform& t : hom_enumerate(p, q, guard)) {
        if (transform_bijective(p, q, t)) {
            // a fiberwise bijective transform between presheaves on a poset
            // automatically has a natural inverse
            return t;
        }
    }
    return std::nullopt;
}

std::vector<Subobject> enumerate_subobjects(const Presheaf& q, uint64_t guard) {
    uint64_t candidates = 1;
    for (size_t v = 0; v < q.objects(); ++v) {
        candidates = saturating_mul(candidates, saturating_pow(2, q.fiber_size(v)));
    }
    if (candidates > guard) {
        throw SearchSpaceTooLarge("enumerate_subobjects: candidate count exceeds guard");
    }
    std::vector<Subobject> out;
    Subobject current;
    current.keep.assign(q.objects(), Bitset(0));

    auto assign = [&](auto&& self, size_t v) -> void {
        if (v == q.objects()) {
            out.push_back(current);
            return;
        }
        size_t f = q.fiber_size(v);
        for (uint64_t mask = 0; mask < (uint64_t{1} << f); ++mask) {
            Bitset bits(f);
            for (size_t e = 0; e < f; ++e) {
                if (mask & (uint64_t{1} << e)) bits.set(e);
            }
            current.keep[v] = bits;
            bool ok = true;
            for (size_t u = 0; u <= v && ok; ++u) {
                if (u != v && q.poset.leq(u, v)) {
                    for (uint32_t e = 0; e < f && ok; ++e) {
                        if (current.keep[v].test(e) &&
                            !current.keep[u].test(q.restricted(v, u, e))) {
                            ok = false;
                        }
                    }
                }
                if (u != v && q.poset.leq(v, u)) {
                    for (uint32_t e = 0; e < q.fiber_size(u) && ok; ++e) {
                        if (current.keep[u].test(e) &&
                            !current.keep[v].test(q.restricted(u, v, e))) {
                            ok = false;
                        }
                    }
                }
            }
            if (ok) self(self, v + 1);
        }
        current.keep[v] = Bitset(0);
    };
    assign(assign, 0);
    return out;
}

Presheaf random_presheaf(const FinitePoset& poset, std::mt19937_64& rng, size_t max_fiber) {
    Presheaf p;
    p.poset = poset;
    allocate_tables(p);

    for (size_t v : topo_order(poset)) {
        std::vector<size_t> preds = poset.maximal_strictly_below(v);

        // Elements of the limit over the already-built strict downset:
        // tuples of picks at the maximal predecessors that agree on every
        // common lower object.
        std::vector<std::vector<uint32_t>> tuples;
        std::vector<uint32_t> tuple(preds.size(), 0);
        auto fill = [&](auto&& self, size_t i) -> void {
            if (i == preds.size()) {
                tuples.push_back(tuple);
                return;
            }
            for (uint32_t e = 0; e < p.fiber_size(preds[i]); ++e) {
                tuple[i] = e;
                bool ok = true;
                for (size_t j = 0; j < i && ok; ++j) {
                    for (size_t w = 0; w < poset.size() && ok; ++w) {
                        if (poset.leq(w, preds[i]) && poset.leq(w, preds[j]) &&
                            p.restricted(preds[i], w, e) !=
                                p.restricted(preds[j], w, tuple[j])) {
                            ok = false;
                        }
                    }
                }
                if (ok) self(self, i + 1);
            }
        };
        fill(fill, 0);

        // Mostly nonempty fibers, occasionally empty; non-injective
        // restrictions arise whenever two elements share a tuple.
        size_t want = 0;
        uint64_t roll = rng() % 10;
        if (roll == 0) {
            want = 0;
        } else {
            want = 1 + static_cast<size_t>(rng() % max_fiber);
        }
        if (tuples.empty()) want = 0;

        std::vector<std::vector<uint32_t>> chosen;
        for (size_t e = 0; e < want; ++e) {
            chosen.push_back(tuples[rng() % tuples.size()]);
            p.elems[v].push_back("e" + std::to_string(e));
        }

        for (size_t u = 0; u < poset.size(); ++u) {
            if (!poset.leq(u, v)) continue;
            auto& table = p.res[v][u];
            for (size_t e = 0; e < chosen.size(); ++e) {
                if (u == v) {
                    table.push_back(static_cast<uint32_t>(e));
                    continue;
                }
                uint32_t image = UINT32_MAX;
                for (size_t i = 0; i < preds.size(); ++i) {
                    if (poset.leq(u, preds[i])) {
                        image = p.restricted(preds[i], u, chosen[e][i]);
                        break;
                    }
                }
                table.push_back(image);
            }
        }
    }
    return p;
}

std::string describe_transform(const Presheaf& source, const Presheaf& target,
                               const NatTransform& t) {
    std::string out;
    for (size_t v = 0; v < source.objects(); ++v) {
        if (source.fiber_size(v) == 0) continue;
        if (!out.empty()) out += "; ";
        out += source.poset.label(v) + ":";
        for (uint32_t e = 0; e < source.fiber_size(v); ++e) {
            if (e) out += ",";
            out += source.elems[v][e] + "->" + target.elems[v][t.comp[v][e]];
        }
    }
    return out.empty() ? "(empty)" : out;
}

}  // namespace quantopos
