#include "quantopos/topology.hpp"

#include <algorithm>

namespace quantopos {

NatTransform LawvereTierneyTopology::as_transform() const {
    NatTransform t;
    t.comp = j;
    return t;
}

std::optional<std::string> validate_core_table(const FinitePoset& poset,
                                               const std::vector<size_t>& core) {
    if (core.size() != poset.size()) return "core table size mismatch";
    for (size_t v = 0; v < poset.size(); ++v) {
        if (core[v] >= poset.size()) return "core image out of range";
        if (!poset.leq(core[v], v)) return "core(" + poset.label(v) + ") is not below it";
        if (core[core[v]] != core[v]) return "core is not idempotent at " + poset.label(v);
    }
    for (size_t u = 0; u < poset.size(); ++u) {
        for (size_t v = 0; v < poset.size(); ++v) {
            if (poset.leq(u, v) && !poset.leq(core[u], core[v])) {
                return "core is not monotone on (" + poset.label(u) + ", " + poset.label(v) + ")";
            }
        }
    }
    return std::nullopt;
}

CoreTopology make_core_topology(const FinitePoset& poset, std::vector<size_t> core,
                                size_t max_downset) {
    if (auto why = validate_core_table(poset, core)) {
        throw ShapeMismatch("make_core_topology: " + *why);
    }
    CoreTopology top;
    top.poset = poset;
    top.core = std::move(core);
    top.core_map = make_monotone_map(poset, poset, top.core);
    top.omega = make_omega(poset, max_downset);
    top.J = grothendieck_from_core(top.omega, top.core);
    top.j = lt_from_core(top.omega, top.core);
    return top;
}

GrothendieckTopology grothendieck_from_core(const Omega& omega, const std::vector<size_t>& core) {
    GrothendieckTopology J;
    J.covering.resize(omega.sieves.size());
    for (size_t v = 0; v < omega.sieves.size(); ++v) {
        for (const Sieve& s : omega.sieves[v]) {
            J.covering[v].push_back(s.members.test(core[v]));
        }
    }
    return J;
}

LawvereTierneyTopology lt_from_core(const Omega& omega, const std::vector<size_t>& core) {
    LawvereTierneyTopology j;
    const FinitePoset& poset = omega.pre.poset;
    j.j.resize(poset.size());
    for (size_t v = 0; v < poset.size(); ++v) {
        for (const Sieve& s : omega.sieves[v]) {
            Bitset members(poset.size());
            for (size_t u = 0; u < poset.size(); ++u) {
                if (poset.leq(u, v) && s.members.test(core[u])) members.set(u);
            }
            j.j[v].push_back(static_cast<uint32_t>(omega.index_of(v, members)));
        }
    }
    return j;
}

GrothendieckTopology grothendieck_general(const Omega& omega,
                                          const std::vector<size_t>& quantize_images) {
    GrothendieckTopology J;
    const FinitePoset& poset = omega.pre.poset;
    J.covering.resize(poset.size());
    for (size_t v = 0; v < poset.size(); ++v) {
        for (const Sieve& s : omega.sieves[v]) {
            bool covers = true;
            for (size_t img : quantize_images) {
                if (poset.leq(img, v) && !s.members.test(img)) {
                    covers = false;
                    break;
                }
            }
            J.covering[v].push_back(covers);
        }
    }
    return J;
}

LawvereTierneyTopology lt_general(const Omega& omega, const std::vector<size_t>& quantize_images) {
    LawvereTierneyTopology j;
    const FinitePoset& poset = omega.pre.poset;
    j.j.resize(poset.size());
    for (size_t v = 0; v < poset.size(); ++v) {
        for (const Sieve& s : omega.sieves[v]) {
            Bitset members(poset.size());
            for (size_t u = 0; u < poset.size(); ++u) {
                if (!poset.leq(u, v)) continue;
                bool in = true;
                for (size_t img : quantize_images) {
                    if (poset.leq(img, u) && !s.members.test(img)) {
                        in = false;
                        break;
                    }
                }
                if (in) members.set(u);
            }
            j.j[v].push_back(static_cast<uint32_t>(omega.index_of(v, members)));
        }
    }
    return j;
}

std::optional<std::string> validate_grothendieck(const Omega& omega,
                                                 const GrothendieckTopology& J) {
    const FinitePoset& poset = omega.pre.poset;
    if (J.covering.size() != poset.size()) return "fiber count mismatch";
    for (size_t v = 0; v < poset.size(); ++v) {
        if (J.covering[v].size() != omega.sieves[v].size()) {
            return "sieve count mismatch at " + poset.label(v);
        }
        if (!J.covers(v, omega.top_index[v])) {
            return "maximal sieve not covering at " + poset.label(v);
        }
    }
    // subpresheaf: covering sieves restrict to covering sieves
    for (size_t v = 0; v < poset.size(); ++v) {
        for (size_t u = 0; u < poset.size(); ++u) {
            if (u == v || !poset.leq(u, v)) continue;
            for (size_t i = 0; i < omega.sieves[v].size(); ++i) {
                if (J.covers(v, i) && !J.covers(u, omega.pre.restricted(v, u, i))) {
                    return "covering sieves are not closed under restriction at " + poset.label(v);
                }
            }
        }
    }
    // transitivity axiom
    for (size_t v = 0; v < poset.size(); ++v) {
        for (size_t i = 0; i < omega.sieves[v].size(); ++i) {
            if (!J.covers(v, i)) continue;
            const Sieve& w = omega.sieves[v][i];
            for (size_t k = 0; k < omega.sieves[v].size(); ++k) {
                const Sieve& w2 = omega.sieves[v][k];
                bool all_local = true;
                for (size_t u = 0; u < poset.size() && all_local; ++u) {
                    if (!w.members.test(u)) continue;
                    size_t cut = omega.index_of(u, w2.members & poset.down[u]);
                    if (!J.covers(u, cut)) all_local = false;
                }
                if (all_local && !J.covers(v, k)) {
                    return "transitivity axiom fails at " + poset.label(v);
                }
            }
        }
    }
    return std::nullopt;
}

std::optional<std::string> validate_lawvere_tierney(const Omega& omega,
                                                    const LawvereTierneyTopology& j) {
    const FinitePoset& poset = omega.pre.poset;
    if (j.j.size() != poset.size()) return "component count mismatch";
    for (size_t v = 0; v < poset.size(); ++v) {
        if (j.j[v].size() != omega.sieves[v].size()) {
            return "component size mismatch at " + poset.label(v);
        }
    }
    if (auto why = validate_nat(omega.pre, omega.pre, j.as_transform())) {
        return "j is not natural: " + *why;
    }
    for (size_t v = 0; v < poset.size(); ++v) {
        if (j.j[v][omega.top_index[v]] != omega.top_index[v]) {
            return "j . true != true at " + poset.label(v);
        }
        for (size_t i = 0; i < omega.sieves[v].size(); ++i) {
            if (j.j[v][j.j[v][i]] != j.j[v][i]) {
                return "j . j != j at " + poset.label(v) + " on sieve " + omega.pre.elems[v][i];
            }
        }
        for (size_t a = 0; a < omega.sieves[v].size(); ++a) {
            for (size_t b = 0; b < omega.sieves[v].size(); ++b) {
                Bitset meet = omega.sieves[v][a].members & omega.sieves[v][b].members;
                size_t meet_idx = omega.index_of(v, meet);
                Bitset jmeet = omega.sieves[v][j.j[v][a]].members & omega.sieves[v][j.j[v][b]].members;
                if (omega.sieves[v][j.j[v][meet_idx]].members != jmeet) {
                    return "j does not preserve intersections at " + poset.label(v);
                }
            }
        }
    }
    return std::nullopt;
}

Subobject closure_core(const Presheaf& q, const Subobject& s, const std::vector<size_t>& core) {
    if (auto why = validate_subobject(q, s)) throw NotASubobject("closure_core: " + *why);
    Subobject out;
    out.keep.resize(q.objects());
    for (size_t v = 0; v < q.objects(); ++v) {
        out.keep[v] = Bitset(q.fiber_size(v));
        for (uint32_t e = 0; e < q.fiber_size(v); ++e) {
            if (s.keep[core[v]].test(q.restricted(v, core[v], e))) out.keep[v].set(e);
        }
    }
    return out;
}

Subobject closure_general(const Presheaf& q, const Subobject& s, const FinitePoset& poset,
                          const std::vector<size_t>& quantize_images) {
    if (auto why = validate_subobject(q, s)) throw NotASubobject("closure_general: " + *why);
    Subobject out;
    out.keep.resize(q.objects());
    for (size_t v = 0; v < q.objects(); ++v) {
        out.keep[v] = Bitset(q.fiber_size(v));
        for (uint32_t e = 0; e < q.fiber_size(v); ++e) {
            bool in = true;
            for (size_t img : quantize_images) {
                if (poset.leq(img, v) && !s.keep[img].test(q.restricted(v, img, e))) {
                    in = false;
                    break;
                }
            }
            if (in) out.keep[v].set(e);
        }
    }
    return out;
}

Subobject closure_from_j(const Presheaf& q, const Subobject& s, const Omega& omega,
                         const LawvereTierneyTopology& j) {
    NatTransform chi = characteristic_morphism(q, s, omega);
    NatTransform jchi = compose_transforms(chi, j.as_transform());
    return subobject_of_char(q, omega, jchi);
}

bool is_dense(const Presheaf& q, const Subobject& s, const std::vector<size_t>& core) {
    return subobject_equal(closure_core(q, s, core), full_subobject(q));
}

NatTransform core_unit(const Presheaf& q, const MonotoneMap& core_map) {
    NatTransform zeta;
    zeta.comp.resize(q.objects());
    for (size_t v = 0; v < q.objects(); ++v) {
        for (uint32_t e = 0; e < q.fiber_size(v); ++e) {
            zeta.comp[v].push_back(q.restricted(v, core_map(v), e));
        }
    }
    return zeta;
}

Presheaf sheafify(const Presheaf& q, const MonotoneMap& core_map) {
    return inverse_image(core_map, q);
}

TopologyAxiomReport topology_axiom_report(const FinitePoset& poset, const Omega& omega,
                                          const LawvereTierneyTopology& j,
                                          const GrothendieckTopology& J,
                                          uint64_t subobject_guard) {
    TopologyAxiomReport report;
    auto fail = [&](const std::string& what) {
        report.pass = false;
        report.failures.push_back(what);
    };
    auto note = [&](const std::string& what) { report.checks.push_back(what); };

    if (auto why = validate_lawvere_tierney(omega, j)) {
        fail("Lawvere-Tierney axioms: " + *why);
    } else {
        note("Lawvere-Tierney axioms hold fiberwise");
    }
    if (auto why = validate_grothendieck(omega, J)) {
        fail("Grothendieck axioms: " + *why);
    } else {
        note("Grothendieck axioms hold fiberwise");
    }

    // classifying square: J is exactly the pullback of true along j
    {
        bool ok = true;
        for (size_t v = 0; v < poset.size() && ok; ++v) {
            for (size_t i = 0; i < omega.sieves[v].size() && ok; ++i) {
                bool fixed_to_top = j.j[v][i] == omega.top_index[v];
                if (fixed_to_top != J.covers(v, i)) ok = false;
            }
        }
        if (ok) {
            note("classifying square for J is a pullback");
        } else {
            fail("classifying square: j^{-1}(true) differs from J");
        }
    }

    // round trip j -> closure -> J -> j, exact
    try {
        Subobject one_in_omega;
        one_in_omega.keep.resize(poset.size());
        for (size_t v = 0; v < poset.size(); ++v) {
            one_in_omega.keep[v] = Bitset(omega.pre.fiber_size(v));
            one_in_omega.keep[v].set(omega.top_index[v]);
        }
        Subobject closed = closure_from_j(omega.pre, one_in_omega, omega, j);
        GrothendieckTopology J2;
        J2.covering.resize(poset.size());
        for (size_t v = 0; v < poset.size(); ++v) {
            for (size_t i = 0; i < omega.pre.fiber_size(v); ++i) {
                J2.covering[v].push_back(closed.keep[v].test(i));
            }
        }
        bool same_J = J2.covering == J.covering;

        // characteristic morphism of J2 inside Omega
        LawvereTierneyTopology j2;
        j2.j.resize(poset.size());
        for (size_t v = 0; v < poset.size(); ++v) {
            for (size_t i = 0; i < omega.sieves[v].size(); ++i) {
                Bitset members(poset.size());
                for (size_t u = 0; u < poset.size(); ++u) {
                    if (!poset.leq(u, v)) continue;
                    uint32_t cut = omega.pre.restricted(v, u, static_cast<uint32_t>(i));
                    if (J2.covers(u, cut)) members.set(u);
                }
                j2.j[v].push_back(static_cast<uint32_t>(omega.index_of(v, members)));
            }
        }
        if (same_J && j2.j == j.j) {
            note("round trip j -> closure -> J -> j is exact");
        } else {
            fail(same_J ? "round trip: characteristic morphism of J differs from j"
                        : "round trip: closure of the terminal differs from J");
        }
    } catch (const Error& e) {
        fail(std::string("round trip broke down: ") + e.what());
    }

    // closure laws on the subobjects of Omega itself
    try {
        std::vector<Subobject> subs;
        try {
            subs = enumerate_subobjects(omega.pre, subobject_guard);
        } catch (const SearchSpaceTooLarge&) {
            subs = {full_subobject(omega.pre)};
        }
        bool grow = true, idem = true, meets = true;
        for (const Subobject& s : subs) {
            Subobject closed = closure_from_j(omega.pre, s, omega, j);
            if (!subobject_leq(s, closed)) grow = false;
            if (!subobject_equal(closure_from_j(omega.pre, closed, omega, j), closed)) {
                idem = false;
            }
        }
        size_t limit = std::min<size_t>(subs.size(), 32);
        for (size_t a = 0; a < limit; ++a) {
            for (size_t b = 0; b < limit; ++b) {
                Subobject meet = intersect_subobjects(subs[a], subs[b]);
                Subobject lhs = closure_from_j(omega.pre, meet, omega, j);
                Subobject rhs = intersect_subobjects(closure_from_j(omega.pre, subs[a], omega, j),
                                                     closure_from_j(omega.pre, subs[b], omega, j));
                if (!subobject_equal(lhs, rhs)) meets = false;
            }
        }
        if (grow && idem && meets) {
            note("closure operator laws hold on " + std::to_string(subs.size()) + " subobjects");
        } else {
            if (!grow) fail("closure law S <= closure(S) fails");
            if (!idem) fail("closure law closure(closure(S)) = closure(S) fails");
            if (!meets) fail("closure law closure(S and T) = closure(S) and closure(T) fails");
        }
    } catch (const Error& e) {
        fail(std::string("closure computation broke down: ") + e.what());
    }
    return report;
}

std::optional<std::string> coarsening_check(const Omega& omega, const GrothendieckTopology& j1,
                                            const GrothendieckTopology& j2, bool expect_equal) {
    for (size_t v = 0; v < omega.sieves.size(); ++v) {
        for (size_t i = 0; i < omega.sieves[v].size(); ++i) {
            if (j2.covers(v, i) && !j1.covers(v, i)) {
                return "J2 is not contained in J1 at " + omega.pre.poset.label(v) + " on sieve " +
                       omega.pre.elems[v][i];
            }
            if (expect_equal && j1.covers(v, i) && !j2.covers(v, i)) {
                return "expected equal topologies, J1 has extra covering sieve " +
                       omega.pre.elems[v][i] + " at " + omega.pre.poset.label(v);
            }
        }
    }
    return std::nullopt;
}

ExternalWitness fixpoint_witness(const FinitePoset& poset, const std::vector<size_t>& core) {
    std::vector<size_t> fixed;
    for (size_t v = 0; v < poset.size(); ++v) {
        if (core[v] == v) fixed.push_back(v);
    }
    FinitePoset sub;
    sub.down.assign(fixed.size(), Bitset(fixed.size()));
    for (size_t a = 0; a < fixed.size(); ++a) {
        sub.labels.push_back(poset.label(fixed[a]));
        for (size_t b = 0; b < fixed.size(); ++b) {
            if (poset.leq(fixed[b], fixed[a])) sub.down[a].set(b);
        }
    }
    return ExternalWitness{make_monotone_map(std::move(sub), poset, fixed)};
}

SheafVerdict is_sheaf(const Presheaf& r, const CoreTopology& top, const ExternalWitness& ext,
                      uint64_t guard) {
    SheafVerdict verdict;

    // criterion 1: zeta is a fiberwise bijection
    Presheaf core_r = sheafify(r, top.core_map);
    NatTransform zeta = core_unit(r, top.core_map);
    verdict.zeta_iso = transform_bijective(r, core_r, zeta);

    // criterion 2: unique extension along 1_omega -> 1_downset(V) for every
    // covering sieve
    verdict.j_sheaf_extension = true;
    for (size_t v = 0; v < top.poset.size() && verdict.j_sheaf_extension; ++v) {
        std::vector<NatTransform> from_down = hom_enumerate(one_down(top.poset, v), r, guard);
        for (size_t i = 0; i < top.omega.sieves[v].size(); ++i) {
            if (!top.J.covers(v, i)) continue;
            const Sieve& w = top.omega.sieves[v][i];
            std::vector<NatTransform> from_sieve = hom_enumerate(one_omega(top.poset, w), r, guard);
            if (from_sieve.size() != from_down.size()) {
                verdict.j_sheaf_extension = false;
                break;
            }
            // precomposition with the dense inclusion must be a bijection
            std::vector<bool> hit(from_sieve.size(), false);
            for (const NatTransform& alpha : from_down) {
                NatTransform cut;
                cut.comp.resize(top.poset.size());
                for (size_t u = 0; u < top.poset.size(); ++u) {
                    if (w.members.test(u)) cut.comp[u] = alpha.comp[u];
                }
                auto it = std::find(from_sieve.begin(), from_sieve.end(), cut);
                if (it == from_sieve.end()) {
                    verdict.j_sheaf_extension = false;
                    break;
                }
                size_t idx = static_cast<size_t>(it - from_sieve.begin());
                if (hit[idx]) {
                    verdict.j_sheaf_extension = false;
                    break;
                }
                hit[idx] = true;
            }
        }
    }

    // criterion 3: the direct-image unit with witness inverse_image(quantize, R)
    Presheaf fr = inverse_image(ext.quantize, r);
    DirectImage di = direct_image(ext.quantize, fr, guard);
    NatTransform eta = direct_unit(ext.quantize, r, di);
    verdict.external_phi_star = transform_bijective(r, di.pre, eta);

    verdict.agree = (verdict.zeta_iso == verdict.j_sheaf_extension) &&
                    (verdict.zeta_iso == verdict.external_phi_star);
    if (!verdict.agree) {
        throw InternalCheckError(
            "is_sheaf: the three sheaf criteria disagree (zeta=" +
            std::to_string(verdict.zeta_iso) +
            ", extension=" + std::to_string(verdict.j_sheaf_extension) +
            ", external=" + std::to_string(verdict.external_phi_star) + ")");
    }
    return verdict;
}

SheafVerdict is_sheaf(const Presheaf& r, const CoreTopology& top, uint64_t guard) {
    return is_sheaf(r, top, fixpoint_witness(top.poset, top.core), guard);
}

SheafClassifier sheaf_classifier(const CoreTopology& top) {
    Subobject keep;
    keep.keep.resize(top.poset.size());
    for (size_t v = 0; v < top.poset.size(); ++v) {
        keep.keep[v] = Bitset(top.omega.pre.fiber_size(v));
        for (size_t i = 0; i < top.omega.pre.fiber_size(v); ++i) {
            if (top.j.j[v][i] == i) keep.keep[v].set(i);
        }
    }
    return SheafClassifier{subobject_presheaf(top.omega.pre, keep)};
}

NatTransform classifier_core_inverse(const CoreTopology& top, const SheafClassifier& cls) {
    const Presheaf& oj = cls.sub.pre;
    Presheaf core_oj = sheafify(oj, top.core_map);
    NatTransform rho;
    rho.comp.resize(top.poset.size());
    for (size_t v = 0; v < top.poset.size(); ++v) {
        size_t cv = top.core[v];
        for (uint32_t e = 0; e < core_oj.fiber_size(v); ++e) {
            // e names a j-fixed sieve at core(V); lift it to V
            const Sieve& w = top.omega.sieves[cv][cls.sub.embed[cv][e]];
            Bitset members(top.poset.size());
            for (size_t u = 0; u < top.poset.size(); ++u) {
                if (top.poset.leq(u, v) && w.members.test(top.core[u])) members.set(u);
            }
            size_t target = top.omega.index_of(v, members);
            bool found = false;
            for (uint32_t i = 0; i < oj.fiber_size(v) && !found; ++i) {
                if (cls.sub.embed[v][i] == target) {
                    rho.comp[v].push_back(i);
                    found = true;
                }
            }
            if (!found) {
                throw InternalCheckError("classifier_core_inverse: lifted sieve is not j-fixed");
            }
        }
    }
    return rho;
}

ClassificationReport closed_subobject_classification(const Presheaf& r, const CoreTopology& top,
                                                     const SheafClassifier& cls, uint64_t guard) {
    ClassificationReport report;
    auto fail = [&](const std::string& what) {
        report.pass = false;
        report.failures.push_back(what);
    };

    std::vector<Subobject> subs = enumerate_subobjects(r, guard);
    std::vector<size_t> closed_indices;
    for (size_t i = 0; i < subs.size(); ++i) {
        bool closed = subobject_equal(closure_core(r, subs[i], top.core), subs[i]);
        SubPresheaf sp = subobject_presheaf(r, subs[i]);
        NatTransform zeta = core_unit(sp.pre, top.core_map);
        bool subsheaf = transform_bijective(sp.pre, sheafify(sp.pre, top.core_map), zeta);
        if (closed != subsheaf) {
            fail("subobject #" + std::to_string(i) + " is closed=" + std::to_string(closed) +
                 " but subsheaf=" + std::to_string(subsheaf));
        }
        if (closed) {
            closed_indices.push_back(i);
            ++report.closed_subobjects;
        }
        if (subsheaf) ++report.subsheaves;
    }

    // j-fixed characteristic morphisms, matched one-to-one with the closed
    // subobjects and with Hom(R, Omega_j)
    std::vector<NatTransform> fixed_chars;
    for (size_t i : closed_indices) {
        NatTransform chi = characteristic_morphism(r, subs[i], top.omega);
        NatTransform jchi = compose_transforms(chi, top.j.as_transform());
        if (!(jchi == chi)) {
            fail("characteristic morphism of a closed subobject is not j-fixed");
            continue;
        }
        if (std::find(fixed_chars.begin(), fixed_chars.end(), chi) != fixed_chars.end()) {
            fail("two closed subobjects share a characteristic morphism");
        }
        fixed_chars.push_back(std::move(chi));
    }
    for (const NatTransform& chi : hom_enumerate(r, top.omega.pre, guard)) {
        NatTransform jchi = compose_transforms(chi, top.j.as_transform());
        if (jchi == chi) {
            ++report.fixed_characteristics;
            Subobject s = subobject_of_char(r, top.omega, chi);
            if (!subobject_equal(closure_core(r, s, top.core), s)) {
                fail("a j-fixed characteristic morphism classifies a non-closed subobject");
            }
        }
    }
    if (report.fixed_characteristics != report.closed_subobjects) {
        fail("closed subobjects and j-fixed characteristic morphisms do not biject");
    }

    std::vector<NatTransform> into_classifier = hom_enumerate(r, cls.sub.pre, guard);
    if (into_classifier.size() != report.closed_subobjects) {
        fail("Hom(R, Omega_j) has " + std::to_string(into_classifier.size()) +
             " elements but there are " + std::to_string(report.closed_subobjects) +
             " closed subobjects");
    } else {
        // corestriction realizes the bijection
        for (const NatTransform& chi : fixed_chars) {
            NatTransform corestrict;
            corestrict.comp.resize(r.objects());
            bool ok = true;
            for (size_t v = 0; v < r.objects() && ok; ++v) {
                for (uint32_t e = 0; e < r.fiber_size(v) && ok; ++e) {
                    bool found = false;
                    for (uint32_t i = 0; i < cls.sub.pre.fiber_size(v); ++i) {
                        if (cls.sub.embed[v][i] == chi.comp[v][e]) {
                            corestrict.comp[v].push_back(i);
                            found = true;
                            break;
                        }
                    }
                    if (!found) ok = false;
                }
            }
            if (!ok || std::find(into_classifier.begin(), into_classifier.end(), corestrict) ==
                           into_classifier.end()) {
                fail("a j-fixed characteristic morphism does not factor through Omega_j");
            }
        }
    }
    return report;
}

ComonadReport comonad_report(const FinitePoset& poset, const std::vector<size_t>& core,
                             const std::optional<std::vector<size_t>>& expected_fixed) {
    ComonadReport report;
    auto fail = [&](const std::string& what) {
        report.pass = false;
        report.failures.push_back(what);
    };

    if (core.size() != poset.size()) {
        fail("core table size mismatch");
        return report;
    }
    for (size_t v = 0; v < poset.size(); ++v) {
        if (core[v] >= poset.size()) {
            fail("core image out of range at " + poset.label(v));
            continue;
        }
        // counit: the inclusion core(V) <= V must exist
        if (!poset.leq(core[v], v)) {
            fail("counit fails: core(" + poset.label(v) + ") = " + poset.label(core[v]) +
                 " is not below it");
        }
        // comultiplication is the identity, which needs core^2 = core
        if (core[core[v]] != core[v]) {
            fail("comultiplication fails: core is not idempotent at " + poset.label(v));
        }
    }
    for (size_t u = 0; u < poset.size(); ++u) {
        for (size_t v = 0; v < poset.size(); ++v) {
            if (poset.leq(u, v) && !poset.leq(core[u], core[v])) {
                fail("core is not functorial on (" + poset.label(u) + ", " + poset.label(v) + ")");
            }
        }
    }
    for (size_t v = 0; v < poset.size(); ++v) {
        if (core[v] == v) report.fixed.push_back(v);
    }
    if (expected_fixed && report.fixed != *expected_fixed) {
        fail("co-Eilenberg-Moore fixpoints disagree with the context poset");
    }
    return report;
}

}  // namespace quantopos
