#include "quantopos/geometric.hpp"

#include <algorithm>
#include <numeric>

namespace quantopos {

namespace {

struct UnionFind {
    std::vector<uint32_t> parent;

    explicit UnionFind(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

    uint32_t find(uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }

    void unite(uint32_t a, uint32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

void allocate_tables(Presheaf& p) {
    size_t n = p.poset.size();
    p.elems.resize(n);
    p.res.assign(n, std::vector<std::vector<uint32_t>>(n));
}

bool same_poset(const FinitePoset& a, const FinitePoset& b) {
    return a.size() == b.size() && a.down == b.down;
}

}  // namespace

MonotoneMap make_monotone_map(FinitePoset source, FinitePoset target, std::vector<size_t> map) {
    if (map.size() != source.size()) throw ShapeMismatch("make_monotone_map: table size mismatch");
    for (size_t v : map) {
        if (v >= target.size()) throw ShapeMismatch("make_monotone_map: image out of range");
    }
    for (size_t u = 0; u < source.size(); ++u) {
        for (size_t v = 0; v < source.size(); ++v) {
            if (source.leq(u, v) && !target.leq(map[u], map[v])) {
                throw ShapeMismatch("make_monotone_map: map is not order-preserving on (" +
                                    source.label(u) + ", " + source.label(v) + ")");
            }
        }
    }
    return MonotoneMap{std::move(source), std::move(target), std::move(map)};
}

MonotoneMap identity_map(const FinitePoset& poset) {
    std::vector<size_t> map(poset.size());
    std::iota(map.begin(), map.end(), 0);
    return MonotoneMap{poset, poset, std::move(map)};
}

MonotoneMap quantize_map(const ContextPoset& cposet, const ClassicalPoset& classical) {
    std::vector<size_t> map;
    for (const CommutativeContext& c : classical.contexts) {
        map.push_back(cposet.quantize_of[cposet.classical_index(c)]);
    }
    return make_monotone_map(classical.po, cposet.poset_view(), std::move(map));
}

MonotoneMap classicize_map(const ContextPoset& cposet, const ClassicalPoset& classical) {
    std::vector<size_t> map;
    for (size_t v = 0; v < cposet.size(); ++v) {
        const CommutativeContext& c = cposet.classical_of[v];
        bool found = false;
        for (size_t i = 0; i < classical.contexts.size() && !found; ++i) {
            if (classical.contexts[i] == c) {
                map.push_back(i);
                found = true;
            }
        }
        if (!found) {
            throw ProperCategoryMissing(
                "classicize_map: the chosen prequantization category misses classicize(" +
                cposet.names[v] + "); it does not contain the proper category");
        }
    }
    return make_monotone_map(cposet.poset_view(), classical.po, std::move(map));
}

MonotoneMap saturation_map(const ContextPoset& cposet, const ClassicalPoset& from,
                           const ClassicalPoset& proper) {
    std::vector<size_t> map;
    for (const CommutativeContext& c : from.contexts) {
        map.push_back(proper.index_of(saturate(cposet, c)));
    }
    return make_monotone_map(from.po, proper.po, std::move(map));
}

MonotoneMap inclusion_map(const ClassicalPoset& sub, const ClassicalPoset& super) {
    std::vector<size_t> map;
    for (const CommutativeContext& c : sub.contexts) {
        map.push_back(super.index_of(c));
    }
    return make_monotone_map(sub.po, super.po, std::move(map));
}

MonotoneMap core_endomap(const ContextPoset& cposet) {
    FinitePoset view = cposet.poset_view();
    return make_monotone_map(view, view, cposet.core_of);
}

Presheaf inverse_image(const MonotoneMap& f, const Presheaf& q) {
    if (!same_poset(f.target, q.poset)) {
        throw ShapeMismatch("inverse_image: presheaf does not live on the map's target");
    }
    Presheaf out;
    out.poset = f.source;
    allocate_tables(out);
    for (size_t c = 0; c < f.source.size(); ++c) {
        out.elems[c] = q.elems[f(c)];
    }
    for (size_t c = 0; c < f.source.size(); ++c) {
        for (size_t d = 0; d < f.source.size(); ++d) {
            if (!f.source.leq(d, c)) continue;
            out.res[c][d] = q.res[f(c)][f(d)];
        }
    }
    return out;
}

NatTransform inverse_image_transform(const MonotoneMap& f, const NatTransform& theta) {
    NatTransform out;
    out.comp.resize(f.source.size());
    for (size_t c = 0; c < f.source.size(); ++c) out.comp[c] = theta.comp[f(c)];
    return out;
}

size_t DirectImage::family_index(size_t v, const std::vector<int32_t>& picks) const {
    for (size_t i = 0; i < families[v].size(); ++i) {
        if (families[v][i] == picks) return i;
    }
    throw InternalCheckError("DirectImage: matching family not found in fiber");
}

DirectImage direct_image(const MonotoneMap& f, const Presheaf& p, uint64_t guard) {
    if (!same_poset(f.source, p.poset)) {
        throw ShapeMismatch("direct_image: presheaf does not live on the map's source");
    }
    DirectImage out;
    out.pre.poset = f.target;
    allocate_tables(out.pre);
    out.families.resize(f.target.size());

    for (size_t v = 0; v < f.target.size(); ++v) {
        Presheaf indicator = inverse_image(f, one_down(f.target, v));
        std::vector<NatTransform> homs = hom_enumerate(indicator, p, guard);
        for (const NatTransform& t : homs) {
            std::vector<int32_t> picks(f.source.size(), -1);
            for (size_t c = 0; c < f.source.size(); ++c) {
                if (!t.comp[c].empty()) picks[c] = static_cast<int32_t>(t.comp[c][0]);
            }
            out.families[v].push_back(std::move(picks));
        }
        for (size_t i = 0; i < out.families[v].size(); ++i) {
            out.pre.elems[v].push_back("s" + std::to_string(i));
        }
    }

    for (size_t v = 0; v < f.target.size(); ++v) {
        for (size_t u = 0; u < f.target.size(); ++u) {
            if (!f.target.leq(u, v)) continue;
            auto& table = out.pre.res[v][u];
            for (const auto& fam : out.families[v]) {
                std::vector<int32_t> cut(f.source.size(), -1);
                for (size_t c = 0; c < f.source.size(); ++c) {
                    if (f.target.leq(f(c), u)) cut[c] = fam[c];
                }
                table.push_back(static_cast<uint32_t>(out.family_index(u, cut)));
            }
        }
    }
    return out;
}

NatTransform direct_image_transform(const MonotoneMap& f, const NatTransform& theta,
                                    const Presheaf& p_to, const DirectImage& from,
                                    const DirectImage& to) {
    (void)p_to;
    NatTransform out;
    out.comp.resize(f.target.size());
    for (size_t v = 0; v < f.target.size(); ++v) {
        for (const auto& fam : from.families[v]) {
            std::vector<int32_t> image(f.source.size(), -1);
            for (size_t c = 0; c < f.source.size(); ++c) {
                if (fam[c] >= 0) image[c] = static_cast<int32_t>(theta.comp[c][fam[c]]);
            }
            out.comp[v].push_back(static_cast<uint32_t>(to.family_index(v, image)));
        }
    }
    return out;
}

uint32_t LeftKan::class_index(size_t v, size_t c, uint32_t p) const {
    for (size_t i = 0; i < nodes[v].size(); ++i) {
        if (nodes[v][i] == std::make_pair(c, p)) return class_of[v][i];
    }
    throw InternalCheckError("LeftKan: node not present in fiber");
}

LeftKan left_kan(const MonotoneMap& f, const Presheaf& p) {
    if (!same_poset(f.source, p.poset)) {
        throw ShapeMismatch("left_kan: presheaf does not live on the map's source");
    }
    LeftKan out;
    out.pre.poset = f.target;
    allocate_tables(out.pre);
    out.nodes.resize(f.target.size());
    out.class_of.resize(f.target.size());

    for (size_t v = 0; v < f.target.size(); ++v) {
        auto& nodes = out.nodes[v];
        for (size_t c = 0; c < f.source.size(); ++c) {
            if (!f.target.leq(v, f(c))) continue;
            for (uint32_t e = 0; e < p.fiber_size(c); ++e) nodes.emplace_back(c, e);
        }

        UnionFind dsu(nodes.size());
        for (size_t i = 0; i < nodes.size(); ++i) {
            for (size_t j = i + 1; j < nodes.size(); ++j) {
                auto [ci, pi] = nodes[i];
                auto [cj, pj] = nodes[j];
                bool related = false;
                for (size_t d = 0; d < f.source.size() && !related; ++d) {
                    if (f.source.leq(d, ci) && f.source.leq(d, cj) && f.target.leq(v, f(d)) &&
                        p.restricted(ci, d, pi) == p.restricted(cj, d, pj)) {
                        related = true;
                    }
                }
                if (related) dsu.unite(static_cast<uint32_t>(i), static_cast<uint32_t>(j));
            }
        }

        // Deterministic class numbering by first representative.
        std::vector<int32_t> class_id(nodes.size(), -1);
        uint32_t next = 0;
        out.class_of[v].resize(nodes.size());
        for (size_t i = 0; i < nodes.size(); ++i) {
            uint32_t root = dsu.find(static_cast<uint32_t>(i));
            if (class_id[root] < 0) {
                class_id[root] = static_cast<int32_t>(next++);
                auto [c, e] = nodes[root];
                out.pre.elems[v].push_back("[" + p.elems[c][e] + "," + p.poset.label(c) + "]");
            }
            out.class_of[v][i] = static_cast<uint32_t>(class_id[root]);
        }
    }

    for (size_t v = 0; v < f.target.size(); ++v) {
        for (size_t u = 0; u < f.target.size(); ++u) {
            if (!f.target.leq(u, v)) continue;
            auto& table = out.pre.res[v][u];
            table.assign(out.pre.fiber_size(v), 0);
            std::vector<bool> seen(out.pre.fiber_size(v), false);
            for (size_t i = 0; i < out.nodes[v].size(); ++i) {
                uint32_t cls = out.class_of[v][i];
                if (seen[cls]) continue;
                seen[cls] = true;
                auto [c, e] = out.nodes[v][i];
                table[cls] = out.class_index(u, c, e);
            }
        }
    }
    return out;
}

NatTransform left_kan_transform(const MonotoneMap& f, const NatTransform& theta,
                                const Presheaf& p_from, const LeftKan& from, const LeftKan& to) {
    (void)p_from;
    NatTransform out;
    out.comp.resize(f.target.size());
    for (size_t v = 0; v < f.target.size(); ++v) {
        out.comp[v].assign(from.pre.fiber_size(v), 0);
        std::vector<bool> seen(from.pre.fiber_size(v), false);
        for (size_t i = 0; i < from.nodes[v].size(); ++i) {
            uint32_t cls = from.class_of[v][i];
            if (seen[cls]) continue;
            seen[cls] = true;
            auto [c, e] = from.nodes[v][i];
            out.comp[v][cls] = to.class_index(v, c, theta.comp[c][e]);
        }
    }
    return out;
}

NatTransform direct_unit(const MonotoneMap& f, const Presheaf& q, const DirectImage& fstar_of_fq) {
    NatTransform out;
    out.comp.resize(f.target.size());
    for (size_t v = 0; v < f.target.size(); ++v) {
        for (uint32_t e = 0; e < q.fiber_size(v); ++e) {
            std::vector<int32_t> picks(f.source.size(), -1);
            for (size_t c = 0; c < f.source.size(); ++c) {
                if (f.target.leq(f(c), v)) {
                    picks[c] = static_cast<int32_t>(q.restricted(v, f(c), e));
                }
            }
            out.comp[v].push_back(static_cast<uint32_t>(fstar_of_fq.family_index(v, picks)));
        }
    }
    return out;
}

NatTransform kan_unit(const MonotoneMap& f, const Presheaf& p, const LeftKan& kan) {
    NatTransform out;
    out.comp.resize(f.source.size());
    for (size_t c = 0; c < f.source.size(); ++c) {
        for (uint32_t e = 0; e < p.fiber_size(c); ++e) {
            out.comp[c].push_back(kan.class_index(f(c), c, e));
        }
    }
    return out;
}

NatTransform transpose_to_source(const MonotoneMap& f, const Presheaf& p, const Presheaf& q,
                                 const DirectImage& di, const NatTransform& tau) {
    (void)p;
    NatTransform sigma;
    sigma.comp.resize(f.source.size());
    for (size_t c = 0; c < f.source.size(); ++c) {
        for (uint32_t e = 0; e < q.fiber_size(f(c)); ++e) {
            const auto& fam = di.families[f(c)][tau.comp[f(c)][e]];
            sigma.comp[c].push_back(static_cast<uint32_t>(fam[c]));
        }
    }
    return sigma;
}

NatTransform transpose_to_target(const MonotoneMap& f, const Presheaf& p, const Presheaf& q,
                                 const DirectImage& di, const NatTransform& sigma) {
    (void)p;
    NatTransform tau;
    tau.comp.resize(f.target.size());
    for (size_t v = 0; v < f.target.size(); ++v) {
        for (uint32_t e = 0; e < q.fiber_size(v); ++e) {
            std::vector<int32_t> picks(f.source.size(), -1);
            for (size_t c = 0; c < f.source.size(); ++c) {
                if (f.target.leq(f(c), v)) {
                    picks[c] = static_cast<int32_t>(sigma.comp[c][q.restricted(v, f(c), e)]);
                }
            }
            tau.comp[v].push_back(static_cast<uint32_t>(di.family_index(v, picks)));
        }
    }
    return tau;
}

NatTransform kan_transpose_to_target(const MonotoneMap& f, const Presheaf& p, const Presheaf& q,
                                     const LeftKan& kan, const NatTransform& nu) {
    NatTransform lambda;
    lambda.comp.resize(f.target.size());
    for (size_t v = 0; v < f.target.size(); ++v) {
        lambda.comp[v].assign(kan.pre.fiber_size(v), 0);
        std::vector<bool> seen(kan.pre.fiber_size(v), false);
        for (size_t i = 0; i < kan.nodes[v].size(); ++i) {
            uint32_t cls = kan.class_of[v][i];
            auto [c, e] = kan.nodes[v][i];
            // nu_C(p) restricted from f(C) down to v
            uint32_t value = q.restricted(f(c), v, nu.comp[c][e]);
            if (seen[cls]) {
                if (lambda.comp[v][cls] != value) {
                    throw InternalCheckError(
                        "kan_transpose_to_target: class members disagree; quotient is broken");
                }
            } else {
                seen[cls] = true;
                lambda.comp[v][cls] = value;
            }
        }
        (void)p;
    }
    return lambda;
}

NatTransform kan_transpose_to_source(const MonotoneMap& f, const Presheaf& p, const Presheaf& q,
                                     const LeftKan& kan, const NatTransform& lambda) {
    (void)q;
    NatTransform nu;
    nu.comp.resize(f.source.size());
    for (size_t c = 0; c < f.source.size(); ++c) {
        for (uint32_t e = 0; e < p.fiber_size(c); ++e) {
            nu.comp[c].push_back(lambda.comp[f(c)][kan.class_index(f(c), c, e)]);
        }
    }
    return nu;
}

namespace {

void record_failure(AdjunctionReport& report, const std::string& what) {
    report.pass = false;
    report.failures.push_back(what);
}

}  // namespace

AdjunctionReport adjunction_report(const MonotoneMap& f, const std::vector<NamedPresheaf>& sources,
                                   const std::vector<NamedPresheaf>& targets, uint64_t guard) {
    AdjunctionReport report;

    for (const NamedPresheaf& pn : sources) {
        const Presheaf& p = pn.pre;
        DirectImage di = direct_image(f, p, guard);
        LeftKan kan = left_kan(f, p);

        for (const NamedPresheaf& qn : targets) {
            const Presheaf& q = qn.pre;
            Presheaf fq = inverse_image(f, q);

            AdjunctionRecord rec;
            rec.p_name = pn.name;
            rec.q_name = qn.name;

            // inverse/direct adjunction
            std::vector<NatTransform> sigmas = hom_enumerate(fq, p, guard);
            std::vector<NatTransform> taus = hom_enumerate(q, di.pre, guard);
            rec.hom_inverse = sigmas.size();
            rec.hom_direct = taus.size();
            if (sigmas.size() != taus.size()) {
                record_failure(report, "Hom counts differ for (" + pn.name + ", " + qn.name +
                                           ") on the direct-image adjunction");
            } else {
                for (const NatTransform& tau : taus) {
                    NatTransform sigma = transpose_to_source(f, p, q, di, tau);
                    if (std::find(sigmas.begin(), sigmas.end(), sigma) == sigmas.end()) {
                        record_failure(report, "transpose of a direct-image morphism is not "
                                               "natural for (" + pn.name + ", " + qn.name + ")");
                        continue;
                    }
                    NatTransform back = transpose_to_target(f, p, q, di, sigma);
                    if (!(back == tau)) {
                        record_failure(report, "direct-image transposes are not mutually inverse "
                                               "for (" + pn.name + ", " + qn.name + ")");
                    }
                    // uniqueness of the triangle solution
                    size_t solutions = 0;
                    for (const NatTransform& s : sigmas) {
                        if (transpose_to_target(f, p, q, di, s) == tau) ++solutions;
                    }
                    if (solutions != 1) {
                        record_failure(report, "direct-image triangle has " +
                                                   std::to_string(solutions) + " solutions for (" +
                                                   pn.name + ", " + qn.name + ")");
                    }
                }
            }

            // Kan/inverse adjunction
            std::vector<NatTransform> lambdas = hom_enumerate(kan.pre, q, guard);
            std::vector<NatTransform> nus = hom_enumerate(p, fq, guard);
            rec.hom_kan = lambdas.size();
            rec.hom_source = nus.size();
            if (lambdas.size() != nus.size()) {
                record_failure(report, "Hom counts differ for (" + pn.name + ", " + qn.name +
                                           ") on the left-Kan adjunction");
            } else {
                for (const NatTransform& nu : nus) {
                    NatTransform lambda = kan_transpose_to_target(f, p, q, kan, nu);
                    if (std::find(lambdas.begin(), lambdas.end(), lambda) == lambdas.end()) {
                        record_failure(report, "Kan transpose is not natural for (" + pn.name +
                                                   ", " + qn.name + ")");
                        continue;
                    }
                    NatTransform back = kan_transpose_to_source(f, p, q, kan, lambda);
                    if (!(back == nu)) {
                        record_failure(report, "Kan transposes are not mutually inverse for (" +
                                                   pn.name + ", " + qn.name + ")");
                    }
                    size_t solutions = 0;
                    for (const NatTransform& l : lambdas) {
                        if (kan_transpose_to_source(f, p, q, kan, l) == nu) ++solutions;
                    }
                    if (solutions != 1) {
                        record_failure(report, "Kan triangle has " + std::to_string(solutions) +
                                                   " solutions for (" + pn.name + ", " + qn.name +
                                                   ")");
                    }
                }
            }
            report.records.push_back(rec);
        }

        // unit of the Kan adjunction is natural in P
        NatTransform mu = kan_unit(f, p, kan);
        Presheaf fkan = inverse_image(f, kan.pre);
        if (auto why = validate_nat(p, fkan, mu)) {
            record_failure(report, "kan unit not natural for " + pn.name + ": " + *why);
        }
    }

    // unit of the direct-image adjunction, checked on targets plus its
    // naturality against sampled morphisms between them
    std::vector<DirectImage> units;
    for (const NamedPresheaf& qn : targets) {
        Presheaf fq = inverse_image(f, qn.pre);
        DirectImage di = direct_image(f, fq, guard);
        NatTransform eta = direct_unit(f, qn.pre, di);
        if (auto why = validate_nat(qn.pre, di.pre, eta)) {
            record_failure(report, "direct unit not natural for " + qn.name + ": " + *why);
        }
        units.push_back(std::move(di));
    }
    for (size_t a = 0; a < targets.size(); ++a) {
        for (size_t b = 0; b < targets.size(); ++b) {
            std::vector<NatTransform> morphs = hom_enumerate(targets[a].pre, targets[b].pre, guard);
            size_t limit = std::min<size_t>(morphs.size(), 3);
            for (size_t m = 0; m < limit; ++m) {
                NatTransform ftheta = inverse_image_transform(f, morphs[m]);
                NatTransform pushed = direct_image_transform(
                    f, ftheta, inverse_image(f, targets[b].pre), units[a], units[b]);
                NatTransform eta_a = direct_unit(f, targets[a].pre, units[a]);
                NatTransform eta_b = direct_unit(f, targets[b].pre, units[b]);
                NatTransform lhs = compose_transforms(eta_a, pushed);
                NatTransform rhs = compose_transforms(morphs[m], eta_b);
                if (!(lhs == rhs)) {
                    record_failure(report, "direct unit is not natural between " + targets[a].name +
                                               " and " + targets[b].name);
                }
            }
        }
    }

    // left exactness of the inverse image on sampled finite limits
    {
        Presheaf term_t = terminal_presheaf(f.target);
        Presheaf term_s = terminal_presheaf(f.source);
        if (!presheaf_equal(inverse_image(f, term_t), term_s)) {
            record_failure(report, "inverse image does not preserve the terminal object");
        }
        for (size_t a = 0; a < targets.size(); ++a) {
            for (size_t b = a; b < targets.size(); ++b) {
                ProductPresheaf prod = product(targets[a].pre, targets[b].pre);
                ProductPresheaf prod_s =
                    product(inverse_image(f, targets[a].pre), inverse_image(f, targets[b].pre));
                if (!presheaf_equal(inverse_image(f, prod.pre), prod_s.pre)) {
                    record_failure(report, "inverse image does not preserve the product of " +
                                               targets[a].name + " and " + targets[b].name);
                }
            }
        }
        // pullbacks of sampled cospans into the terminal object and into the
        // first target
        if (!targets.empty()) {
            const Presheaf& r = targets.front().pre;
            for (size_t a = 0; a < targets.size(); ++a) {
                std::vector<NatTransform> fs = hom_enumerate(targets[a].pre, r, guard);
                for (size_t b = 0; b < targets.size(); ++b) {
                    std::vector<NatTransform> gs = hom_enumerate(targets[b].pre, r, guard);
                    if (fs.empty() || gs.empty()) continue;
                    PullbackPresheaf pb = pullback(targets[a].pre, targets[b].pre, r, fs.front(),
                                                   gs.front());
                    PullbackPresheaf pb_s = pullback(
                        inverse_image(f, targets[a].pre), inverse_image(f, targets[b].pre),
                        inverse_image(f, r), inverse_image_transform(f, fs.front()),
                        inverse_image_transform(f, gs.front()));
                    if (!presheaf_equal(inverse_image(f, pb.pre), pb_s.pre)) {
                        record_failure(report,
                                       "inverse image does not preserve the pullback over " +
                                           targets[a].name + " and " + targets[b].name);
                    }
                }
            }
        }
    }
    return report;
}

NatTransform direct_image_evaluation_iso(const MonotoneMap& classicize_m, const DirectImage& di) {
    NatTransform out;
    out.comp.resize(classicize_m.source.size());
    for (size_t v = 0; v < classicize_m.source.size(); ++v) {
        for (const auto& fam : di.families[v]) {
            int32_t pick = fam[classicize_m(v)];
            if (pick < 0) {
                throw ProperCategoryMissing(
                    "direct_image_evaluation_iso: family is not defined at classicize(V)");
            }
            out.comp[v].push_back(static_cast<uint32_t>(pick));
        }
    }
    return out;
}

NatTransform direct_image_evaluation_iso_inverse(const MonotoneMap& classicize_m, const Presheaf& p,
                                                 const DirectImage& di) {
    NatTransform out;
    out.comp.resize(classicize_m.source.size());
    for (size_t v = 0; v < classicize_m.source.size(); ++v) {
        size_t cv = classicize_m(v);
        for (uint32_t e = 0; e < p.fiber_size(cv); ++e) {
            std::vector<int32_t> picks(classicize_m.target.size(), -1);
            for (size_t c = 0; c < classicize_m.target.size(); ++c) {
                // support of the family: quantize(C) <= V iff C <= classicize(V)
                if (classicize_m.target.leq(c, cv)) {
                    picks[c] = static_cast<int32_t>(p.restricted(cv, c, e));
                }
            }
            out.comp[v].push_back(static_cast<uint32_t>(di.family_index(v, picks)));
        }
    }
    return out;
}

FactorizationReport factorization_report(const ObservableSet& obs, const ContextPoset& cposet,
                                         const std::vector<NamedPresheaf>& classical_samples,
                                         const std::vector<NamedPresheaf>& quantum_samples,
                                         uint64_t guard) {
    FactorizationReport report;
    auto fail = [&](const std::string& what) {
        report.pass = false;
        report.failures.push_back(what);
    };
    auto note = [&](const std::string& what) { report.checks.push_back(what); };

    ClassicalPoset full = make_classical_poset(obs, cposet.classical_objects);
    ClassicalPoset proper = make_classical_poset(obs, proper_category(cposet));
    MonotoneMap phi_full = quantize_map(cposet, full);
    MonotoneMap phi_proper = quantize_map(cposet, proper);
    MonotoneMap sharp = saturation_map(cposet, full, proper);

    // saturation^* quantize^* = quantize^*, strictly.
    for (const NamedPresheaf& qn : quantum_samples) {
        Presheaf via_proper = inverse_image(sharp, inverse_image(phi_proper, qn.pre));
        Presheaf direct = inverse_image(phi_full, qn.pre);
        if (presheaf_equal(via_proper, direct)) {
            note("saturation^* quantize^* = quantize^* on " + qn.name);
        } else {
            fail("saturation^* quantize^* != quantize^* on " + qn.name);
        }
    }

    for (const NamedPresheaf& pn : classical_samples) {
        // quantize_* saturation_* P iso to quantize_* P via the saturation
        // transpose.
        DirectImage sharp_p = direct_image(sharp, pn.pre, guard);
        DirectImage lhs = direct_image(phi_proper, sharp_p.pre, guard);
        DirectImage rhs = direct_image(phi_full, pn.pre, guard);
        bool ok = true;
        NatTransform iso;
        iso.comp.resize(cposet.size());
        for (size_t v = 0; v < cposet.size() && ok; ++v) {
            if (lhs.families[v].size() != rhs.families[v].size()) {
                ok = false;
                break;
            }
            std::vector<bool> hit(rhs.families[v].size(), false);
            for (const auto& fam : lhs.families[v]) {
                std::vector<int32_t> picks(full.contexts.size(), -1);
                for (size_t c = 0; c < full.contexts.size(); ++c) {
                    size_t a = sharp(c);
                    if (fam[a] < 0) continue;
                    picks[c] = sharp_p.families[a][fam[a]][c];
                }
                size_t target = rhs.family_index(v, picks);
                iso.comp[v].push_back(static_cast<uint32_t>(target));
                if (hit[target]) ok = false;
                hit[target] = true;
            }
        }
        if (ok) {
            ok = !validate_nat(lhs.pre, rhs.pre, iso).has_value();
        }
        if (ok) {
            note("quantize_* saturation_* iso quantize_* on " + pn.name);
        } else {
            fail("quantize_* saturation_* is not isomorphic to quantize_* on " + pn.name);
        }

        // eta at quantize_* P is an isomorphism with the stated inverse.
        Presheaf q = rhs.pre;  // quantize_* P on the context poset
        Presheaf fq = inverse_image(phi_full, q);
        DirectImage di2 = direct_image(phi_full, fq, guard);
        NatTransform eta = direct_unit(phi_full, q, di2);
        bool eta_ok = transform_bijective(q, di2.pre, eta);
        if (eta_ok) {
            // stated inverse: evaluate the family twice
            for (size_t v = 0; v < cposet.size() && eta_ok; ++v) {
                for (size_t i = 0; i < di2.families[v].size() && eta_ok; ++i) {
                    std::vector<int32_t> picks(full.contexts.size(), -1);
                    for (size_t c = 0; c < full.contexts.size(); ++c) {
                        int32_t outer = di2.families[v][i][c];
                        if (outer < 0) continue;
                        picks[c] = rhs.families[phi_full(c)][outer][c];
                    }
                    uint32_t inv = static_cast<uint32_t>(rhs.family_index(v, picks));
                    if (eta.comp[v][inv] != i) eta_ok = false;
                }
            }
        }
        if (eta_ok) {
            note("direct-image unit is an isomorphism at quantize_* " + pn.name);
        } else {
            fail("direct-image unit fails to invert at quantize_* " + pn.name);
        }
    }
    return report;
}

}  // namespace quantopos
