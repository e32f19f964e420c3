#include "quantopos/bridge.hpp"

#include <algorithm>

namespace quantopos {

StarAlgebra quantize(const ObservableSet& obs, const CommutativeContext& c, double k,
                     const Tolerance& tol) {
    std::vector<Mat> unitaries;
    for (size_t i : c.members) {
        Mat u = hermitian_exp(obs.matrix_of(i), k, tol);
        unitaries.push_back(u);
        unitaries.push_back(u.adjoint());
    }
    return double_commutant(obs.dim, unitaries, tol, /*require_commutative=*/true);
}

CommutativeContext classicize(const ObservableSet& obs, const StarAlgebra& v, double k,
                              const Tolerance& tol) {
    CommutativeContext c;
    for (size_t i = 0; i < obs.size(); ++i) {
        if (algebra_membership(v, hermitian_exp(obs.matrix_of(i), k, tol), tol)) {
            c.members.push_back(i);
        }
    }
    if (!context_is_commutative(obs, c, tol)) {
        throw NonCommutativePreimage(
            "classicize: preimage of " + std::to_string(v.rank()) +
            "-dimensional algebra is not pairwise commuting (quantization map is unfaithful)");
    }
    return c;
}

size_t ContextPoset::classical_index(const CommutativeContext& c) const {
    for (size_t i = 0; i < classical_objects.size(); ++i) {
        if (classical_objects[i] == c) return i;
    }
    throw UnknownObject("ContextPoset: context is not a commutative subset of O");
}

FinitePoset ContextPoset::poset_view() const {
    FinitePoset p;
    p.labels = names;
    p.down.assign(size(), Bitset(size()));
    for (size_t v = 0; v < size(); ++v) {
        for (size_t u = 0; u < size(); ++u) {
            if (leq[u][v]) p.down[v].set(u);
        }
    }
    return p;
}

ContextPoset build_context_poset(const ObservableSet& obs,
                                 const std::vector<NamedGenerators>& extras, double k,
                                 const Tolerance& tol, size_t max_classical) {
    validate_observable_set(obs, tol);
    ContextPoset poset;
    poset.classical_objects = enumerate_commutative_subsets(obs, tol);
    if (poset.classical_objects.size() > max_classical) {
        throw TooManyObservables("build_context_poset: too many commutative subsets");
    }

    auto add_context = [&](StarAlgebra alg, const std::string& name) -> size_t {
        for (size_t i = 0; i < poset.contexts.size(); ++i) {
            if (span_equal(poset.contexts[i], alg, tol)) return i;
        }
        poset.contexts.push_back(std::move(alg));
        poset.names.push_back(name);
        return poset.contexts.size() - 1;
    };

    poset.quantize_of.resize(poset.classical_objects.size());
    for (size_t ci = 0; ci < poset.classical_objects.size(); ++ci) {
        const CommutativeContext& c = poset.classical_objects[ci];
        StarAlgebra alg = quantize(obs, c, k, tol);
        std::string name;
        if (alg.rank() == 1) {
            name = "CI";
        } else {
            std::vector<std::string> labels;
            for (size_t m : c.members) labels.push_back(obs.label_of(m));
            std::sort(labels.begin(), labels.end());
            name = "V(";
            for (size_t i = 0; i < labels.size(); ++i) {
                if (i) name += ",";
                name += labels[i];
            }
            name += ")";
        }
        poset.quantize_of[ci] = add_context(std::move(alg), name);
    }
    for (const NamedGenerators& extra : extras) {
        StarAlgebra alg = generated_star_algebra(obs.dim, extra.generators, tol);
        add_context(std::move(alg), extra.name);
    }
    // The scalars are quantize(empty set), so they already sit in the list.
    {
        CommutativeContext empty;
        poset.bottom = poset.quantize_of[poset.classical_index(empty)];
    }

    size_t n = poset.contexts.size();
    poset.leq.assign(n, std::vector<bool>(n, false));
    for (size_t u = 0; u < n; ++u) {
        for (size_t v = 0; v < n; ++v) {
            poset.leq[u][v] = span_leq(poset.contexts[u], poset.contexts[v], tol);
        }
    }

    poset.classical_of.resize(n);
    poset.core_of.resize(n);
    for (size_t v = 0; v < n; ++v) {
        poset.classical_of[v] = classicize(obs, poset.contexts[v], k, tol);
        size_t ci = poset.classical_index(poset.classical_of[v]);
        poset.core_of[v] = poset.quantize_of[ci];
        if (poset.core_of[v] >= n) {
            throw FlatEscapesPoset("build_context_poset: core image left the poset");
        }
    }

    if (auto why = validate_context_poset(poset, tol)) {
        throw InternalCheckError("build_context_poset: " + *why);
    }
    return poset;
}

std::optional<std::string> validate_context_poset(const ContextPoset& poset,
                                                  const Tolerance& tol) {
    size_t n = poset.size();
    if (n == 0) return "poset is empty";
    if (poset.names.size() != n || poset.leq.size() != n || poset.core_of.size() != n ||
        poset.classical_of.size() != n) {
        return "table sizes disagree";
    }

    for (size_t v = 0; v < n; ++v) {
        if (auto why = validate_star_algebra(poset.contexts[v], tol)) {
            return "context " + poset.names[v] + ": " + *why;
        }
        if (!poset.contexts[v].commutative) {
            return "context " + poset.names[v] + " is not commutative";
        }
    }

    FinitePoset view = poset.poset_view();
    if (auto why = validate_poset(view)) return *why;

    for (size_t v = 0; v < n; ++v) {
        if (!poset.is_leq(poset.bottom, v)) return "scalars are not the global minimum";
    }
    if (poset.contexts[poset.bottom].rank() != 1) return "bottom is not the scalar algebra";

    for (size_t v = 0; v < n; ++v) {
        if (!poset.is_leq(poset.core_of[v], v)) {
            return "core(" + poset.names[v] + ") is not included in it";
        }
        if (poset.core_of[poset.core_of[v]] != poset.core_of[v]) {
            return "core is not idempotent at " + poset.names[v];
        }
    }
    for (size_t u = 0; u < n; ++u) {
        for (size_t v = 0; v < n; ++v) {
            if (poset.is_leq(u, v) && !poset.is_leq(poset.core_of[u], poset.core_of[v])) {
                return "core is not monotone on (" + poset.names[u] + ", " + poset.names[v] + ")";
            }
        }
    }
    return std::nullopt;
}

CommutativeContext saturate(const ContextPoset& poset, const CommutativeContext& c) {
    size_t ci = poset.classical_index(c);
    return poset.classical_of[poset.quantize_of[ci]];
}

std::vector<CommutativeContext> proper_category(const ContextPoset& poset) {
    std::vector<CommutativeContext> out;
    for (const CommutativeContext& c : poset.classical_objects) {
        if (saturate(poset, c) == c) out.push_back(c);
    }
    return out;
}

std::vector<size_t> core_fixed_contexts(const ContextPoset& poset) {
    std::vector<size_t> out;
    for (size_t v = 0; v < poset.size(); ++v) {
        if (poset.core_of[v] == v) out.push_back(v);
    }
    return out;
}

namespace {

void fail(GaloisReport& report, const std::string& law, const std::string& witness) {
    report.pass = false;
    report.counterexamples.push_back({law, witness});
}

}  // namespace

GaloisReport galois_report(const ObservableSet& obs, const ContextPoset& poset,
                           const Tolerance& tol) {
    GaloisReport report;
    const auto& cs = poset.classical_objects;

    for (size_t ci = 0; ci < cs.size(); ++ci) {
        size_t qc = poset.quantize_of[ci];
        for (size_t v = 0; v < poset.size(); ++v) {
            bool left = poset.is_leq(qc, v);
            bool right = cs[ci].subset_of(poset.classical_of[v]);
            if (left != right) {
                fail(report, "quantize(C) <= V  iff  C <= classicize(V)",
                     "C=" + context_label(obs, cs[ci]) + ", V=" + poset.names[v]);
            }
        }
    }

    for (size_t ci = 0; ci < cs.size(); ++ci) {
        CommutativeContext sat = saturate(poset, cs[ci]);
        if (!cs[ci].subset_of(sat)) {
            fail(report, "C <= saturate(C)", "C=" + context_label(obs, cs[ci]));
        }
        // triple identity: quantize . classicize . quantize = quantize
        size_t qc = poset.quantize_of[ci];
        size_t q_sat = poset.quantize_of[poset.classical_index(sat)];
        if (q_sat != qc) {
            fail(report, "quantize(saturate(C)) = quantize(C)",
                 "C=" + context_label(obs, cs[ci]));
        }
        CommutativeContext sat2 = saturate(poset, sat);
        if (!(sat2 == sat)) {
            fail(report, "saturate is idempotent", "C=" + context_label(obs, cs[ci]));
        }
    }

    for (size_t v = 0; v < poset.size(); ++v) {
        size_t core = poset.core_of[v];
        if (!poset.is_leq(core, v)) {
            fail(report, "core(V) <= V", "V=" + poset.names[v]);
        }
        if (poset.core_of[core] != core) {
            fail(report, "core is idempotent", "V=" + poset.names[v]);
        }
        // core must stay the composite of the two functors
        size_t recomputed = poset.quantize_of[poset.classical_index(poset.classical_of[v])];
        if (recomputed != core) {
            fail(report, "core = quantize . classicize", "V=" + poset.names[v]);
        }
        // triple identity on the algebra side
        if (!(poset.classical_of[core] == poset.classical_of[v])) {
            fail(report, "classicize(core(V)) = classicize(V)", "V=" + poset.names[v]);
        }
    }

    // The two fixpoint collections are order-isomorphic through the pair.
    std::vector<CommutativeContext> proper = proper_category(poset);
    std::vector<size_t> fixed = core_fixed_contexts(poset);
    if (proper.size() != fixed.size()) {
        fail(report, "proper category and core fixpoints have equal cardinality",
             std::to_string(proper.size()) + " vs " + std::to_string(fixed.size()));
    } else {
        for (const CommutativeContext& a : proper) {
            size_t qa = poset.quantize_of[poset.classical_index(a)];
            if (std::find(fixed.begin(), fixed.end(), qa) == fixed.end()) {
                fail(report, "quantize maps the proper category into the core fixpoints",
                     "C=" + context_label(obs, a));
            }
            if (!(poset.classical_of[qa] == a)) {
                fail(report, "classicize . quantize is the identity on the proper category",
                     "C=" + context_label(obs, a));
            }
        }
        for (size_t v : fixed) {
            const CommutativeContext& c = poset.classical_of[v];
            if (saturate(poset, c) == c) {
                size_t back = poset.quantize_of[poset.classical_index(c)];
                if (back != v) {
                    fail(report, "quantize . classicize is the identity on the core fixpoints",
                         "V=" + poset.names[v]);
                }
            } else {
                fail(report, "classicize maps core fixpoints into the proper category",
                     "V=" + poset.names[v]);
            }
        }
        // order preservation both ways
        for (const CommutativeContext& a : proper) {
            for (const CommutativeContext& b : proper) {
                size_t qa = poset.quantize_of[poset.classical_index(a)];
                size_t qb = poset.quantize_of[poset.classical_index(b)];
                if (a.subset_of(b) != poset.is_leq(qa, qb)) {
                    fail(report, "quantize is an order isomorphism on the fixpoint sets",
                         "C=" + context_label(obs, a) + ", C'=" + context_label(obs, b));
                }
            }
        }
    }
    return report;
}

bool KInvarianceReport::all_equal_or_flagged() const {
    for (const KInvarianceEntry& e : entries) {
        if (!e.equal && !e.collision_flag) return false;
    }
    return true;
}

KInvarianceReport k_invariance_report(const ObservableSet& obs, const ContextPoset& poset,
                                      const std::vector<double>& ks, const Tolerance& tol) {
    KInvarianceReport report;
    for (double k : ks) {
        if (k == 0.0) throw ParseError("k_invariance_report: k = 0 is not allowed");
        FaithfulnessReport at_k = faithfulness_report(obs, k, tol);
        FaithfulnessReport at_one = faithfulness_report(obs, 1.0, tol);
        for (size_t ci = 0; ci < poset.classical_objects.size(); ++ci) {
            const CommutativeContext& c = poset.classical_objects[ci];
            StarAlgebra alt = quantize(obs, c, k, tol);
            KInvarianceEntry entry;
            entry.k = k;
            entry.context = context_label(obs, c);
            entry.equal = span_equal(alt, poset.contexts[poset.quantize_of[ci]], tol);
            for (size_t m : c.members) {
                const std::string& label = obs.label_of(m);
                auto flagged = [&](const FaithfulnessReport& r) {
                    return std::find(r.spectral_collisions.begin(), r.spectral_collisions.end(),
                                     label) != r.spectral_collisions.end();
                };
                if (flagged(at_k) || flagged(at_one)) entry.collision_flag = true;
            }
            report.entries.push_back(std::move(entry));
        }
    }
    return report;
}

size_t ClassicalPoset::index_of(const CommutativeContext& c) const {
    for (size_t i = 0; i < contexts.size(); ++i) {
        if (contexts[i] == c) return i;
    }
    throw UnknownObject("ClassicalPoset: context not present");
}

ClassicalPoset make_classical_poset(const ObservableSet& obs,
                                    std::vector<CommutativeContext> contexts) {
    ClassicalPoset out;
    out.contexts = std::move(contexts);
    size_t n = out.contexts.size();
    std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
    std::vector<std::string> labels;
    for (size_t i = 0; i < n; ++i) {
        labels.push_back(context_label(obs, out.contexts[i]));
        for (size_t j = 0; j < n; ++j) {
            leq[i][j] = out.contexts[i].subset_of(out.contexts[j]);
        }
    }
    out.po = make_poset(leq, std::move(labels));
    return out;
}

}  // namespace quantopos
