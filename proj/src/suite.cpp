#include "quantopos/suite.hpp"

#include <algorithm>
#include <chrono>

namespace quantopos {

bool SuiteReport::pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.status != "fail"; });
}

Json report_to_json(const SuiteReport& report) {
    Json doc;
    doc["schema"] = "quantopos-report-v1";
    doc["seed"] = report.seed;
    Json checks = Json::array();
    for (const CheckResult& c : report.checks) {
        Json entry;
        entry["name"] = c.name;
        entry["status"] = c.status;
        entry["witnesses"] = c.witnesses;
        checks.push_back(std::move(entry));
    }
    doc["checks"] = std::move(checks);
    return doc;
}

namespace {

using Clock = std::chrono::steady_clock;

std::string format_k(double k) {
    std::string s = std::to_string(k);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

struct CheckTimer {
    Clock::time_point start = Clock::now();

    double ms() const {
        return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    }
};

std::vector<NamedPresheaf> sample_presheaves(const FinitePoset& poset, const std::string& side,
                                             size_t randoms, std::mt19937_64& rng) {
    std::vector<NamedPresheaf> out;
    out.push_back({side + ":terminal", terminal_presheaf(poset)});
    for (size_t v = 0; v < poset.size(); ++v) {
        out.push_back({side + ":repr(" + poset.label(v) + ")", one_down(poset, v)});
    }
    for (size_t i = 0; i < randoms; ++i) {
        out.push_back({side + ":random" + std::to_string(i), random_presheaf(poset, rng)});
    }
    return out;
}

}  // namespace

SuiteReport run_suite(const Scenario& scenario, const ContextPoset& poset,
                      const SuiteOptions& options) {
    SuiteReport report;
    report.seed = scenario.seed;
    const ObservableSet& obs = scenario.observables;
    const Tolerance& tol = scenario.tolerance;
    std::mt19937_64 rng(scenario.seed);

    auto push = [&](CheckResult check, const CheckTimer& timer) {
        check.wall_ms = timer.ms();
        report.checks.push_back(std::move(check));
    };

    // 1. faithfulness of the quantization maps
    {
        CheckTimer timer;
        CheckResult check{"faithfulness", "pass", {}, 0};
        FaithfulnessReport base = faithfulness_report(obs, 1.0, tol);
        for (const auto& [a, b] : base.hat_collisions) {
            check.status = "fail";
            check.witnesses.push_back("observables '" + a + "' and '" + b +
                                      "' share the same operator");
        }
        for (const auto& [a, b] : base.exp_collisions) {
            check.status = "fail";
            check.witnesses.push_back("observables '" + a + "' and '" + b +
                                      "' share the same exponential at k=1");
        }
        for (const std::string& label : base.spectral_collisions) {
            check.witnesses.push_back("k=1: degenerate spectrum for '" + label + "'");
        }
        for (double k : scenario.k_values) {
            FaithfulnessReport at_k = faithfulness_report(obs, k, tol);
            for (const std::string& label : at_k.spectral_collisions) {
                check.witnesses.push_back("k=" + format_k(k) +
                                          ": degenerate spectrum for '" + label + "'");
            }
        }
        push(std::move(check), timer);
    }

    // 2. poset construction summary
    {
        CheckTimer timer;
        CheckResult check{"poset-build", "pass", {}, 0};
        std::string names;
        for (size_t v = 0; v < poset.size(); ++v) {
            if (v) names += ", ";
            names += poset.names[v];
        }
        check.witnesses.push_back("contexts: " + names);
        std::string proper;
        for (const CommutativeContext& c : proper_category(poset)) {
            if (!proper.empty()) proper += ", ";
            proper += context_label(obs, c);
        }
        check.witnesses.push_back("proper category: " + proper);
        std::string fixed;
        for (size_t v : core_fixed_contexts(poset)) {
            if (!fixed.empty()) fixed += ", ";
            fixed += poset.names[v];
        }
        check.witnesses.push_back("core fixpoints: " + fixed);
        push(std::move(check), timer);
    }

    // 3. Galois connection laws
    {
        CheckTimer timer;
        CheckResult check{"galois-laws", "pass", {}, 0};
        GaloisReport galois = galois_report(obs, poset, tol);
        if (!galois.pass) {
            check.status = "fail";
            for (const GaloisViolation& v : galois.counterexamples) {
                check.witnesses.push_back(v.law + " fails at " + v.witness);
            }
        }
        push(std::move(check), timer);
    }

    // 4. invariance under reparametrized quantization maps
    {
        CheckTimer timer;
        CheckResult check{"k-invariance", "pass", {}, 0};
        if (scenario.k_values.empty()) {
            check.witnesses.push_back("no k values configured");
        } else {
            KInvarianceReport kin = k_invariance_report(obs, poset, scenario.k_values, tol);
            for (const KInvarianceEntry& e : kin.entries) {
                if (e.equal) continue;
                std::string line = "k=" + format_k(e.k) + ", C=" + e.context;
                if (e.collision_flag) {
                    check.witnesses.push_back(line + ": degenerate-spectrum: unequal");
                } else {
                    check.status = "fail";
                    check.witnesses.push_back(line + ": unequal without a spectral collision");
                }
            }
        }
        push(std::move(check), timer);
    }

    FinitePoset view = poset.poset_view();
    CoreTopology top = make_core_topology(view, poset.core_of);
    SheafClassifier classifier = sheaf_classifier(top);
    ClassicalPoset classical_full = make_classical_poset(obs, poset.classical_objects);
    ClassicalPoset classical_proper = make_classical_poset(obs, proper_category(poset));
    MonotoneMap phi_full = quantize_map(poset, classical_full);
    MonotoneMap phi_proper = quantize_map(poset, classical_proper);
    MonotoneMap psi_full = classicize_map(poset, classical_full);
    MonotoneMap sharp = saturation_map(poset, classical_full, classical_proper);
    MonotoneMap include = inclusion_map(classical_proper, classical_full);

    // 5. topology axioms, presentation round trip, coarsening
    {
        CheckTimer timer;
        CheckResult check{"topology-axioms", "pass", {}, 0};
        TopologyAxiomReport axioms = topology_axiom_report(view, top.omega, top.j, top.J);
        for (const std::string& line : axioms.checks) check.witnesses.push_back(line);
        if (!axioms.pass) {
            check.status = "fail";
            for (const std::string& line : axioms.failures) check.witnesses.push_back(line);
        }

        // the general forms collapse to the core forms for any category
        // containing the proper one
        auto images_of = [&](const ClassicalPoset& cp) {
            std::vector<size_t> images;
            for (const CommutativeContext& c : cp.contexts) {
                images.push_back(poset.quantize_of[poset.classical_index(c)]);
            }
            return images;
        };
        GrothendieckTopology j_full = grothendieck_general(top.omega, images_of(classical_full));
        GrothendieckTopology j_proper =
            grothendieck_general(top.omega, images_of(classical_proper));
        if (j_full.covering != top.J.covering || j_proper.covering != top.J.covering) {
            check.status = "fail";
            check.witnesses.push_back(
                "general-form topology differs from the core form on a category containing the "
                "proper one");
        } else {
            check.witnesses.push_back(
                "general form agrees with the core form over the full and proper categories");
        }
        if (lt_general(top.omega, images_of(classical_full)).j != top.j.j) {
            check.status = "fail";
            check.witnesses.push_back("general-form Lawvere-Tierney map differs from core form");
        }

        // growing the category coarsens the topology
        GrothendieckTopology j_bottom = grothendieck_general(top.omega, {poset.bottom});
        if (auto why = coarsening_check(top.omega, j_bottom, j_full, false)) {
            check.status = "fail";
            check.witnesses.push_back("coarsening fails: " + *why);
        } else {
            check.witnesses.push_back("larger categories induce finer-or-equal covering sets");
        }
        if (auto why = coarsening_check(top.omega, j_proper, j_full, true)) {
            check.status = "fail";
            check.witnesses.push_back("proper/full topologies differ: " + *why);
        }
        push(std::move(check), timer);
    }

    // 6. the core comonad
    {
        CheckTimer timer;
        CheckResult check{"comonad", "pass", {}, 0};
        ComonadReport comonad = comonad_report(view, poset.core_of, core_fixed_contexts(poset));
        if (!comonad.pass) {
            check.status = "fail";
            for (const std::string& line : comonad.failures) check.witnesses.push_back(line);
        } else {
            std::string fixed;
            for (size_t v : comonad.fixed) {
                if (!fixed.empty()) fixed += ", ";
                fixed += poset.names[v];
            }
            check.witnesses.push_back("co-Eilenberg-Moore fixpoints: " + fixed);
        }
        push(std::move(check), timer);
    }

    // sample presheaves shared by the remaining checks
    std::vector<NamedPresheaf> classical_samples =
        sample_presheaves(classical_full.po, "C", options.random_presheaves, rng);
    std::vector<NamedPresheaf> proper_samples =
        sample_presheaves(classical_proper.po, "A", options.random_presheaves, rng);
    std::vector<NamedPresheaf> quantum_samples =
        sample_presheaves(view, "V", options.random_presheaves, rng);

    // 7. adjunction checks for the three functors
    auto adjunction_check = [&](const std::string& name, const MonotoneMap& f,
                                const std::vector<NamedPresheaf>& sources,
                                const std::vector<NamedPresheaf>& targets) {
        CheckTimer timer;
        CheckResult check{name, "pass", {}, 0};
        AdjunctionReport adj = adjunction_report(f, sources, targets, options.hom_guard);
        size_t pairs = adj.records.size();
        check.witnesses.push_back(std::to_string(pairs) +
                                  " sample pairs, all Hom bijections realized");
        if (!adj.pass) {
            check.status = "fail";
            check.witnesses = adj.failures;
        }
        push(std::move(check), timer);
    };
    adjunction_check("adjunction-quantize", phi_full, classical_samples, quantum_samples);
    adjunction_check("adjunction-saturation", sharp, classical_samples, proper_samples);
    adjunction_check("adjunction-inclusion", include, proper_samples, classical_samples);

    // 8. the direct image evaluates at the classicization
    {
        CheckTimer timer;
        CheckResult check{"classicization-iso", "pass", {}, 0};
        for (const NamedPresheaf& pn : classical_samples) {
            DirectImage di = direct_image(phi_full, pn.pre, options.hom_guard);
            Presheaf psi_p = inverse_image(psi_full, pn.pre);
            NatTransform iso = direct_image_evaluation_iso(psi_full, di);
            NatTransform inv = direct_image_evaluation_iso_inverse(psi_full, pn.pre, di);
            bool ok = !validate_nat(di.pre, psi_p, iso).has_value() &&
                      transform_bijective(di.pre, psi_p, iso) &&
                      compose_transforms(iso, inv) == identity_transform(di.pre) &&
                      compose_transforms(inv, iso) == identity_transform(psi_p);
            if (!ok) {
                check.status = "fail";
                check.witnesses.push_back("evaluation iso fails on " + pn.name);
            }
        }
        if (check.status == "pass") {
            check.witnesses.push_back("direct image of every classical sample evaluates at the "
                                      "classicization, naturally and bijectively");
        }
        push(std::move(check), timer);
    }

    // 9. factorization through the proper category
    {
        CheckTimer timer;
        CheckResult check{"factorization", "pass", {}, 0};
        FactorizationReport fact = factorization_report(obs, poset, classical_samples,
                                                        quantum_samples, options.hom_guard);
        if (!fact.pass) {
            check.status = "fail";
            check.witnesses = fact.failures;
        } else {
            check.witnesses.push_back(std::to_string(fact.checks.size()) +
                                      " factorization identities verified");
        }
        push(std::move(check), timer);
    }

    // 10. sheaf criteria agreement and sheafification
    ExternalWitness witness{phi_full};
    {
        CheckTimer timer;
        CheckResult check{"sheaf-criteria", "pass", {}, 0};
        size_t sheaves = 0;
        std::vector<NamedPresheaf> pool = quantum_samples;
        pool.push_back({"V:omega", top.omega.pre});
        pool.push_back({"V:omega_j", classifier.sub.pre});
        for (size_t v = 0; v < view.size(); ++v) {
            for (size_t i = 0; i < top.omega.sieves[v].size(); ++i) {
                if (top.J.covers(v, i) && i != top.omega.top_index[v]) {
                    pool.push_back({"V:one_omega(" + view.label(v) + "," +
                                        top.omega.pre.elems[v][i] + ")",
                                    one_omega(view, top.omega.sieves[v][i])});
                }
            }
        }
        for (const NamedPresheaf& qn : pool) {
            SheafVerdict verdict = is_sheaf(qn.pre, top, witness, options.hom_guard);
            if (verdict.sheaf()) ++sheaves;
            Presheaf sheafified = sheafify(qn.pre, top.core_map);
            SheafVerdict after = is_sheaf(sheafified, top, witness, options.hom_guard);
            if (!after.sheaf()) {
                check.status = "fail";
                check.witnesses.push_back("sheafify(" + qn.name + ") fails the sheaf criteria");
            }
            // the sheafification unit is initial among maps into sheaves
            NatTransform zeta = core_unit(qn.pre, top.core_map);
            std::vector<NatTransform> into = hom_enumerate(qn.pre, sheafified, options.hom_guard);
            for (const NatTransform& alpha : into) {
                size_t factorizations = 0;
                for (const NatTransform& beta :
                     hom_enumerate(sheafified, sheafified, options.hom_guard)) {
                    if (compose_transforms(zeta, beta) == alpha) ++factorizations;
                }
                if (factorizations != 1) {
                    check.status = "fail";
                    check.witnesses.push_back("universal property of sheafification fails on " +
                                              qn.name);
                    break;
                }
            }
        }
        if (check.status == "pass") {
            check.witnesses.push_back(std::to_string(pool.size()) +
                                      " samples: the three sheaf criteria agree everywhere (" +
                                      std::to_string(sheaves) + " sheaves)");
        }
        push(std::move(check), timer);
    }

    // 11. topos conditions of the sheaf subcategory
    {
        CheckTimer timer;
        CheckResult check{"sheaf-topos-conditions", "pass", {}, 0};

        // covering sieves are dense, and so are the core-restricted downsets
        bool dense_ok = true;
        for (size_t v = 0; v < view.size() && dense_ok; ++v) {
            Presheaf ambient = one_down(view, v);
            for (size_t i = 0; i < top.omega.sieves[v].size() && dense_ok; ++i) {
                if (!top.J.covers(v, i)) continue;
                Subobject sub;
                sub.keep.resize(view.size());
                for (size_t u = 0; u < view.size(); ++u) {
                    sub.keep[u] = Bitset(ambient.fiber_size(u));
                    if (top.omega.sieves[v][i].members.test(u)) sub.keep[u].set(0);
                }
                if (!is_dense(ambient, sub, top.core)) dense_ok = false;
            }
        }
        if (dense_ok) {
            check.witnesses.push_back("every covering sieve is dense in its representable");
        } else {
            check.status = "fail";
            check.witnesses.push_back("a covering sieve fails to be dense");
        }

        bool qdown_ok = true;
        for (const NamedPresheaf& qn : quantum_samples) {
            for (size_t v = 0; v < view.size() && qdown_ok; ++v) {
                SubPresheaf ambient = subobject_presheaf(qn.pre, q_down(qn.pre, v));
                Subobject lower = q_down(ambient.pre, top.core[v]);
                if (!is_dense(ambient.pre, lower, top.core)) qdown_ok = false;
            }
        }
        if (qdown_ok) {
            check.witnesses.push_back("core-restricted downsets are dense in every sample");
        } else {
            check.status = "fail";
            check.witnesses.push_back("a core-restricted downset fails to be dense");
        }

        // Omega_j is a sheaf with the stated inverse of zeta
        {
            SheafVerdict verdict = is_sheaf(classifier.sub.pre, top, witness, options.hom_guard);
            NatTransform zeta = core_unit(classifier.sub.pre, top.core_map);
            NatTransform rho = classifier_core_inverse(top, classifier);
            Presheaf core_oj = sheafify(classifier.sub.pre, top.core_map);
            bool ok = verdict.sheaf() &&
                      compose_transforms(zeta, rho) == identity_transform(classifier.sub.pre) &&
                      compose_transforms(rho, zeta) == identity_transform(core_oj);
            if (ok) {
                check.witnesses.push_back("the sheaf classifier is a sheaf; rho inverts zeta");
            } else {
                check.status = "fail";
                check.witnesses.push_back("sheaf classifier checks fail");
            }
        }

        // finite limits and exponentials of sheaves stay sheaves
        std::vector<NamedPresheaf> sheaf_samples;
        for (const NamedPresheaf& qn : quantum_samples) {
            sheaf_samples.push_back({"sheafify(" + qn.name + ")",
                                     sheafify(qn.pre, top.core_map)});
        }
        bool limits_ok = true;
        for (size_t a = 0; a < sheaf_samples.size() && limits_ok; ++a) {
            for (size_t b = a; b < sheaf_samples.size() && limits_ok; ++b) {
                ProductPresheaf prod = product(sheaf_samples[a].pre, sheaf_samples[b].pre);
                if (!is_sheaf(prod.pre, top, witness, options.hom_guard).sheaf()) {
                    limits_ok = false;
                }
            }
        }
        if (limits_ok && sheaf_samples.size() >= 2) {
            const Presheaf& corner = sheaf_samples.front().pre;
            std::vector<NatTransform> f =
                hom_enumerate(sheaf_samples[1].pre, corner, options.hom_guard);
            if (!f.empty()) {
                PullbackPresheaf pb = pullback(sheaf_samples[1].pre, sheaf_samples[1].pre, corner,
                                               f.front(), f.front());
                if (!is_sheaf(pb.pre, top, witness, options.hom_guard).sheaf()) limits_ok = false;
            }
        }
        if (limits_ok) {
            check.witnesses.push_back("sampled finite limits of sheaves are sheaves");
        } else {
            check.status = "fail";
            check.witnesses.push_back("a finite limit of sheaves fails to be a sheaf");
        }

        bool exp_ok = true;
        size_t exp_limit = std::min<size_t>(quantum_samples.size(), 3);
        for (size_t a = 0; a < exp_limit && exp_ok; ++a) {
            for (size_t b = 0; b < exp_limit && exp_ok; ++b) {
                ExponentialPresheaf power =
                    exponential(quantum_samples[a].pre, sheaf_samples[b].pre, options.hom_guard);
                if (!is_sheaf(power.pre, top, witness, options.hom_guard).sheaf()) exp_ok = false;
            }
        }
        if (exp_ok) {
            check.witnesses.push_back("powers of sheaves by sampled presheaves are sheaves");
        } else {
            check.status = "fail";
            check.witnesses.push_back("a power of a sheaf fails to be a sheaf");
        }

        // when the exponent is a sheaf as well, currying realizes the
        // power-object bijection inside the sheaf subcategory
        bool curry_ok = true;
        for (size_t a = 0; a < std::min<size_t>(sheaf_samples.size(), 2) && curry_ok; ++a) {
            for (size_t b = 0; b < std::min<size_t>(sheaf_samples.size(), 2) && curry_ok; ++b) {
                const Presheaf& q = sheaf_samples[a].pre;
                const Presheaf& r = sheaf_samples[b].pre;
                ExponentialPresheaf power = exponential(q, r, options.hom_guard);
                for (const NamedPresheaf& sn : sheaf_samples) {
                    ProductPresheaf sq = product(sn.pre, q);
                    std::vector<NatTransform> direct =
                        hom_enumerate(sq.pre, r, options.hom_guard);
                    std::vector<NatTransform> curried =
                        hom_enumerate(sn.pre, power.pre, options.hom_guard);
                    if (direct.size() != curried.size()) {
                        curry_ok = false;
                        break;
                    }
                    std::vector<bool> hit(curried.size(), false);
                    for (const NatTransform& h : direct) {
                        NatTransform c = curry_transform(sn.pre, q, r, power, h);
                        auto it = std::find(curried.begin(), curried.end(), c);
                        if (it == curried.end() || hit[it - curried.begin()]) {
                            curry_ok = false;
                            break;
                        }
                        hit[it - curried.begin()] = true;
                    }
                }
            }
        }
        if (curry_ok) {
            check.witnesses.push_back("currying realizes the power-object bijection on sheaves");
        } else {
            check.status = "fail";
            check.witnesses.push_back("the power-object bijection fails within sheaves");
        }

        // closed subobject classification over sampled sheaves
        bool classify_ok = true;
        size_t classified = 0;
        for (size_t a = 0; a < std::min<size_t>(sheaf_samples.size(), 3); ++a) {
            ClassificationReport cr = closed_subobject_classification(sheaf_samples[a].pre, top,
                                                                      classifier, 100000);
            classified += cr.closed_subobjects;
            if (!cr.pass) {
                classify_ok = false;
                check.status = "fail";
                for (const std::string& line : cr.failures) {
                    check.witnesses.push_back(sheaf_samples[a].name + ": " + line);
                }
            }
        }
        if (classify_ok) {
            check.witnesses.push_back(
                "subsheaf / closed-subobject / j-fixed classification realized (" +
                std::to_string(classified) + " closed subobjects)");
        }
        push(std::move(check), timer);
    }

    return report;
}

SuiteReport run_suite(const Scenario& scenario, const SuiteOptions& options) {
    ContextPoset poset = build_context_poset(scenario.observables, scenario.extra_contexts, 1.0,
                                             scenario.tolerance);
    return run_suite(scenario, poset, options);
}

}  // namespace quantopos
