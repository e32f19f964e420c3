#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "quantopos/topology.hpp"

using namespace quantopos;
using namespace quantopos::tests;

namespace {

struct TopSetup {
    F2 f2;
    CoreTopology top;
    Presheaf q2;
    ClassicalPoset classical;
    MonotoneMap phi;
    ExternalWitness witness;

    TopSetup()
        : f2(make_f2()),
          top(make_core_topology(f2.view, f2.poset.core_of)),
          q2(make_q2(f2)),
          classical(make_classical_poset(f2.obs, f2.poset.classical_objects)),
          phi(quantize_map(f2.poset, classical)),
          witness{phi} {}
};

size_t covering_count(const CoreTopology& top, size_t v) {
    size_t count = 0;
    for (size_t i = 0; i < top.omega.sieves[v].size(); ++i) {
        if (top.J.covers(v, i)) ++count;
    }
    return count;
}

}  // namespace

TEST_CASE("closure in core and general modes") {
    TopSetup s;
    Subobject s2 = make_s2(s.f2, s.q2);
    Subobject t2 = make_t2(s.f2, s.q2);

    Subobject s2_closed = closure_core(s.q2, s2, s.top.core);
    CHECK(subobject_equal(s2_closed, full_subobject(s.q2)));

    Subobject t2_closed = closure_core(s.q2, t2, s.top.core);
    CHECK(t2_closed.keep[s.f2.ci].count() == 1);
    CHECK(t2_closed.keep[s.f2.dz].count() == 0);
    CHECK(t2_closed.keep[s.f2.ax].count() == 2);

    CHECK(subobject_equal(closure_core(s.q2, full_subobject(s.q2), s.top.core),
                          full_subobject(s.q2)));

    // the general form over any category containing the proper one agrees
    std::vector<size_t> images;
    for (const CommutativeContext& c : s.f2.poset.classical_objects) {
        images.push_back(s.f2.poset.quantize_of[s.f2.poset.classical_index(c)]);
    }
    CHECK(subobject_equal(closure_general(s.q2, s2, s.f2.view, images), s2_closed));
    CHECK(subobject_equal(closure_general(s.q2, t2, s.f2.view, images), t2_closed));

    // closure commutes with intersection: S2 and T2 is the worked example
    Subobject meet = intersect_subobjects(s2, t2);
    Subobject lhs = closure_core(s.q2, meet, s.top.core);
    Subobject rhs = intersect_subobjects(s2_closed, t2_closed);
    CHECK(subobject_equal(lhs, rhs));
    CHECK(lhs.keep[s.f2.ci].count() == 1);
    CHECK(lhs.keep[s.f2.dz].count() == 0);
    CHECK(lhs.keep[s.f2.ax].count() == 2);

    Subobject bad;
    bad.keep.assign(3, Bitset(0));
    CHECK_THROWS_AS(closure_core(s.q2, bad, s.top.core), NotASubobject);
}

TEST_CASE("covering sieve tables on F2") {
    TopSetup s;
    CHECK(covering_count(s.top, s.f2.ci) == 1);
    CHECK(covering_count(s.top, s.f2.dz) == 1);
    CHECK(covering_count(s.top, s.f2.ax) == 2);

    // J(A_x) consists of the sieves containing CI
    for (size_t i = 0; i < s.top.omega.sieves[s.f2.ax].size(); ++i) {
        CHECK(s.top.J.covers(s.f2.ax, i) ==
              s.top.omega.sieves[s.f2.ax][i].members.test(s.f2.ci));
    }

    // F1: the core is the identity and only maximal sieves cover
    ContextPoset f1 = build_context_poset(f1_observables(), {});
    CoreTopology trivial = make_core_topology(f1.poset_view(), f1.core_of);
    for (size_t v = 0; v < f1.size(); ++v) {
        for (size_t i = 0; i < trivial.omega.sieves[v].size(); ++i) {
            CHECK(trivial.J.covers(v, i) == (i == trivial.omega.top_index[v]));
        }
    }
}

TEST_CASE("lawvere-tierney components on F2") {
    TopSetup s;
    const Omega& omega = s.top.omega;
    size_t ax = s.f2.ax;

    Bitset empty(3);
    Bitset just_ci(3);
    just_ci.set(s.f2.ci);
    size_t i_empty = omega.index_of(ax, empty);
    size_t i_ci = omega.index_of(ax, just_ci);
    size_t i_top = omega.top_index[ax];
    CHECK(s.top.j.j[ax][i_empty] == i_empty);
    CHECK(s.top.j.j[ax][i_ci] == i_top);
    CHECK(s.top.j.j[ax][i_top] == i_top);

    size_t dz = s.f2.dz;
    size_t d_ci = omega.index_of(dz, just_ci);
    CHECK(s.top.j.j[dz][d_ci] == d_ci);

    // identity core gives the identity topology
    ContextPoset f1 = build_context_poset(f1_observables(), {});
    CoreTopology trivial = make_core_topology(f1.poset_view(), f1.core_of);
    for (size_t v = 0; v < f1.size(); ++v) {
        for (size_t i = 0; i < trivial.omega.sieves[v].size(); ++i) {
            CHECK(trivial.j.j[v][i] == i);
        }
    }
}

TEST_CASE("topology axioms and the round trip") {
    TopSetup s;
    TopologyAxiomReport report = topology_axiom_report(s.f2.view, s.top.omega, s.top.j, s.top.J);
    CHECK(report.pass);
    CHECK(report.failures.empty());

    // hand-mutated j: sending the empty sieve to the top breaks meet
    // preservation at A_x
    LawvereTierneyTopology broken = s.top.j;
    Bitset empty(3);
    broken.j[s.f2.ax][s.top.omega.index_of(s.f2.ax, empty)] =
        static_cast<uint32_t>(s.top.omega.top_index[s.f2.ax]);
    TopologyAxiomReport bad = topology_axiom_report(s.f2.view, s.top.omega, broken, s.top.J);
    CHECK(!bad.pass);
}

TEST_CASE("coarsening across nested prequantization categories on F4") {
    ObservableSet f4 = f4_observables();
    ContextPoset poset = build_context_poset(f4, {});
    CoreTopology top = make_core_topology(poset.poset_view(), poset.core_of);

    auto images = [&](const std::vector<CommutativeContext>& cs) {
        std::vector<size_t> out;
        for (const CommutativeContext& c : cs) {
            out.push_back(poset.quantize_of[poset.classical_index(c)]);
        }
        return out;
    };
    GrothendieckTopology j_proper = grothendieck_general(top.omega, images(proper_category(poset)));
    GrothendieckTopology j_full = grothendieck_general(top.omega, images(poset.classical_objects));

    // both categories contain the proper one: equal topologies, matching core
    CHECK(!coarsening_check(top.omega, j_proper, j_full, true).has_value());
    CHECK(j_full.covering == top.J.covering);

    // {empty} misses the proper category and is strictly coarser at V(z)
    GrothendieckTopology j_small = grothendieck_general(top.omega, {poset.bottom});
    CHECK(!coarsening_check(top.omega, j_small, j_full, false).has_value());
    CHECK(coarsening_check(top.omega, j_small, j_full, true).has_value());
}

TEST_CASE("density and the core unit") {
    TopSetup s;
    CHECK(is_dense(s.q2, make_s2(s.f2, s.q2), s.top.core));
    CHECK(!is_dense(s.q2, make_t2(s.f2, s.q2), s.top.core));

    NatTransform zeta = core_unit(s.q2, s.top.core_map);
    Presheaf cored = sheafify(s.q2, s.top.core_map);
    CHECK(!validate_nat(s.q2, cored, zeta).has_value());
    CHECK(zeta.comp[s.f2.ax] == std::vector<uint32_t>{0, 0});
    CHECK(zeta.comp[s.f2.dz] == std::vector<uint32_t>{0});

    // after applying the core inverse image, the unit becomes the identity
    NatTransform zeta_cored = core_unit(cored, s.top.core_map);
    CHECK(zeta_cored == identity_transform(cored));
}

TEST_CASE("sheafification produces sheaves and the known fiber sizes") {
    TopSetup s;
    Presheaf cored = sheafify(s.q2, s.top.core_map);
    CHECK(cored.fiber_size(s.f2.ci) == 1);
    CHECK(cored.fiber_size(s.f2.dz) == 1);
    CHECK(cored.fiber_size(s.f2.ax) == 1);

    SheafVerdict before = is_sheaf(s.q2, s.top, s.witness);
    CHECK(!before.sheaf());
    CHECK(!before.zeta_iso);
    CHECK(!before.j_sheaf_extension);
    CHECK(!before.external_phi_star);

    SheafVerdict after = is_sheaf(cored, s.top, s.witness);
    CHECK(after.sheaf());

    Presheaf term = terminal_presheaf(s.f2.view);
    CHECK(is_sheaf(term, s.top, s.witness).sheaf());
    CHECK(presheaf_equal(sheafify(term, s.top.core_map), term));

    // a sheaf built as a direct image is core-stable up to iso through zeta
    MonotoneMap phi = s.phi;
    DirectImage di = direct_image(phi, make_p2(s.classical));
    SheafVerdict direct = is_sheaf(di.pre, s.top, s.witness);
    CHECK(direct.sheaf());
    NatTransform zeta = core_unit(di.pre, s.top.core_map);
    CHECK(transform_bijective(di.pre, sheafify(di.pre, s.top.core_map), zeta));

    // fixpoint witness agrees with the quantize witness
    CHECK(is_sheaf(s.q2, s.top).sheaf() == false);
    CHECK(is_sheaf(di.pre, s.top).sheaf() == true);
}

TEST_CASE("sheaf classifier fibers and the stated inverse") {
    TopSetup s;
    SheafClassifier cls = sheaf_classifier(s.top);
    CHECK(cls.sub.pre.fiber_size(s.f2.ci) == 2);
    CHECK(cls.sub.pre.fiber_size(s.f2.dz) == 3);
    CHECK(cls.sub.pre.fiber_size(s.f2.ax) == 2);

    SheafVerdict verdict = is_sheaf(cls.sub.pre, s.top, s.witness);
    CHECK(verdict.sheaf());

    NatTransform zeta = core_unit(cls.sub.pre, s.top.core_map);
    NatTransform rho = classifier_core_inverse(s.top, cls);
    Presheaf cored = sheafify(cls.sub.pre, s.top.core_map);
    CHECK(compose_transforms(zeta, rho) == identity_transform(cls.sub.pre));
    CHECK(compose_transforms(rho, zeta) == identity_transform(cored));

    // identity core: the classifier is all of Omega
    ContextPoset f1 = build_context_poset(f1_observables(), {});
    CoreTopology trivial = make_core_topology(f1.poset_view(), f1.core_of);
    SheafClassifier full = sheaf_classifier(trivial);
    CHECK(presheaf_equal(full.sub.pre, trivial.omega.pre));
}

TEST_CASE("closed subobject classification over a sheaf") {
    TopSetup s;
    DirectImage di = direct_image(s.phi, make_p2(s.classical));
    SheafClassifier cls = sheaf_classifier(s.top);
    ClassificationReport report = closed_subobject_classification(di.pre, s.top, cls);
    CHECK(report.pass);
    CHECK(report.closed_subobjects == report.fixed_characteristics);
    CHECK(report.subsheaves == report.closed_subobjects);
    CHECK(report.closed_subobjects > 0);
}

TEST_CASE("every covering sieve is dense and so are core downsets") {
    TopSetup s;
    for (size_t v = 0; v < s.f2.view.size(); ++v) {
        Presheaf ambient = one_down(s.f2.view, v);
        for (size_t i = 0; i < s.top.omega.sieves[v].size(); ++i) {
            if (!s.top.J.covers(v, i)) continue;
            Subobject sub;
            sub.keep.resize(3);
            for (size_t u = 0; u < 3; ++u) {
                sub.keep[u] = Bitset(ambient.fiber_size(u));
                if (s.top.omega.sieves[v][i].members.test(u)) sub.keep[u].set(0);
            }
            CHECK(is_dense(ambient, sub, s.top.core));
        }
    }
    for (size_t v = 0; v < s.f2.view.size(); ++v) {
        SubPresheaf ambient = subobject_presheaf(s.q2, q_down(s.q2, v));
        CHECK(is_dense(ambient.pre, q_down(ambient.pre, s.top.core[v]), s.top.core));
    }
}

TEST_CASE("sheaf criteria agree across a randomized sample") {
    TopSetup s;
    std::mt19937_64 rng(2024);
    size_t sheaves = 0;
    for (int i = 0; i < 25; ++i) {
        Presheaf p = random_presheaf(s.f2.view, rng);
        SheafVerdict verdict = is_sheaf(p, s.top, s.witness);  // throws on disagreement
        if (verdict.sheaf()) ++sheaves;
        CHECK(is_sheaf(sheafify(p, s.top.core_map), s.top, s.witness).sheaf());
    }
    CHECK(sheaves < 25);  // the sample includes genuine non-sheaves
}

TEST_CASE("comonad report and a broken core table") {
    TopSetup s;
    ComonadReport good =
        comonad_report(s.f2.view, s.f2.poset.core_of, core_fixed_contexts(s.f2.poset));
    CHECK(good.pass);
    CHECK(good.fixed == std::vector<size_t>{s.f2.ci, s.f2.dz});

    // F1: everything is fixed
    ContextPoset f1 = build_context_poset(f1_observables(), {});
    ComonadReport all = comonad_report(f1.poset_view(), f1.core_of, std::nullopt);
    CHECK(all.pass);
    CHECK(all.fixed.size() == f1.size());

    // send A_x to V(z), which is not below it: the counit fails
    std::vector<size_t> broken = s.f2.poset.core_of;
    broken[s.f2.ax] = s.f2.dz;
    ComonadReport bad = comonad_report(s.f2.view, broken, std::nullopt);
    CHECK(!bad.pass);
    bool counit = false;
    for (const std::string& line : bad.failures) {
        if (line.find("counit") != std::string::npos) counit = true;
    }
    CHECK(counit);
    CHECK_THROWS_AS(make_core_topology(s.f2.view, broken), ShapeMismatch);
}

TEST_CASE("powers and limits of sheaves are sheaves") {
    TopSetup s;
    DirectImage di = direct_image(s.phi, make_p2(s.classical));
    Presheaf r = di.pre;

    ProductPresheaf prod = product(r, r);
    CHECK(is_sheaf(prod.pre, s.top, s.witness).sheaf());

    ExponentialPresheaf power = exponential(s.q2, r);
    CHECK(is_sheaf(power.pre, s.top, s.witness).sheaf());

    ExponentialPresheaf self_power = exponential(r, r);
    CHECK(is_sheaf(self_power.pre, s.top, s.witness).sheaf());
}
