#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "fixtures.hpp"
#include "quantopos/bridge.hpp"

using namespace quantopos;
using namespace quantopos::tests;

namespace {

CommutativeContext ctx(std::initializer_list<size_t> members) {
    return CommutativeContext{std::vector<size_t>(members)};
}

std::vector<std::string> context_labels(const ObservableSet& obs,
                                        const std::vector<CommutativeContext>& cs) {
    std::vector<std::string> out;
    for (const CommutativeContext& c : cs) out.push_back(context_label(obs, c));
    return out;
}

}  // namespace

TEST_CASE("quantize on the canonical fixtures") {
    ObservableSet f1 = f1_observables();
    StarAlgebra bottom = quantize(f1, ctx({}));
    CHECK(bottom.rank() == 1);

    StarAlgebra dz = quantize(f1, ctx({0}));
    CHECK(dz.rank() == 2);
    CHECK(algebra_membership(dz, diag2(Complex(0, 1), Complex(0, -1))));

    // e^{2i z} = -I generates only the scalars
    StarAlgebra degenerate = quantize(f1, ctx({0}), 2.0);
    CHECK(degenerate.rank() == 1);
}

TEST_CASE("classicize on the canonical fixtures") {
    F2 f2 = make_f2();
    CHECK(f2.poset.classical_of[f2.ci].members.empty());
    CHECK(f2.poset.classical_of[f2.ax].members.empty());
    CHECK(f2.poset.classical_of[f2.dz] == ctx({0}));

    ObservableSet f4 = f4_observables();
    ContextPoset poset4 = build_context_poset(f4, {});
    size_t d2 = index_by_name(poset4, "V(z)");
    CHECK(context_label(f4, poset4.classical_of[d2]) == "{z,z'}");
}

TEST_CASE("classicize refuses a non-commuting preimage") {
    // e^{i pi sigma_x} = -I lands in every algebra although w fails to
    // commute with z
    ObservableSet obs;
    obs.dim = 2;
    obs.entries.push_back({"z", diag2(M_PI / 2, -M_PI / 2)});
    obs.entries.push_back({"w", M_PI * pauli_x()});
    StarAlgebra dz = generated_star_algebra(2, {diag2(1, 2)});
    CHECK_THROWS_AS(classicize(obs, dz), NonCommutativePreimage);
    CHECK_THROWS_AS(build_context_poset(obs, {}), NonCommutativePreimage);
}

TEST_CASE("context poset for F1 is the two-chain with identity core") {
    ContextPoset poset = build_context_poset(f1_observables(), {});
    REQUIRE(poset.size() == 2);
    CHECK(poset.names[poset.bottom] == "CI");
    CHECK(poset.is_leq(poset.bottom, 1 - poset.bottom));
    CHECK(poset.core_of == std::vector<size_t>{0, 1});
    CHECK(!validate_context_poset(poset).has_value());
}

TEST_CASE("context poset for F2 has one non-fixed context") {
    F2 f2 = make_f2();
    REQUIRE(f2.poset.size() == 3);
    CHECK(f2.poset.is_leq(f2.ci, f2.dz));
    CHECK(f2.poset.is_leq(f2.ci, f2.ax));
    CHECK(!f2.poset.is_leq(f2.dz, f2.ax));
    CHECK(!f2.poset.is_leq(f2.ax, f2.dz));
    CHECK(f2.poset.core_of[f2.ci] == f2.ci);
    CHECK(f2.poset.core_of[f2.dz] == f2.dz);
    CHECK(f2.poset.core_of[f2.ax] == f2.ci);
    CHECK(core_fixed_contexts(f2.poset) == std::vector<size_t>{f2.ci, f2.dz});
}

TEST_CASE("context poset for F3 has identity core") {
    ObservableSet f3 = f3_observables();
    ContextPoset poset = build_context_poset(f3, {});
    REQUIRE(poset.size() == 3);
    for (size_t v = 0; v < poset.size(); ++v) CHECK(poset.core_of[v] == v);
    CHECK(context_labels(f3, proper_category(poset)) ==
          std::vector<std::string>{"{}", "{x}", "{z}"});
}

TEST_CASE("saturation and the proper category on F4") {
    ObservableSet f4 = f4_observables();
    ContextPoset poset = build_context_poset(f4, {});
    CHECK(context_label(f4, saturate(poset, ctx({0}))) == "{z,z'}");
    CHECK(context_labels(f4, proper_category(poset)) ==
          std::vector<std::string>{"{}", "{z,z'}"});
}

TEST_CASE("galois laws hold on every fixture") {
    for (const ObservableSet& obs : {f1_observables(), f3_observables(), f4_observables()}) {
        ContextPoset poset = build_context_poset(obs, {});
        GaloisReport report = galois_report(obs, poset);
        CAPTURE(obs.entries.size());
        CHECK(report.pass);
        CHECK(report.counterexamples.empty());
    }
    F2 f2 = make_f2();
    CHECK(galois_report(f2.obs, f2.poset).pass);
}

TEST_CASE("a mutated core table is caught with a witness") {
    F2 f2 = make_f2();
    ContextPoset broken = f2.poset;
    broken.core_of[f2.ax] = f2.ax;
    GaloisReport report = galois_report(f2.obs, broken);
    CHECK(!report.pass);
    bool found = false;
    for (const GaloisViolation& v : report.counterexamples) {
        if (v.law == "core = quantize . classicize" && v.witness == "V=A_x") found = true;
    }
    CHECK(found);
}

TEST_CASE("proper category and core fixpoints are order isomorphic") {
    for (const ObservableSet& obs : {f1_observables(), f3_observables(), f4_observables()}) {
        ContextPoset poset = build_context_poset(obs, {});
        auto proper = proper_category(poset);
        auto fixed = core_fixed_contexts(poset);
        CHECK(proper.size() == fixed.size());
        for (const CommutativeContext& c : proper) {
            size_t v = poset.quantize_of[poset.classical_index(c)];
            CHECK(poset.core_of[v] == v);
            CHECK(poset.classical_of[v] == c);
        }
    }
}

TEST_CASE("k invariance report on F1") {
    ObservableSet f1 = f1_observables();
    ContextPoset poset = build_context_poset(f1, {});
    KInvarianceReport report = k_invariance_report(f1, poset, {0.5, -1.0, 2.0});
    REQUIRE(report.entries.size() == 6);
    for (const KInvarianceEntry& e : report.entries) {
        if (e.k == 2.0 && e.context == "{z}") {
            CHECK(!e.equal);
            CHECK(e.collision_flag);
        } else {
            CHECK(e.equal);
        }
    }
    CHECK(report.all_equal_or_flagged());
    CHECK_THROWS_AS(k_invariance_report(f1, poset, {0.0}), ParseError);
}

TEST_CASE("classical poset construction") {
    ObservableSet f4 = f4_observables();
    ClassicalPoset cp = make_classical_poset(f4, enumerate_commutative_subsets(f4));
    REQUIRE(cp.po.size() == 4);
    size_t empty = cp.index_of(ctx({}));
    size_t both = cp.index_of(ctx({0, 1}));
    for (size_t i = 0; i < 4; ++i) {
        CHECK(cp.po.leq(empty, i));
        CHECK(cp.po.leq(i, both));
    }
    CHECK(!cp.po.leq(cp.index_of(ctx({0})), cp.index_of(ctx({1}))));
}
