#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "quantopos/presheaf.hpp"

using namespace quantopos;
using namespace quantopos::tests;

namespace {

FinitePoset one_object_poset() {
    return make_poset({{true}}, {"pt"});
}

FinitePoset two_chain() {
    return make_poset({{true, true}, {false, true}}, {"bot", "top"});
}

// F4's classical poset shape: a diamond with incomparable middles.
FinitePoset diamond() {
    return make_poset({{true, true, true, true},
                       {false, true, false, true},
                       {false, false, true, true},
                       {false, false, false, true}},
                      {"bot", "l", "r", "top"});
}

}  // namespace

TEST_CASE("presheaf validation on Q2 and a broken mutation") {
    F2 f2 = make_f2();
    Presheaf q2 = make_q2(f2);
    CHECK(!validate_presheaf(q2).has_value());

    Presheaf broken = q2;
    broken.res[f2.ax][f2.ci][0] = 7;  // image out of range
    CHECK(validate_presheaf(broken).has_value());

    Presheaf not_identity = q2;
    not_identity.res[f2.ax][f2.ax] = {1, 0};
    auto why = validate_presheaf(not_identity);
    REQUIRE(why.has_value());
    CHECK(why->find("identity") != std::string::npos);

    Presheaf single;
    single.poset = one_object_poset();
    single.elems = {{"a", "b"}};
    single.res = {{{0, 1}}};
    CHECK(!validate_presheaf(single).has_value());
}

TEST_CASE("composition violations are caught") {
    // chain of three objects; break res(top->bot) against the composite
    FinitePoset chain3 = make_poset({{true, true, true}, {false, true, true}, {false, false, true}},
                                    {"a", "b", "c"});
    Presheaf p;
    p.poset = chain3;
    p.elems = {{"x"}, {"x"}, {"x", "y"}};
    p.res.assign(3, std::vector<std::vector<uint32_t>>(3));
    p.res[0][0] = {0};
    p.res[1][1] = {0};
    p.res[2][2] = {0, 1};
    p.res[1][0] = {0};
    p.res[2][1] = {0, 0};
    p.res[2][0] = {0, 0};
    CHECK(!validate_presheaf(p).has_value());
    // now let the long edge disagree with the composite through b
    Presheaf q = p;
    q.elems[0] = {"x", "z"};
    q.res[0][0] = {0, 1};
    q.res[1][0] = {0};
    q.res[2][0] = {0, 1};
    auto why = validate_presheaf(q);
    REQUIRE(why.has_value());
    CHECK(why->find("compose") != std::string::npos);
}

TEST_CASE("omega fiber sizes") {
    F2 f2 = make_f2();
    Omega omega = make_omega(f2.view);
    CHECK(omega.pre.fiber_size(f2.ci) == 2);
    CHECK(omega.pre.fiber_size(f2.dz) == 3);
    CHECK(omega.pre.fiber_size(f2.ax) == 3);
    CHECK(!validate_presheaf(omega.pre).has_value());

    Omega tiny = make_omega(one_object_poset());
    CHECK(tiny.pre.fiber_size(0) == 2);

    Omega chain = make_omega(two_chain());
    CHECK(chain.pre.fiber_size(1) == 3);

    // restrictions preserve downward closure and the maximal sieve is natural
    for (size_t v = 0; v < 3; ++v) {
        for (size_t u = 0; u < 3; ++u) {
            if (u == v || !f2.view.leq(u, v)) continue;
            uint32_t top_cut = omega.pre.restricted(v, u, static_cast<uint32_t>(omega.top_index[v]));
            CHECK(top_cut == omega.top_index[u]);
            for (uint32_t i = 0; i < omega.pre.fiber_size(v); ++i) {
                CHECK(sieve_valid(f2.view, omega.sieves[u][omega.pre.restricted(v, u, i)]));
            }
        }
    }
}

TEST_CASE("hom enumeration counts on the fixtures") {
    F2 f2 = make_f2();
    Presheaf q2 = make_q2(f2);
    Presheaf term = terminal_presheaf(f2.view);

    // global points: the A_x component may pick q1 or q2
    CHECK(hom_enumerate(term, q2).size() == 2);
    CHECK(hom_enumerate(q2, term).size() == 1);

    std::vector<NatTransform> forced = hom_enumerate(one_down(f2.view, f2.dz), q2);
    REQUIRE(forced.size() == 1);
    CHECK(forced[0].comp[f2.dz] == std::vector<uint32_t>{0});
    CHECK(forced[0].comp[f2.ci] == std::vector<uint32_t>{0});
    CHECK(forced[0].comp[f2.ax].empty());

    for (const NatTransform& t : hom_enumerate(q2, q2)) {
        CHECK(!validate_nat(q2, q2, t).has_value());
    }

    CHECK_THROWS_AS(hom_enumerate(q2, make_omega(f2.view).pre, 2), SearchSpaceTooLarge);
}

TEST_CASE("representables and sieve-restricted subterminals") {
    F2 f2 = make_f2();
    Presheaf at_ci = one_down(f2.view, f2.ci);
    CHECK(at_ci.fiber_size(f2.ci) == 1);
    CHECK(at_ci.fiber_size(f2.dz) == 0);
    CHECK(at_ci.fiber_size(f2.ax) == 0);

    Presheaf at_dz = one_down(f2.view, f2.dz);
    CHECK(at_dz.fiber_size(f2.ci) == 1);
    CHECK(at_dz.fiber_size(f2.dz) == 1);
    CHECK(at_dz.fiber_size(f2.ax) == 0);

    Presheaf at_ax = one_down(f2.view, f2.ax);
    CHECK(at_ax.fiber_size(f2.ci) == 1);
    CHECK(at_ax.fiber_size(f2.dz) == 0);
    CHECK(at_ax.fiber_size(f2.ax) == 1);

    CHECK_THROWS_AS(one_down(f2.view, 99), UnknownObject);

    Sieve just_ci{f2.ax, Bitset(3)};
    just_ci.members.set(f2.ci);
    Presheaf restricted = one_omega(f2.view, just_ci);
    CHECK(restricted.fiber_size(f2.ci) == 1);
    CHECK(restricted.fiber_size(f2.dz) == 0);
    CHECK(restricted.fiber_size(f2.ax) == 0);

    CHECK(presheaf_equal(one_omega(f2.view, maximal_sieve(f2.view, f2.ax)), at_ax));

    Sieve empty{f2.ax, Bitset(3)};
    Presheaf nothing = one_omega(f2.view, empty);
    for (size_t v = 0; v < 3; ++v) CHECK(nothing.fiber_size(v) == 0);

    Sieve invalid{f2.ax, Bitset(3)};
    invalid.members.set(f2.dz);  // D_z is not below A_x
    CHECK_THROWS_AS(one_omega(f2.view, invalid), InvalidSieve);
}

TEST_CASE("q_down restrictions of Q2") {
    F2 f2 = make_f2();
    Presheaf q2 = make_q2(f2);

    Subobject at_ax = q_down(q2, f2.ax);
    CHECK(at_ax.keep[f2.ci].count() == 1);
    CHECK(at_ax.keep[f2.dz].count() == 0);
    CHECK(at_ax.keep[f2.ax].count() == 2);

    Subobject at_ci = q_down(q2, f2.ci);
    CHECK(at_ci.keep[f2.ci].count() == 1);
    CHECK(at_ci.keep[f2.dz].count() == 0);
    CHECK(at_ci.keep[f2.ax].count() == 0);

    // top of a chain keeps everything
    FinitePoset chain = two_chain();
    Presheaf term = terminal_presheaf(chain);
    CHECK(subobject_equal(q_down(term, 1), full_subobject(term)));
    CHECK_THROWS_AS(q_down(q2, 99), UnknownObject);
}

TEST_CASE("characteristic morphisms and their inversion") {
    F2 f2 = make_f2();
    Presheaf q2 = make_q2(f2);
    Omega omega = make_omega(f2.view);
    Subobject s2 = make_s2(f2, q2);

    NatTransform chi = characteristic_morphism(q2, s2, omega);
    // chi at A_x of q1 is the sieve {CI}
    Bitset expected(3);
    expected.set(f2.ci);
    CHECK(omega.sieves[f2.ax][chi.comp[f2.ax][0]].members == expected);
    CHECK(omega.sieves[f2.ax][chi.comp[f2.ax][1]].members == expected);
    CHECK(!validate_nat(q2, omega.pre, chi).has_value());

    // chi of the full subobject is constantly the maximal sieve
    NatTransform top = characteristic_morphism(q2, full_subobject(q2), omega);
    for (size_t v = 0; v < 3; ++v) {
        for (uint32_t e = 0; e < q2.fiber_size(v); ++e) {
            CHECK(top.comp[v][e] == omega.top_index[v]);
        }
    }

    CHECK(subobject_equal(subobject_of_char(q2, omega, chi), s2));

    Subobject bad;
    bad.keep.assign(3, Bitset(1));
    CHECK_THROWS_AS(characteristic_morphism(q2, bad, omega), NotASubobject);
}

TEST_CASE("the classifying square is a pullback") {
    F2 f2 = make_f2();
    Presheaf q2 = make_q2(f2);
    Omega omega = make_omega(f2.view);
    Subobject s2 = make_s2(f2, q2);
    NatTransform chi = characteristic_morphism(q2, s2, omega);
    Presheaf term = terminal_presheaf(f2.view);

    PullbackPresheaf pb = pullback(term, q2, omega.pre, true_transform(omega), chi);
    SubPresheaf expected = subobject_presheaf(q2, s2);
    CHECK(find_isomorphism(pb.pre, expected.pre).has_value());
}

TEST_CASE("finite limits computed fiberwise") {
    F2 f2 = make_f2();
    Presheaf q2 = make_q2(f2);
    Presheaf term = terminal_presheaf(f2.view);

    ProductPresheaf unit = product(term, q2);
    CHECK(find_isomorphism(unit.pre, q2).has_value());
    CHECK(!validate_nat(unit.pre, q2, unit.onto_second).has_value());

    // identity vs the swap of q1 and q2
    NatTransform ident = identity_transform(q2);
    NatTransform swap = ident;
    swap.comp[f2.ax] = {1, 0};
    REQUIRE(!validate_nat(q2, q2, swap).has_value());
    EqualizerPresheaf eq = equalizer(q2, q2, ident, swap);
    CHECK(eq.pre.fiber_size(f2.ci) == 1);
    CHECK(eq.pre.fiber_size(f2.dz) == 1);
    CHECK(eq.pre.fiber_size(f2.ax) == 0);

    CHECK_THROWS_AS(product(q2, terminal_presheaf(two_chain())), MalformedDiagram);
    NatTransform wrong;
    CHECK_THROWS_AS(equalizer(q2, q2, ident, wrong), MalformedDiagram);
}

TEST_CASE("exponentials") {
    F2 f2 = make_f2();
    Presheaf q2 = make_q2(f2);
    Presheaf term = terminal_presheaf(f2.view);

    ExponentialPresheaf by_unit = exponential(term, q2);
    CHECK(by_unit.pre.fiber_size(f2.ci) == 1);
    CHECK(by_unit.pre.fiber_size(f2.dz) == 1);
    CHECK(by_unit.pre.fiber_size(f2.ax) == 2);

    ExponentialPresheaf to_term = exponential(q2, term);
    for (size_t v = 0; v < 3; ++v) CHECK(to_term.pre.fiber_size(v) == 1);

    // core-restricted Q2 has fibers (p, d, p); morphisms from Q2's downset
    // at A_x are forced to constants
    Presheaf core_q2 = make_q2(f2);
    core_q2.elems[f2.ax] = {"p"};
    core_q2.res[f2.ax][f2.ax] = {0};
    core_q2.res[f2.ax][f2.ci] = {0};
    ExponentialPresheaf power = exponential(q2, core_q2);
    CHECK(power.pre.fiber_size(f2.ax) == 1);
    CHECK(!validate_presheaf(power.pre).has_value());

    // exponential bijection Hom(S x Q, R) = Hom(S, R^Q), realized by currying
    for (const Presheaf& s : {one_down(f2.view, f2.dz), terminal_presheaf(f2.view), q2}) {
        ProductPresheaf sq = product(s, q2);
        std::vector<NatTransform> direct = hom_enumerate(sq.pre, core_q2);
        std::vector<NatTransform> curried = hom_enumerate(s, power.pre);
        REQUIRE(direct.size() == curried.size());
        std::vector<bool> hit(curried.size(), false);
        for (const NatTransform& h : direct) {
            NatTransform c = curry_transform(s, q2, core_q2, power, h);
            auto it = std::find(curried.begin(), curried.end(), c);
            REQUIRE(it != curried.end());
            size_t idx = static_cast<size_t>(it - curried.begin());
            CHECK(!hit[idx]);
            hit[idx] = true;
        }
    }
}

TEST_CASE("yoneda-style counting for representables") {
    F2 f2 = make_f2();
    Presheaf q2 = make_q2(f2);
    Omega omega = make_omega(f2.view);
    std::mt19937_64 rng(5);
    Presheaf rando = random_presheaf(f2.view, rng);
    for (const Presheaf& r : {q2, omega.pre, rando}) {
        for (size_t v = 0; v < f2.view.size(); ++v) {
            CHECK(hom_enumerate(one_down(f2.view, v), r).size() == r.fiber_size(v));
        }
    }
}

TEST_CASE("random presheaves are always functorial") {
    std::mt19937_64 rng(42);
    F2 f2 = make_f2();
    FinitePoset dia = diamond();
    for (int i = 0; i < 60; ++i) {
        Presheaf a = random_presheaf(f2.view, rng);
        CAPTURE(i);
        CHECK(!validate_presheaf(a).has_value());
        Presheaf b = random_presheaf(dia, rng);
        CHECK(!validate_presheaf(b).has_value());
    }
}

TEST_CASE("subobject enumeration of Q2") {
    F2 f2 = make_f2();
    Presheaf q2 = make_q2(f2);
    std::vector<Subobject> subs = enumerate_subobjects(q2);
    // empty, or p plus any of 2 x 4 upper choices
    CHECK(subs.size() == 9);
    for (const Subobject& s : subs) CHECK(!validate_subobject(q2, s).has_value());
    CHECK_THROWS_AS(enumerate_subobjects(q2, 2), SearchSpaceTooLarge);
}

TEST_CASE("isomorphism search respects structure") {
    F2 f2 = make_f2();
    Presheaf q2 = make_q2(f2);
    CHECK(find_isomorphism(q2, q2).has_value());

    // same fiber sizes, different restriction structure: q1 -> p, q2 -> p
    // versus a presheaf whose A_x fiber restricts through fresh symbols
    Presheaf other = q2;
    other.elems[f2.dz] = {"d"};
    CHECK(find_isomorphism(q2, other).has_value());

    Presheaf term = terminal_presheaf(f2.view);
    CHECK(!find_isomorphism(q2, term).has_value());
}
