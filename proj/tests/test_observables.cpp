#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "fixtures.hpp"
#include "quantopos/observables.hpp"

using namespace quantopos;
using namespace quantopos::tests;

namespace {

std::vector<std::string> labels_of(const ObservableSet& obs,
                                   const std::vector<CommutativeContext>& cs) {
    std::vector<std::string> out;
    for (const CommutativeContext& c : cs) out.push_back(context_label(obs, c));
    return out;
}

}  // namespace

TEST_CASE("lie commutation through the representation") {
    ObservableSet f4 = f4_observables();
    CHECK(lie_commutes(f4, "z", "z'"));
    CHECK(lie_commutes(f4, "z", "z"));

    ObservableSet f3 = f3_observables();
    CHECK(!lie_commutes(f3, "x", "z"));
    CHECK(lie_commutes(f3, "x", "x"));
    CHECK_THROWS_AS(lie_commutes(f3, "x", "nope"), UnknownLabel);
}

TEST_CASE("lie_commutes is symmetric and reflexive") {
    ObservableSet f3 = f3_observables();
    for (const auto& a : f3.entries) {
        CHECK(lie_commutes(f3, a.label, a.label));
        for (const auto& b : f3.entries) {
            CHECK(lie_commutes(f3, a.label, b.label) == lie_commutes(f3, b.label, a.label));
        }
    }
}

TEST_CASE("commutative subset enumeration") {
    CHECK(labels_of(f1_observables(), enumerate_commutative_subsets(f1_observables())) ==
          std::vector<std::string>{"{}", "{z}"});
    CHECK(labels_of(f3_observables(), enumerate_commutative_subsets(f3_observables())) ==
          std::vector<std::string>{"{}", "{x}", "{z}"});
    CHECK(labels_of(f4_observables(), enumerate_commutative_subsets(f4_observables())) ==
          std::vector<std::string>{"{}", "{z}", "{z'}", "{z,z'}"});
}

TEST_CASE("commutative subsets are downward closed and contain every singleton") {
    ObservableSet f4 = f4_observables();
    auto subsets = enumerate_commutative_subsets(f4);
    CHECK(subsets.front().members.empty());
    for (size_t i = 0; i < f4.size(); ++i) {
        CommutativeContext single{{i}};
        CHECK(std::count(subsets.begin(), subsets.end(), single) == 1);
    }
    for (const CommutativeContext& c : subsets) {
        // drop one member at a time; the result must be listed
        for (size_t drop = 0; drop < c.members.size(); ++drop) {
            CommutativeContext smaller = c;
            smaller.members.erase(smaller.members.begin() + static_cast<long>(drop));
            CHECK(std::count(subsets.begin(), subsets.end(), smaller) == 1);
        }
    }
}

TEST_CASE("enumeration guard") {
    ObservableSet big;
    big.dim = 2;
    for (int i = 0; i < 17; ++i) {
        big.entries.push_back({"o" + std::to_string(i), identity_matrix(2)});
    }
    CHECK_THROWS_AS(enumerate_commutative_subsets(big), TooManyObservables);
}

TEST_CASE("faithfulness report on the canonical fixtures") {
    ObservableSet f1 = f1_observables();
    FaithfulnessReport at1 = faithfulness_report(f1, 1.0);
    CHECK(at1.faithful());
    CHECK(at1.collision_free());

    // eigenvalue gap pi equals 2*pi/2, so k=2 collapses the spectrum
    FaithfulnessReport at2 = faithfulness_report(f1, 2.0);
    CHECK(at2.faithful());
    CHECK(at2.spectral_collisions == std::vector<std::string>{"z"});

    FaithfulnessReport at_half = faithfulness_report(f1, 0.5);
    CHECK(at_half.collision_free());
    FaithfulnessReport at_minus = faithfulness_report(f1, -1.0);
    CHECK(at_minus.collision_free());
}

TEST_CASE("duplicate operators are reported as unfaithfulness") {
    ObservableSet obs = f1_observables();
    obs.entries.push_back({"z_copy", obs.entries[0].matrix});
    FaithfulnessReport report = faithfulness_report(obs, 1.0);
    CHECK(!report.faithful());
    REQUIRE(report.hat_collisions.size() == 1);
    CHECK(report.hat_collisions[0] == std::pair<std::string, std::string>{"z", "z_copy"});
    REQUIRE(report.exp_collisions.size() == 1);
}

TEST_CASE("exponential-only unfaithfulness is caught") {
    // shifted by 2*pi on one eigenvalue: distinct operators, equal exponentials
    ObservableSet obs;
    obs.dim = 2;
    obs.entries.push_back({"a", diag2(M_PI / 2, -M_PI / 2)});
    obs.entries.push_back({"b", diag2(M_PI / 2 + 2 * M_PI, -M_PI / 2)});
    FaithfulnessReport report = faithfulness_report(obs, 1.0);
    CHECK(report.hat_collisions.empty());
    REQUIRE(report.exp_collisions.size() == 1);
    CHECK(report.exp_collisions[0] == std::pair<std::string, std::string>{"a", "b"});
}

TEST_CASE("observable set validation") {
    ObservableSet empty;
    empty.dim = 2;
    CHECK_THROWS_AS(validate_observable_set(empty), ParseError);

    ObservableSet bad;
    bad.dim = 2;
    Mat m = zero_matrix(2);
    m(0, 1) = 1.0;
    bad.entries.push_back({"skew", m});
    CHECK_THROWS_WITH_AS(validate_observable_set(bad), "observable 'skew' is not hermitian",
                         NonHermitian);

    ObservableSet dup = f1_observables();
    dup.entries.push_back({"z", identity_matrix(2)});
    CHECK_THROWS_AS(validate_observable_set(dup), ParseError);
}
