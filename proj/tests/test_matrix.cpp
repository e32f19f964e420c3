#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "quantopos/star_algebra.hpp"

using namespace quantopos;
using quantopos::tests::diag2;

namespace {

StarAlgebra diagonal_algebra_2() {
    StarAlgebra d2;
    d2.dim = 2;
    Mat e00 = zero_matrix(2), e11 = zero_matrix(2);
    e00(0, 0) = std::sqrt(2.0);
    e11(1, 1) = std::sqrt(2.0);
    d2.basis = {e00, e11};
    d2.commutative = true;
    return d2;
}

StarAlgebra scalar_algebra_2() {
    StarAlgebra ci;
    ci.dim = 2;
    ci.basis = {identity_matrix(2)};
    ci.commutative = true;
    return ci;
}

StarAlgebra ax_algebra() { return generated_star_algebra(2, {pauli_x()}); }

// Commuting *-closed families for the property checks: unitary conjugates of
// diagonal real matrices.
std::vector<Mat> random_commuting_family(std::mt19937_64& rng, Eigen::Index n, size_t count) {
    std::normal_distribution<double> gauss;
    Mat g(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) g(r, c) = Complex(gauss(rng), gauss(rng));
    }
    Eigen::HouseholderQR<Mat> qr(g);
    Mat u = qr.householderQ();
    std::vector<Mat> family;
    std::uniform_int_distribution<int> entry(-2, 2);
    for (size_t i = 0; i < count; ++i) {
        Mat d = zero_matrix(n);
        for (Eigen::Index r = 0; r < n; ++r) d(r, r) = entry(rng);
        family.push_back(u * d * u.adjoint());
    }
    return family;
}

}  // namespace

TEST_CASE("hermitian_exp on the zero matrix is the identity") {
    CHECK(approx_equal(hermitian_exp(zero_matrix(2), 1.0), identity_matrix(2)));
}

TEST_CASE("hermitian_exp matches the closed form on diagonal input") {
    Mat z = diag2(M_PI / 2, -M_PI / 2);
    // oracle: e^{ik diag(a,b)} = diag(e^{ika}, e^{ikb})
    Mat expected_k1 = diag2(std::exp(Complex(0, M_PI / 2)), std::exp(Complex(0, -M_PI / 2)));
    CHECK(approx_equal(hermitian_exp(z, 1.0), expected_k1));
    CHECK(approx_equal(hermitian_exp(z, 1.0), diag2(Complex(0, 1), Complex(0, -1))));

    Mat expected_k2 = diag2(std::exp(Complex(0, M_PI)), std::exp(Complex(0, -M_PI)));
    CHECK(approx_equal(hermitian_exp(z, 2.0), expected_k2));
    CHECK(approx_equal(hermitian_exp(z, 2.0), -identity_matrix(2)));
}

TEST_CASE("hermitian_exp rejects non-hermitian input") {
    Mat bad = zero_matrix(2);
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS(hermitian_exp(bad, 1.0), NonHermitian);
}

TEST_CASE("hermitian_exp inverse pairs multiply to the identity") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::Index n = 2 + (trial % 4);
        Mat g(n, n);
        for (Eigen::Index r = 0; r < n; ++r) {
            for (Eigen::Index c = 0; c < n; ++c) g(r, c) = Complex(gauss(rng), gauss(rng));
        }
        Mat h = (g + g.adjoint()) / 2.0;
        double k = 0.25 + trial * 0.15;
        CHECK(approx_equal(hermitian_exp(h, k) * hermitian_exp(h, -k), identity_matrix(n)));
    }
}

TEST_CASE("commutant of the empty set is the full matrix algebra") {
    StarAlgebra full = commutant(2, {});
    CHECK(full.rank() == 4);
    CHECK(!full.commutative);
    CHECK(!validate_star_algebra(full).has_value());
}

TEST_CASE("commutant of a nondegenerate diagonal unitary is the diagonal algebra") {
    StarAlgebra alg = commutant(2, {diag2(Complex(0, 1), Complex(0, -1))});
    CHECK(alg.rank() == 2);
    CHECK(span_equal(alg, diagonal_algebra_2()));
}

TEST_CASE("commutant of a scalar is everything") {
    StarAlgebra alg = commutant(2, {-identity_matrix(2)});
    CHECK(alg.rank() == 4);
}

TEST_CASE("double commutant examples") {
    CHECK(span_equal(double_commutant(2, {diag2(Complex(0, 1), Complex(0, -1))}),
                     diagonal_algebra_2()));
    StarAlgebra scalars = double_commutant(2, {-identity_matrix(2)});
    CHECK(scalars.rank() == 1);
    CHECK(span_equal(scalars, scalar_algebra_2()));
    CHECK(double_commutant(2, {}).rank() == 1);
}

TEST_CASE("double commutant flags non-commuting generators when asked") {
    CHECK_THROWS_AS(double_commutant(2, {pauli_x(), pauli_z()}, {}, true), NonCommutativeResult);
    CHECK(!double_commutant(2, {pauli_x(), pauli_z()}).commutative);
}

TEST_CASE("commutant rejects mismatched ambient dimensions") {
    CHECK_THROWS_AS(commutant(2, {identity_matrix(3)}), DimensionMismatch);
}

TEST_CASE("algebra membership and its residual") {
    StarAlgebra ci = scalar_algebra_2();
    CHECK(algebra_membership(ci, identity_matrix(2)));

    Mat dz = diag2(Complex(0, 1), Complex(0, -1));
    CHECK(algebra_membership(diagonal_algebra_2(), dz));

    StarAlgebra ax = ax_algebra();
    CHECK(!algebra_membership(ax, dz));
    // the orthogonal projection drops the whole matrix: residual sqrt(2)
    CHECK(membership_residual(ax, dz) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

    CHECK_THROWS_AS(algebra_membership(ci, identity_matrix(3)), DimensionMismatch);
}

TEST_CASE("generated star algebra examples") {
    StarAlgebra trivial = generated_star_algebra(2, {});
    CHECK(trivial.rank() == 1);

    StarAlgebra ax = generated_star_algebra(2, {pauli_x()});
    CHECK(ax.rank() == 2);
    CHECK(algebra_membership(ax, identity_matrix(2)));
    CHECK(algebra_membership(ax, pauli_x()));

    StarAlgebra d2 = generated_star_algebra(2, {diag2(1, 2)});
    CHECK(d2.rank() == 2);
    CHECK(span_equal(d2, diagonal_algebra_2()));

    CHECK_THROWS_AS(generated_star_algebra(2, {pauli_x(), pauli_z()}), NonCommutingGenerators);
}

TEST_CASE("star algebra invariants on every produced algebra") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 15; ++trial) {
        Eigen::Index n = 2 + (trial % 5);
        auto family = random_commuting_family(rng, n, 1 + trial % 3);
        StarAlgebra alg = double_commutant(n, family);
        CAPTURE(trial);
        CHECK(!validate_star_algebra(alg).has_value());
        CHECK(alg.commutative);

        // inputs embed into their double commutant
        for (const Mat& m : family) CHECK(algebra_membership(alg, m));

        // idempotence of the double commutant
        StarAlgebra again = double_commutant(n, alg.basis);
        CHECK(span_equal(alg, again));

        // closure iteration agrees with the double commutant
        StarAlgebra generated = generated_star_algebra(n, family);
        CHECK(span_equal(alg, generated));
    }
}
