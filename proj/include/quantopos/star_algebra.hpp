#ifndef QUANTOPOS_STAR_ALGEBRA_HPP
#define QUANTOPOS_STAR_ALGEBRA_HPP

#include <optional>
#include <string>
#include <vector>

#include "quantopos/matrix.hpp"

namespace quantopos {

// A unital *-closed span of n x n matrices, kept as a basis orthonormal
// under <A,B> = tr(A*B)/n. In finite dimension this is exactly a von
// Neumann algebra once the span is closed under products.
struct StarAlgebra {
    Eigen::Index dim = 0;
    std::vector<Mat> basis;
    bool commutative = false;

    size_t rank() const { return basis.size(); }
};

// Orthonormalizes a spanning set via SVD of the vectorized matrices;
// singular values below tol.at(sigma_max) are discarded.
std::vector<Mat> orthonormal_span(Eigen::Index dim, const std::vector<Mat>& spanning,
                                  const Tolerance& tol = {});

// Distance from m to span(alg.basis) in the Frobenius norm.
double membership_residual(const StarAlgebra& alg, const Mat& m);

// true iff m lies in the span within tolerance. Throws DimensionMismatch.
bool algebra_membership(const StarAlgebra& alg, const Mat& m, const Tolerance& tol = {});

bool span_leq(const StarAlgebra& a, const StarAlgebra& b, const Tolerance& tol = {});
bool span_equal(const StarAlgebra& a, const StarAlgebra& b, const Tolerance& tol = {});

// Basis of {X : XM = MX for all M in s and all M*}. Empty s gives the full
// matrix algebra. The commutative flag on the result reflects an actual
// pairwise-commutator check.
StarAlgebra commutant(Eigen::Index dim, const std::vector<Mat>& s, const Tolerance& tol = {});

// commutant applied twice: the smallest *-closed unital product-closed span
// containing s. If require_commutative and the result fails the pairwise
// check, throws NonCommutativeResult (signals a non-commuting generator set).
StarAlgebra double_commutant(Eigen::Index dim, const std::vector<Mat>& s,
                             const Tolerance& tol = {}, bool require_commutative = false);

// Smallest *-closed unital span containing gens, by closure iteration under
// products. Generators must pairwise commute (NonCommutingGenerators);
// the result is cross-checked against double_commutant.
StarAlgebra generated_star_algebra(Eigen::Index dim, const std::vector<Mat>& gens,
                                   const Tolerance& tol = {});

// Returns std::nullopt when every StarAlgebra invariant holds, otherwise a
// description of the first failing one.
std::optional<std::string> validate_star_algebra(const StarAlgebra& alg, const Tolerance& tol = {});

}  // namespace quantopos

#endif
