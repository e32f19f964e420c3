#include "quantopos/star_algebra.hpp"

#include <Eigen/SVD>

namespace quantopos {

namespace {

Eigen::VectorXcd vectorize(const Mat& m) {
    return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

Mat unvectorize(const Eigen::VectorXcd& v, Eigen::Index n) {
    return Eigen::Map<const Mat>(v.data(), n, n);
}

void check_dims(Eigen::Index dim, const std::vector<Mat>& mats, const char* who) {
    for (const Mat& m : mats) {
        if (m.rows() != dim || m.cols() != dim) {
            throw DimensionMismatch(std::string(who) + ": matrix of shape " +
                                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                    " does not match ambient dim " + std::to_string(dim));
        }
    }
}

bool pairwise_commuting(const std::vector<Mat>& mats, const Tolerance& tol) {
    for (size_t i = 0; i < mats.size(); ++i) {
        for (size_t j = i + 1; j < mats.size(); ++j) {
            double scale = std::max(frobenius(mats[i]), frobenius(mats[j]));
            if (frobenius(commutator(mats[i], mats[j])) >= tol.at(scale)) return false;
        }
    }
    return true;
}

// Intersects the column space spanned by the orthonormal columns of basis
// with the null space of the linear map x -> (M x_mat - x_mat M) applied to
// vectorized matrices. basis is n^2 x r with orthonormal columns.
Eigen::MatrixXcd constrain_by_commutation(const Eigen::MatrixXcd& basis, const Mat& m,
                                          Eigen::Index n, const Tolerance& tol) {
    if (basis.cols() == 0) return basis;
    Eigen::MatrixXcd constrained(n * n, basis.cols());
    for (Eigen::Index c = 0; c < basis.cols(); ++c) {
        Mat x = unvectorize(basis.col(c), n);
        constrained.col(c) = vectorize(m * x - x * m);
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(constrained, Eigen::ComputeFullV);
    double cutoff = tol.at(svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0);
    Eigen::Index keep_from = 0;
    while (keep_from < svd.singularValues().size() && svd.singularValues()(keep_from) >= cutoff) {
        ++keep_from;
    }
    // Null-space directions inside the current span.
    Eigen::MatrixXcd null_coords = svd.matrixV().rightCols(basis.cols() - keep_from);
    return basis * null_coords;
}

StarAlgebra algebra_from_orthonormal_columns(Eigen::Index n, const Eigen::MatrixXcd& cols,
                                             const Tolerance& tol) {
    StarAlgebra alg;
    alg.dim = n;
    double scale = std::sqrt(static_cast<double>(n));
    for (Eigen::Index c = 0; c < cols.cols(); ++c) {
        alg.basis.push_back(unvectorize(cols.col(c), n) * scale);
    }
    alg.commutative = pairwise_commuting(alg.basis, tol);
    return alg;
}

}  // namespace

std::vector<Mat> orthonormal_span(Eigen::Index dim, const std::vector<Mat>& spanning,
                                  const Tolerance& tol) {
    check_dims(dim, spanning, "orthonormal_span");
    if (spanning.empty()) return {};
    Eigen::MatrixXcd stacked(dim * dim, static_cast<Eigen::Index>(spanning.size()));
    for (size_t i = 0; i < spanning.size(); ++i) {
        stacked.col(static_cast<Eigen::Index>(i)) = vectorize(spanning[i]);
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(stacked, Eigen::ComputeThinU);
    double sigma_max = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
    double cutoff = tol.at(sigma_max);
    std::vector<Mat> basis;
    double scale = std::sqrt(static_cast<double>(dim));
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
        if (svd.singularValues()(i) >= cutoff) {
            basis.push_back(unvectorize(svd.matrixU().col(i), dim) * scale);
        }
    }
    return basis;
}

double membership_residual(const StarAlgebra& alg, const Mat& m) {
    Mat projection = zero_matrix(alg.dim);
    double n = static_cast<double>(alg.dim);
    for (const Mat& b : alg.basis) {
        Complex coeff = (b.adjoint() * m).trace() / n;
        projection += coeff * b;
    }
    return frobenius(m - projection);
}

bool algebra_membership(const StarAlgebra& alg, const Mat& m, const Tolerance& tol) {
    if (m.rows() != alg.dim || m.cols() != alg.dim) {
        throw DimensionMismatch("algebra_membership: ambient dimensions differ");
    }
    return membership_residual(alg, m) < tol.at(frobenius(m));
}

bool span_leq(const StarAlgebra& a, const StarAlgebra& b, const Tolerance& tol) {
    if (a.dim != b.dim) throw DimensionMismatch("span_leq: ambient dimensions differ");
    for (const Mat& m : a.basis) {
        if (!algebra_membership(b, m, tol)) return false;
    }
    return true;
}

bool span_equal(const StarAlgebra& a, const StarAlgebra& b, const Tolerance& tol) {
    return a.rank() == b.rank() && span_leq(a, b, tol) && span_leq(b, a, tol);
}

StarAlgebra commutant(Eigen::Index dim, const std::vector<Mat>& s, const Tolerance& tol) {
    check_dims(dim, s, "commutant");
    // Start from all of M_n, then intersect with each commutation constraint.
    // Constraints are enforced for M and M*, so the result is *-closed even
    // for non-*-closed inputs.
    Eigen::MatrixXcd basis = Eigen::MatrixXcd::Identity(dim * dim, dim * dim);
    for (const Mat& m : s) {
        basis = constrain_by_commutation(basis, m, dim, tol);
        basis = constrain_by_commutation(basis, m.adjoint(), dim, tol);
    }
    return algebra_from_orthonormal_columns(dim, basis, tol);
}

StarAlgebra double_commutant(Eigen::Index dim, const std::vector<Mat>& s, const Tolerance& tol,
                             bool require_commutative) {
    StarAlgebra once = commutant(dim, s, tol);
    StarAlgebra twice = commutant(dim, once.basis, tol);
    if (require_commutative && !twice.commutative) {
        throw NonCommutativeResult(
            "double_commutant: commutative result expected but the generator set does not commute");
    }
    return twice;
}

StarAlgebra generated_star_algebra(Eigen::Index dim, const std::vector<Mat>& gens,
                                   const Tolerance& tol) {
    check_dims(dim, gens, "generated_star_algebra");
    if (!pairwise_commuting(gens, tol)) {
        throw NonCommutingGenerators("generated_star_algebra: generators do not pairwise commute");
    }

    std::vector<Mat> spanning;
    spanning.push_back(identity_matrix(dim));
    for (const Mat& g : gens) {
        spanning.push_back(g);
        spanning.push_back(g.adjoint());
    }
    std::vector<Mat> basis = orthonormal_span(dim, spanning, tol);

    // Close under products; rank is bounded by dim^2 so this terminates.
    while (true) {
        std::vector<Mat> extended = basis;
        for (const Mat& a : basis) {
            for (const Mat& b : basis) {
                extended.push_back(a * b);
            }
        }
        std::vector<Mat> closed = orthonormal_span(dim, extended, tol);
        if (closed.size() == basis.size()) break;
        basis = std::move(closed);
    }

    StarAlgebra alg;
    alg.dim = dim;
    alg.basis = std::move(basis);
    alg.commutative = pairwise_commuting(alg.basis, tol);

    StarAlgebra reference = double_commutant(dim, gens, tol);
    if (!span_equal(alg, reference, tol)) {
        throw InternalCheckError(
            "generated_star_algebra: closure disagrees with the double commutant");
    }
    return alg;
}

std::optional<std::string> validate_star_algebra(const StarAlgebra& alg, const Tolerance& tol) {
    if (alg.dim <= 0) return "ambient dimension must be positive";
    for (const Mat& b : alg.basis) {
        if (b.rows() != alg.dim || b.cols() != alg.dim) return "basis element of wrong shape";
        if (!b.allFinite()) return "basis element has non-finite entries";
    }
    if (!algebra_membership(alg, identity_matrix(alg.dim), tol)) return "identity not in span";
    for (const Mat& b : alg.basis) {
        if (!algebra_membership(alg, b.adjoint(), tol)) return "span not closed under adjoint";
    }
    for (const Mat& a : alg.basis) {
        for (const Mat& b : alg.basis) {
            if (!algebra_membership(alg, a * b, tol)) return "span not closed under product";
        }
    }
    if (alg.commutative) {
        for (size_t i = 0; i < alg.basis.size(); ++i) {
            for (size_t j = i + 1; j < alg.basis.size(); ++j) {
                double scale = std::max(frobenius(alg.basis[i]), frobenius(alg.basis[j]));
                if (frobenius(commutator(alg.basis[i], alg.basis[j])) >= tol.at(scale)) {
                    return "commutative flag set but basis elements do not commute";
                }
            }
        }
    }
    return std::nullopt;
}

}  // namespace quantopos
