#include "quantopos/matrix.hpp"

#include <Eigen/Eigenvalues>

namespace quantopos {

Mat identity_matrix(Eigen::Index n) { return Mat::Identity(n, n); }

Mat zero_matrix(Eigen::Index n) { return Mat::Zero(n, n); }

Mat pauli_x() {
    Mat m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Mat pauli_y() {
    Mat m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

Mat pauli_z() {
    Mat m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

double frobenius(const Mat& a) { return a.norm(); }

Mat commutator(const Mat& a, const Mat& b) { return a * b - b * a; }

bool is_square(const Mat& a) { return a.rows() == a.cols(); }

bool is_hermitian(const Mat& a, const Tolerance& tol) {
    if (!is_square(a)) return false;
    return frobenius(a - a.adjoint()) < tol.at(frobenius(a));
}

bool is_unitary(const Mat& a, const Tolerance& tol) {
    if (!is_square(a)) return false;
    Mat gram = a.adjoint() * a;
    return frobenius(gram - identity_matrix(a.rows())) < tol.at(frobenius(a));
}

bool approx_equal(const Mat& a, const Mat& b, const Tolerance& tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    double scale = std::max(frobenius(a), frobenius(b));
    return frobenius(a - b) < tol.at(scale);
}

Mat hermitian_exp(const Mat& a, double k, const Tolerance& tol) {
    if (!is_square(a)) throw NonHermitian("hermitian_exp: matrix is not square");
    if (!is_hermitian(a, tol)) throw NonHermitian("hermitian_exp: matrix fails the symmetry check");

    // Symmetrize before decomposing so round-off in the input cannot leak
    // into complex eigenvalues.
    Mat sym = (a + a.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Mat> es(sym);
    if (es.info() != Eigen::Success) throw Error("hermitian_exp: eigendecomposition failed");

    Eigen::VectorXcd phases(sym.rows());
    for (Eigen::Index i = 0; i < sym.rows(); ++i) {
        phases(i) = std::exp(Complex(0, k * es.eigenvalues()(i)));
    }
    Mat result = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    if (!is_unitary(result, tol)) throw Error("hermitian_exp: result failed the unitarity check");
    return result;
}

}  // namespace quantopos
