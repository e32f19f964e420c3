#ifndef QUANTOPOS_MATRIX_HPP
#define QUANTOPOS_MATRIX_HPP

#include <Eigen/Dense>
#include <complex>

#include "quantopos/errors.hpp"

namespace quantopos {

using Mat = Eigen::MatrixXcd;
using Complex = std::complex<double>;

// Single global numerical knob. Every rank / span / commutator decision uses
// base * (1 + scale) where scale is the largest matrix norm involved.
struct Tolerance {
    double base = 1e-9;

    double at(double scale) const { return base * (1.0 + scale); }
};

Mat identity_matrix(Eigen::Index n);
Mat zero_matrix(Eigen::Index n);

// Pauli matrices, ubiquitous in the 2x2 fixtures.
Mat pauli_x();
Mat pauli_y();
Mat pauli_z();

double frobenius(const Mat& a);
Mat commutator(const Mat& a, const Mat& b);

bool is_square(const Mat& a);
bool is_hermitian(const Mat& a, const Tolerance& tol = {});
bool is_unitary(const Mat& a, const Tolerance& tol = {});
bool approx_equal(const Mat& a, const Mat& b, const Tolerance& tol = {});

// e^{ikA} for hermitian A, via eigendecomposition. Throws NonHermitian.
Mat hermitian_exp(const Mat& a, double k = 1.0, const Tolerance& tol = {});

}  // namespace quantopos

#endif
