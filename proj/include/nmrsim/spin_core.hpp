#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

namespace nmrsim {

using cdouble = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

// Convention used throughout: spin 1 is the leftmost ket label and the most
// significant bit of a basis index; bit value 1 means the "down" state
// (m_z = -1/2). Deviation density matrices are traceless Hermitian matrices;
// no physical prefactors are carried.

// Number of spins encoded by a 2^n-dimensional square matrix.
int spin_count(const Matrix& A);

// 2x2 single-spin operators, axis in {'1','x','y','z'} ('1' = identity).
Matrix pauli(char axis);

// Kronecker product (row-major index composition, left factor most significant).
Matrix kron(const Matrix& A, const Matrix& B);

// sigma_axis acting on spin j (1-based), identity on all other spins.
Matrix embed_pauli(int n, int j, char axis);

// E_sign^j = (I + sign*sigma_z^j)/2 with sign = +1 or -1.
Matrix projector(int n, int j, int sign);

// Product operator from a per-spin label string, e.g. "z1x" for
// sigma_z(1) * sigma_x(3) on three spins.
Matrix product_operator(const std::string& factors);

struct ProductOperatorTerm {
  double coefficient = 0.0;
  std::string factors;  // one char per spin from {1,x,y,z}
};

// Expansion of a Hermitian matrix over the product-operator basis,
// c_T = Tr(T*A)/2^n. Terms with |c| < threshold are dropped. Terms are
// returned in lexicographic label order ('1' < 'x' < 'y' < 'z').
// Throws on non-Hermitian input (the coefficients would be complex).
std::vector<ProductOperatorTerm> decompose(const Matrix& A,
                                           double threshold = 1e-12);

Matrix recompose(int n, const std::vector<ProductOperatorTerm>& terms);

// popcount(l) - popcount(k): the z angular momentum of |k> minus that of |l>
// in units of hbar, under the bit = 1 <-> m_z = -1/2 convention.
int coherence_order(int k, int l, int n);

// Trace over all spins NOT listed in `keep` (1-based, strictly increasing).
// keep = {} reduces to the scalar trace (a 1x1 matrix).
Matrix partial_trace(const Matrix& rho, const std::vector<int>& keep);

double hermiticity_error(const Matrix& A);
double max_abs_diff(const Matrix& A, const Matrix& B);

// JSON form: {"dim": d, "entries": [[re, im], ...]} with entries row-major.
// The JSON round trip is bit-exact at double precision. The CSV variant has
// one matrix row per line, two columns (re, im) per entry.
std::string matrix_to_json(const Matrix& A);
Matrix matrix_from_json(const std::string& text);
std::string matrix_to_csv(const Matrix& A);
Matrix matrix_from_csv(const std::string& text);

void save_matrix_json(const std::string& path, const Matrix& A);
Matrix load_matrix_json(const std::string& path);
void save_matrix_csv(const std::string& path, const Matrix& A);
Matrix load_matrix_csv(const std::string& path);
// Dispatches on the .json / .csv extension.
Matrix load_matrix(const std::string& path);

}  // namespace nmrsim
