#pragma once

#include <complex>
#include <functional>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "nmrsim/spin_core.hpp"

namespace nmrsim::testing {

// Runs f, returns the exception message (empty string when nothing was thrown).
inline std::string thrown_message(const std::function<void()>& f) {
    try {
        f();
    } catch (const std::exception& e) {
        return e.what();
    }
    return std::string{};
}

inline Matrix random_matrix(int dim, std::mt19937& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Matrix m(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) m(r, c) = cdouble(dist(rng), dist(rng));
    return m;
}

inline Matrix random_hermitian(int dim, std::mt19937& rng) {
    Matrix m = random_matrix(dim, rng);
    return Matrix(0.5 * (m + m.adjoint()));
}

inline Matrix random_traceless_hermitian(int dim, std::mt19937& rng) {
    Matrix m = random_hermitian(dim, rng);
    m -= (m.trace() / static_cast<double>(dim)) * Matrix::Identity(dim, dim);
    return m;
}

inline Matrix random_unitary(int dim, std::mt19937& rng) {
    Eigen::HouseholderQR<Matrix> qr(random_matrix(dim, rng));
    Matrix q = qr.householderQ();
    return q;
}

inline Matrix conj_by(const Matrix& u, const Matrix& rho) {
    return Matrix(u * rho * u.adjoint());
}

}  // namespace nmrsim::testing
