#pragma once

#include <complex>

#include <Eigen/Core>

#include "sdmt/rng.hpp"

namespace sdmt {

using Complex = std::complex<double>;

// Largest dimension any matrix in the toolkit may take (antenna counts are
// validated against it). Storage is inline, so sampling and factorizing in
// the Monte-Carlo loop never allocate.
inline constexpr Eigen::Index kMaxDim = 16;

using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic,
                                    Eigen::RowMajor, kMaxDim, kMaxDim>;
using RealVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;

namespace tolerance {
inline constexpr double factorization = 1e-10;
inline constexpr double triangularity = 1e-12;
inline constexpr double hermitian = 1e-10;
}  // namespace tolerance

struct QRPair {
    ComplexMatrix q;  // unitary, rows x rows
    ComplexMatrix r;  // upper triangular, rows x cols, real nonnegative diagonal
};

// Entries i.i.d. CN(0, 1). rows may be zero (used for an absent eavesdropper).
ComplexMatrix sample_complex_gaussian(Eigen::Index rows, Eigen::Index cols,
                                      RngStream& stream);

// Full QR with Q square. Diagonal phases are absorbed into Q so that
// R(l, l) >= 0. Throws NumericalDegeneracyError when a pivot collapses.
QRPair qr_decompose(const ComplexMatrix& m);

// Orthonormal basis of ker(h) for a wide full-row-rank h (N_e x N_t),
// returned as N_t x (N_t - N_e). Throws RankDeficiencyError otherwise.
ComplexMatrix null_space_basis(const ComplexMatrix& h);

// log det(I + rho * H H^H) in nats.
double log_det_mutual_info(const ComplexMatrix& h, double rho);

// Largest eigenvalue of a Hermitian matrix; NotHermitianError if
// ||M - M^H||_max exceeds tolerance::hermitian.
double max_eigenvalue_hermitian(const ComplexMatrix& m);

// Eigenvalues of H H^H restricted to the min(rows, cols) nonzero ones,
// ascending.
RealVector gram_eigenvalues(const ComplexMatrix& h);

}  // namespace sdmt
