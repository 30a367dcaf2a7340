#include "sdmt/matrix_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "sdmt/errors.hpp"

namespace sdmt {

namespace {

using SquareMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic,
                                   Eigen::ColMajor, kMaxDim, kMaxDim>;

void check_dims(Eigen::Index rows, Eigen::Index cols, const char* what) {
    if (rows < 0 || cols < 1 || rows > kMaxDim || cols > kMaxDim) {
        throw ValidationError(std::string(what) + ": dimensions " + std::to_string(rows) +
                              "x" + std::to_string(cols) + " outside [1, " +
                              std::to_string(kMaxDim) + "]");
    }
}

// Relative pivot size below which a column is treated as linearly dependent.
constexpr double kPivotFloor = 1e-13;

}  // namespace

ComplexMatrix sample_complex_gaussian(Eigen::Index rows, Eigen::Index cols,
                                      RngStream& stream) {
    check_dims(rows, cols, "sample_complex_gaussian");
    ComplexMatrix out(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = stream.complex_normal();
    return out;
}

QRPair qr_decompose(const ComplexMatrix& m) {
    check_dims(m.rows(), m.cols(), "qr_decompose");
    if (m.rows() < 1) throw ValidationError("qr_decompose: empty matrix");

    Eigen::HouseholderQR<SquareMatrix> qr{SquareMatrix(m)};
    QRPair out;
    out.q = qr.householderQ();
    out.r = qr.matrixQR().triangularView<Eigen::Upper>();

    const double scale = std::max(m.norm(), std::numeric_limits<double>::min());
    const Eigen::Index diag = std::min(m.rows(), m.cols());
    for (Eigen::Index l = 0; l < diag; ++l) {
        const Complex pivot = out.r(l, l);
        const double magnitude = std::abs(pivot);
        if (!(magnitude > kPivotFloor * scale)) {
            throw NumericalDegeneracyError("qr_decompose: column " + std::to_string(l) +
                                           " is numerically dependent");
        }
        const Complex phase = pivot / magnitude;
        out.r.row(l) *= std::conj(phase);
        out.r(l, l) = magnitude;
        out.q.col(l) *= phase;
    }
    return out;
}

ComplexMatrix null_space_basis(const ComplexMatrix& h) {
    const Eigen::Index n_e = h.rows();
    const Eigen::Index n_t = h.cols();
    check_dims(n_e, n_t, "null_space_basis");
    if (n_e == 0) return ComplexMatrix::Identity(n_t, n_t);
    if (n_e >= n_t) {
        throw RankDeficiencyError("null_space_basis: " + std::to_string(n_e) + "x" +
                                  std::to_string(n_t) + " matrix has no null space");
    }
    QRPair qr;
    try {
        qr = qr_decompose(h.adjoint());
    } catch (const NumericalDegeneracyError&) {
        throw RankDeficiencyError("null_space_basis: numerical row rank below " +
                                  std::to_string(n_e));
    }
    return qr.q.rightCols(n_t - n_e);
}

double log_det_mutual_info(const ComplexMatrix& h, double rho) {
    if (rho < 0.0) throw DomainError("log_det_mutual_info: rho must be >= 0");
    if (h.rows() == 0 || h.cols() == 0 || rho == 0.0) return 0.0;

    // Work with the smaller Gram matrix; det(I + rho H H^H) = det(I + rho H^H H).
    SquareMatrix gram = h.rows() <= h.cols() ? SquareMatrix(h * h.adjoint())
                                             : SquareMatrix(h.adjoint() * h);
    gram *= rho;
    gram.diagonal().array() += 1.0;
    Eigen::LLT<SquareMatrix> llt(gram);
    if (llt.info() != Eigen::Success)
        throw NumericalDegeneracyError("log_det_mutual_info: Cholesky failed");
    double sum = 0.0;
    const auto& l = llt.matrixLLT();
    for (Eigen::Index i = 0; i < l.rows(); ++i) sum += std::log(l(i, i).real());
    return 2.0 * sum;
}

double max_eigenvalue_hermitian(const ComplexMatrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw NotHermitianError("max_eigenvalue_hermitian: matrix is not square");
    const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (asym > tolerance::hermitian)
        throw NotHermitianError("max_eigenvalue_hermitian: asymmetry " + std::to_string(asym));
    Eigen::SelfAdjointEigenSolver<SquareMatrix> solver(SquareMatrix(m),
                                                       Eigen::EigenvaluesOnly);
    return solver.eigenvalues().maxCoeff();
}

RealVector gram_eigenvalues(const ComplexMatrix& h) {
    if (h.rows() == 0 || h.cols() == 0) return RealVector(0);
    const SquareMatrix gram = h.rows() <= h.cols() ? SquareMatrix(h * h.adjoint())
                                                   : SquareMatrix(h.adjoint() * h);
    Eigen::SelfAdjointEigenSolver<SquareMatrix> solver(gram, Eigen::EigenvaluesOnly);
    RealVector out = solver.eigenvalues();
    for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = std::max(out(i), 0.0);
    return out;
}

}  // namespace sdmt
