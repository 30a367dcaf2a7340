#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "sdmt/errors.hpp"
#include "sdmt/matrix_kernel.hpp"

using namespace sdmt;

namespace {

ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

ComplexMatrix random_hermitian(Eigen::Index n, RngStream& s) {
    const ComplexMatrix a = sample_complex_gaussian(n, n, s);
    return (a + a.adjoint()) * 0.5;
}

// Dominant eigenvalue of a Hermitian matrix by shifted power iteration.
double power_iteration_max(const ComplexMatrix& m) {
    const double shift = m.norm();
    const Eigen::MatrixXcd shifted = m + shift * identity(m.rows());
    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(m.rows());
    for (int i = 0; i < 100000; ++i) {
        Eigen::VectorXcd w = shifted * v;
        w /= w.norm();
        const double moved = (w - v).norm();
        v = w;
        if (moved < 1e-14) break;
    }
    const Eigen::MatrixXcd dense = m;
    return (v.adjoint() * dense * v)(0).real();
}

}  // namespace

TEST_CASE("gaussian sampling moments over 10^6 entries") {
    RngStream s(1, 0, StreamDomain::test);
    double power = 0.0, re2 = 0.0;
    const int draws = 62'500;
    for (int d = 0; d < draws; ++d) {
        const ComplexMatrix m = sample_complex_gaussian(4, 4, s);
        for (Eigen::Index i = 0; i < 4; ++i)
            for (Eigen::Index j = 0; j < 4; ++j) {
                power += std::norm(m(i, j));
                re2 += m(i, j).real() * m(i, j).real();
            }
    }
    const double n = draws * 16.0;
    CHECK(std::abs(power / n - 1.0) < 0.01);
    CHECK(std::abs(re2 / n - 0.5) < 0.01);
}

TEST_CASE("sampling is deterministic per stream") {
    RngStream a(3, 9), b(3, 9);
    CHECK(sample_complex_gaussian(3, 2, a) == sample_complex_gaussian(3, 2, b));
    RngStream c(3, 9);
    CHECK(sample_complex_gaussian(0, 3, c).rows() == 0);
}

TEST_CASE("qr of the identity") {
    const auto qr = qr_decompose(identity(3));
    CHECK((qr.q - identity(3)).norm() < 1e-14);
    CHECK((qr.r - identity(3)).norm() < 1e-14);
}

TEST_CASE("qr invariants on random shapes") {
    RngStream s(2, 0, StreamDomain::test);
    for (auto [rows, cols] : {std::pair{2, 3}, {3, 2}, {4, 4}, {1, 5}, {6, 1}}) {
        for (int trial = 0; trial < 200; ++trial) {
            const ComplexMatrix m = sample_complex_gaussian(rows, cols, s);
            const auto qr = qr_decompose(m);
            CHECK(qr.q.rows() == rows);
            CHECK(qr.q.cols() == rows);
            CHECK(qr.r.rows() == rows);
            CHECK(qr.r.cols() == cols);
            CHECK((qr.q.adjoint() * qr.q - identity(rows)).norm() <= tolerance::factorization);
            CHECK((qr.q * qr.r - m).norm() / m.norm() <= tolerance::factorization);
            for (Eigen::Index i = 0; i < rows; ++i) {
                for (Eigen::Index j = 0; j < std::min<Eigen::Index>(i, cols); ++j)
                    CHECK(std::abs(qr.r(i, j)) <= tolerance::triangularity);
                if (i < cols) {
                    CHECK(qr.r(i, i).imag() == 0.0);
                    CHECK(qr.r(i, i).real() >= 0.0);
                }
            }
        }
    }
}

TEST_CASE("qr rejects a dependent column") {
    ComplexMatrix m(2, 2);
    m << Complex(1, 0), Complex(2, 0), Complex(2, 0), Complex(4, 0);
    CHECK_THROWS_AS(qr_decompose(m), NumericalDegeneracyError);
}

TEST_CASE("diagonal of R follows the chi-square law in the tall orientation") {
    // H_eq is m x k = 2 x 3; the k x m orientation gives |R(l,l)|^2 ~ Gamma(k-l+1).
    RngStream s(4, 0, StreamDomain::test);
    const int trials = 1'000'000;
    const int k = 3, m = 2;
    double sum[2] = {0, 0}, sum2[2] = {0, 0};
    for (int t = 0; t < trials; ++t) {
        const ComplexMatrix h = sample_complex_gaussian(m, k, s);
        const auto qr = qr_decompose(h.adjoint());
        for (int l = 0; l < m; ++l) {
            const double x = 2.0 * std::norm(qr.r(l, l));
            sum[l] += x;
            sum2[l] += x * x;
        }
    }
    for (int l = 0; l < m; ++l) {
        const double dof = 2.0 * (k - l);
        const double mean = sum[l] / trials;
        const double var = sum2[l] / trials - mean * mean;
        // Chi-square with `dof` degrees: mean dof, variance 2 dof, fourth
        // central moment 12 dof (dof + 4).
        CHECK(std::abs(mean - dof) <= 3.0 * std::sqrt(2.0 * dof / trials));
        const double var_se = std::sqrt((12.0 * dof * (dof + 4.0) - 4.0 * dof * dof) / trials);
        CHECK(std::abs(var - 2.0 * dof) <= 3.0 * var_se);
    }
    CHECK(sum[0] / trials / 2.0 == doctest::Approx(3.0).epsilon(0.01 / 3.0));
}

TEST_CASE("null space of a coordinate row") {
    ComplexMatrix h(1, 2);
    h << Complex(1, 0), Complex(0, 0);
    const ComplexMatrix a = null_space_basis(h);
    CHECK(a.rows() == 2);
    CHECK(a.cols() == 1);
    CHECK((h * a).norm() < 1e-14);
    CHECK(std::abs((a.adjoint() * a)(0, 0) - 1.0) < 1e-14);
    CHECK(std::abs(a(0, 0)) < 1e-14);
}

TEST_CASE("null space of random wide matrices") {
    RngStream s(6, 0, StreamDomain::test);
    for (int t = 0; t < 1000; ++t) {
        const ComplexMatrix h = sample_complex_gaussian(1 + t % 3, 4, s);
        const ComplexMatrix a = null_space_basis(h);
        REQUIRE(a.rows() == 4);
        REQUIRE(a.cols() == 4 - h.rows());
        CHECK((h * a).norm() <= tolerance::factorization);
        CHECK((a.adjoint() * a - identity(a.cols())).norm() <= tolerance::factorization);
        // A A^H is the orthogonal projector onto ker(h).
        const Eigen::MatrixXcd hd = h;
        const Eigen::MatrixXcd projector =
            Eigen::MatrixXcd::Identity(4, 4) - hd.adjoint() * (hd * hd.adjoint()).inverse() * hd;
        CHECK((Eigen::MatrixXcd(a * a.adjoint()) - projector).norm() <= 1e-10);
    }
}

TEST_CASE("null space with no eavesdropper rows is the identity") {
    const ComplexMatrix h(0, 3);
    CHECK((null_space_basis(h) - identity(3)).norm() == 0.0);
}

TEST_CASE("null space rejects rank deficiency") {
    ComplexMatrix h(2, 3);
    h << Complex(1, 0), Complex(1, 0), Complex(0, 0), Complex(2, 0), Complex(2, 0), Complex(0, 0);
    CHECK_THROWS_AS(null_space_basis(h), RankDeficiencyError);
}

TEST_CASE("equivalent channel entries keep unit power") {
    RngStream s(8, 0, StreamDomain::test);
    double power = 0.0;
    const int trials = 166'667;
    for (int t = 0; t < trials; ++t) {
        const ComplexMatrix h_m = sample_complex_gaussian(2, 3, s);
        const ComplexMatrix h_e = sample_complex_gaussian(1, 3, s);
        const ComplexMatrix h_eq = h_m * null_space_basis(h_e);
        power += h_eq.cwiseAbs2().sum();
    }
    CHECK(std::abs(power / (trials * 4.0) - 1.0) < 0.01);
}

TEST_CASE("log det special cases") {
    CHECK(log_det_mutual_info(ComplexMatrix::Zero(2, 3), 5.0) == 0.0);
    CHECK(log_det_mutual_info(identity(3), 2.0) == doctest::Approx(3.0 * std::log(3.0)).epsilon(1e-14));
    RngStream s(1, 1);
    CHECK(log_det_mutual_info(sample_complex_gaussian(2, 2, s), 0.0) == 0.0);
}

TEST_CASE("log det agrees with the eigenvalue sum and is monotone") {
    RngStream s(10, 0, StreamDomain::test);
    for (int t = 0; t < 500; ++t) {
        const ComplexMatrix h = sample_complex_gaussian(1 + t % 4, 1 + (t / 4) % 4, s);
        const double rho = 0.1 + (t % 7) * 3.0;
        const Eigen::MatrixXcd gram = h * h.adjoint();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram);
        double oracle = 0.0;
        for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i)
            oracle += std::log1p(rho * std::max(0.0, eig.eigenvalues()(i)));
        CHECK(std::abs(log_det_mutual_info(h, rho) - oracle) <= 1e-10);
        CHECK(log_det_mutual_info(h, rho * 1.5) >= log_det_mutual_info(h, rho));
    }
}

TEST_CASE("max eigenvalue") {
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = -1.0;
    CHECK(max_eigenvalue_hermitian(d) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(max_eigenvalue_hermitian(ComplexMatrix::Zero(3, 3)) == 0.0);

    RngStream s(12, 0, StreamDomain::test);
    for (int t = 0; t < 50; ++t) {
        const ComplexMatrix m = random_hermitian(3, s);
        CHECK(std::abs(max_eigenvalue_hermitian(m) - power_iteration_max(m)) <= 1e-8);
    }

    ComplexMatrix skew = ComplexMatrix::Zero(2, 2);
    skew(0, 1) = 1.0;
    CHECK_THROWS_AS(max_eigenvalue_hermitian(skew), NotHermitianError);
}

TEST_CASE("gram eigenvalues keep the nonzero part") {
    RngStream s(13, 0, StreamDomain::test);
    const ComplexMatrix h = sample_complex_gaussian(2, 3, s);
    const RealVector ev = gram_eigenvalues(h);
    CHECK(ev.size() == 2);
    CHECK(ev(0) <= ev(1));
    CHECK(ev.sum() == doctest::Approx(h.cwiseAbs2().sum()).epsilon(1e-12));
    CHECK(gram_eigenvalues(h.adjoint()).size() == 2);
}
