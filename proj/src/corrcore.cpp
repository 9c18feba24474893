#include "specscreen/corrcore.hpp"

#include "specscreen/error.hpp"
#include "specscreen/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <string>

namespace specscreen {
namespace {

constexpr double kUnitTol = 1e-10;

// Relative eigenvalue cutoff for the (m-1) x (m-1) U-score Gram matrix.
constexpr double kGramSingularTol = 1e-10;

void check_unit_diagonal_hermitian(const Eigen::MatrixXcd& v) {
    if (v.rows() != v.cols()) fail_data("correlation matrix must be square");
    const Eigen::Index p = v.rows();
    for (Eigen::Index i = 0; i < p; ++i) {
        if (std::abs(v(i, i) - cdouble(1.0, 0.0)) > kUnitTol)
            fail_data("correlation matrix diagonal entry " + std::to_string(i) + " is not 1");
        for (Eigen::Index j = i + 1; j < p; ++j)
            if (std::abs(v(i, j) - std::conj(v(j, i))) > kUnitTol)
                fail_data("correlation matrix is not Hermitian at (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
}

// Centers every column; columns that are exactly constant become exactly zero.
Eigen::MatrixXcd centered(const Eigen::MatrixXcd& z) {
    Eigen::MatrixXcd c = z.rowwise() - z.colwise().mean();
    for (Eigen::Index q = 0; q < z.cols(); ++q) {
        if ((z.col(q).array() == z(0, q)).all()) c.col(q).setZero();
    }
    return c;
}

// Mirrors the lower triangle into the upper one and pins the diagonal to 1.
void finalize_correlation(Eigen::MatrixXcd& r) {
    const Eigen::Index p = r.rows();
    for (Eigen::Index j = 0; j < p; ++j) {
        r(j, j) = cdouble(1.0, 0.0);
        for (Eigen::Index i = j + 1; i < p; ++i) r(j, i) = std::conj(r(i, j));
    }
}

Eigen::MatrixXcd normalize_columns(Eigen::MatrixXcd a, const char* what) {
    for (Eigen::Index q = 0; q < a.cols(); ++q) {
        const double norm = a.col(q).norm();
        if (!(norm > 0.0) || !std::isfinite(norm))
            fail_data(std::string(what) + ": zero-variance column " + std::to_string(q));
        a.col(q) /= norm;
    }
    return a;
}

double default_tol(Eigen::Index p) { return static_cast<double>(p) * std::numeric_limits<double>::epsilon(); }

void check_hermitian(const Eigen::MatrixXcd& a, double tol) {
    if (a.rows() != a.cols()) fail_config("matrix must be square");
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if ((a - a.adjoint()).cwiseAbs().maxCoeff() > tol * scale) fail_config("matrix is not Hermitian");
}

}  // namespace

CorrelationMatrix::CorrelationMatrix(Eigen::MatrixXcd values, CorrelationKind kind)
    : values_(std::move(values)), kind_(kind) {
    check_unit_diagonal_hermitian(values_);
}

UScoreMatrix::UScoreMatrix(Eigen::MatrixXcd values, CorrelationKind kind) : values_(std::move(values)), kind_(kind) {
    for (Eigen::Index q = 0; q < values_.cols(); ++q)
        if (std::abs(values_.col(q).norm() - 1.0) > kUnitTol)
            fail_data("U-score column " + std::to_string(q) + " is not unit norm");
}

CorrelationMatrix UScoreMatrix::gram() const {
    const Eigen::Index p = values_.cols();
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(p, p);
    r.selfadjointView<Eigen::Lower>().rankUpdate(values_.adjoint());
    finalize_correlation(r);
    return CorrelationMatrix(std::move(r), kind_);
}

Eigen::MatrixXcd sample_covariance(const Eigen::MatrixXcd& samples) {
    const Eigen::Index m = samples.rows();
    if (m < 2) fail_data("sample covariance needs m >= 2 samples");
    const Eigen::MatrixXcd c = centered(samples);
    // Rows are samples, so sum_i z_i z_i^H = C^T conj(C).
    Eigen::MatrixXcd s = c.transpose() * c.conjugate() / static_cast<double>(m - 1);
    Eigen::MatrixXcd sym = (s + s.adjoint()) * 0.5;
    return sym;
}

CorrelationMatrix correlation_from_covariance(const Eigen::MatrixXcd& covariance) {
    if (covariance.rows() != covariance.cols()) fail_data("covariance must be square");
    const Eigen::Index p = covariance.rows();
    Eigen::VectorXd inv_sd(p);
    for (Eigen::Index q = 0; q < p; ++q) {
        const double v = covariance(q, q).real();
        if (!(v > 0.0)) fail_data("zero-variance variable in column " + std::to_string(q));
        inv_sd(q) = 1.0 / std::sqrt(v);
    }
    Eigen::MatrixXcd r = inv_sd.asDiagonal() * covariance * inv_sd.asDiagonal();
    finalize_correlation(r);
    return CorrelationMatrix(std::move(r), CorrelationKind::Correlation);
}

UScoreMatrix uscores(const Eigen::MatrixXcd& samples) {
    const Eigen::Index m = samples.rows();
    if (m < 3) fail_data("U-scores need m >= 3 samples");
    // Rows 1..m-1 of the unitary DFT are orthonormal and orthogonal to the
    // all-ones vector. Conjugation makes U^H U = R (rather than its transpose)
    // under the sum z_i z_i^H convention for S.
    const Eigen::MatrixXcd projected = unitary_dft_columns(centered(samples)).bottomRows(m - 1).conjugate();
    return UScoreMatrix(normalize_columns(projected, "uscores"), CorrelationKind::Correlation);
}

Eigen::MatrixXcd pseudo_inverse_hermitian(const Eigen::MatrixXcd& a, std::optional<double> tol) {
    check_hermitian(a, 1e-8);
    const Eigen::MatrixXcd sym = (a + a.adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sym);
    if (es.info() != Eigen::Success) fail_numeric("Hermitian eigendecomposition failed");
    const Eigen::VectorXd& lambda = es.eigenvalues();
    const double lmax = lambda.cwiseAbs().maxCoeff();
    const double cutoff = tol.value_or(default_tol(a.rows())) * lmax;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(lambda.size());
    for (Eigen::Index i = 0; i < lambda.size(); ++i)
        if (std::abs(lambda(i)) > cutoff) inv(i) = 1.0 / lambda(i);
    const Eigen::MatrixXcd& v = es.eigenvectors();
    Eigen::MatrixXcd out = v * inv.asDiagonal() * v.adjoint();
    return (out + out.adjoint()) * 0.5;
}

std::size_t hermitian_rank(const Eigen::MatrixXcd& a, std::optional<double> tol) {
    check_hermitian(a, 1e-8);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es((a + a.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& lambda = es.eigenvalues();
    const double cutoff = tol.value_or(default_tol(a.rows())) * lambda.cwiseAbs().maxCoeff();
    return static_cast<std::size_t>((lambda.array().abs() > cutoff).count());
}

double min_eigenvalue(const Eigen::MatrixXcd& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es((a + a.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

CorrelationMatrix partial_correlation(const CorrelationMatrix& r) {
    const Eigen::MatrixXcd pinv = pseudo_inverse_hermitian(r.values());
    const Eigen::Index p = pinv.rows();
    Eigen::VectorXd inv_sd(p);
    for (Eigen::Index q = 0; q < p; ++q) {
        const double d = pinv(q, q).real();
        if (!(d > 0.0)) fail_data("degenerate variable " + std::to_string(q) + ": zero diagonal in the pseudo-inverse");
        inv_sd(q) = 1.0 / std::sqrt(d);
    }
    Eigen::MatrixXcd out = inv_sd.asDiagonal() * pinv * inv_sd.asDiagonal();
    finalize_correlation(out);
    return CorrelationMatrix(std::move(out), CorrelationKind::Partial);
}

UScoreMatrix uscores_partial(const UScoreMatrix& u_r) {
    const Eigen::MatrixXcd& u = u_r.values();
    const Eigen::MatrixXcd gram = u * u.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es((gram + gram.adjoint()) * 0.5);
    if (es.info() != Eigen::Success) fail_numeric("eigendecomposition of the U-score Gram matrix failed");
    const Eigen::VectorXd& lambda = es.eigenvalues();  // ascending
    if (!(lambda(0) > kGramSingularTol * lambda(lambda.size() - 1))) {
        fail_numeric("singular U-score Gram matrix (rank < m-1 = " + std::to_string(u.rows()) +
                     "); partial U-scores need p >= m-1 with generic data");
    }
    const Eigen::MatrixXcd& v = es.eigenvectors();
    const Eigen::MatrixXcd gram_inv_u = v * lambda.cwiseInverse().asDiagonal() * (v.adjoint() * u);
    // D = diag(U^H G^{-2} U) holds the squared column norms of G^{-1} U.
    return UScoreMatrix(normalize_columns(gram_inv_u, "uscores_partial"), CorrelationKind::Partial);
}

}  // namespace specscreen
