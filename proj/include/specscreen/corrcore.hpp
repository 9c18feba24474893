#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>

namespace specscreen {

enum class CorrelationKind { Correlation, Partial };

/// p x p Hermitian matrix with unit diagonal: a sample correlation matrix R
/// or a sample partial correlation matrix P.
class CorrelationMatrix {
public:
    /// Checks squareness, Hermitian symmetry and unit diagonal (1e-10).
    CorrelationMatrix(Eigen::MatrixXcd values, CorrelationKind kind);

    const Eigen::MatrixXcd& values() const noexcept { return values_; }
    CorrelationKind kind() const noexcept { return kind_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    double magnitude(std::size_t i, std::size_t j) const { return std::abs(values_(i, j)); }

private:
    Eigen::MatrixXcd values_;
    CorrelationKind kind_;
};

/// (m-1) x p complex matrix with unit-norm columns whose Gram matrix is the
/// corresponding correlation matrix.
class UScoreMatrix {
public:
    UScoreMatrix(Eigen::MatrixXcd values, CorrelationKind kind);

    const Eigen::MatrixXcd& values() const noexcept { return values_; }
    CorrelationKind kind() const noexcept { return kind_; }
    std::size_t dimension() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    std::size_t variable_count() const noexcept { return static_cast<std::size_t>(values_.cols()); }

    /// U^H U, computed on one triangle and mirrored.
    CorrelationMatrix gram() const;

private:
    Eigen::MatrixXcd values_;
    CorrelationKind kind_;
};

/// S = (1/(m-1)) sum (z_i - zbar)(z_i - zbar)^H for the m x p sample matrix Z.
Eigen::MatrixXcd sample_covariance(const Eigen::MatrixXcd& samples);

/// R = D_S^{-1/2} S D_S^{-1/2}. Throws naming the first zero-variance column.
CorrelationMatrix correlation_from_covariance(const Eigen::MatrixXcd& covariance);

/// U-scores of the sample correlation matrix.
///
/// Columns are centered, mapped into C^{m-1} by the rows 1..m-1 of the order-m
/// unitary DFT matrix (an orthonormal basis of the complement of the all-ones
/// direction, so inner products of centered columns are preserved), then
/// normalized to unit length.
UScoreMatrix uscores(const Eigen::MatrixXcd& samples);

/// Eigendecomposition-based Moore-Penrose inverse of a Hermitian matrix.
/// Eigenvalues below tol * lambda_max are treated as zero; the default tol is
/// p * machine epsilon.
Eigen::MatrixXcd pseudo_inverse_hermitian(const Eigen::MatrixXcd& a, std::optional<double> tol = std::nullopt);

/// Number of eigenvalues of a Hermitian matrix above tol * lambda_max.
std::size_t hermitian_rank(const Eigen::MatrixXcd& a, std::optional<double> tol = std::nullopt);

/// P = D^{-1/2} R^+ D^{-1/2}, D the diagonal of R^+.
CorrelationMatrix partial_correlation(const CorrelationMatrix& r);

/// U_P = (U U^H)^{-1} U D^{-1/2}, D = diag(U^H (U U^H)^{-2} U). Needs the
/// (m-1) x (m-1) Gram matrix U U^H to be nonsingular.
UScoreMatrix uscores_partial(const UScoreMatrix& u_r);

/// Smallest eigenvalue of a Hermitian matrix (test and diagnostic helper).
double min_eigenvalue(const Eigen::MatrixXcd& a);

}  // namespace specscreen
