#pragma once

// Reference implementations used only by tests. Each is a direct transcription
// of a definition, deliberately sharing no code with the library.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using cd = std::complex<double>;

// Naive n-point unitary DFT from the defining sum.
inline std::vector<cd> dft(const std::vector<cd>& x) {
    const std::size_t n = x.size();
    std::vector<cd> y(n);
    for (std::size_t k = 0; k < n; ++k) {
        cd acc{};
        for (std::size_t t = 0; t < n; ++t) {
            const double a = -2.0 * std::numbers::pi * static_cast<double>((k * t) % n) / static_cast<double>(n);
            acc += x[t] * cd(std::cos(a), std::sin(a));
        }
        y[k] = acc / std::sqrt(static_cast<double>(n));
    }
    return y;
}

// Sample correlation rho_ij = s_ij / sqrt(s_ii s_jj) with
// s_ij = sum_k (z_ki - mean_i) conj(z_kj - mean_j), by explicit loops.
inline Eigen::MatrixXcd correlation(const Eigen::MatrixXcd& z) {
    const Eigen::Index m = z.rows(), p = z.cols();
    std::vector<cd> mean(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        cd s{};
        for (Eigen::Index k = 0; k < m; ++k) s += z(k, j);
        mean[j] = s / static_cast<double>(m);
    }
    Eigen::MatrixXcd s(p, p);
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = 0; j < p; ++j) {
            cd acc{};
            for (Eigen::Index k = 0; k < m; ++k) acc += (z(k, i) - mean[i]) * std::conj(z(k, j) - mean[j]);
            s(i, j) = acc;
        }
    Eigen::MatrixXcd r(p, p);
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = 0; j < p; ++j) r(i, j) = s(i, j) / std::sqrt(s(i, i).real() * s(j, j).real());
    return r;
}

// Partial correlation from an invertible correlation matrix, using a full
// LU inverse: P_ij = Q_ij / sqrt(Q_ii Q_jj), Q = R^{-1}.
inline Eigen::MatrixXcd partial_from_inverse(const Eigen::MatrixXcd& r) {
    const Eigen::MatrixXcd q = r.fullPivLu().inverse();
    Eigen::MatrixXcd out(r.rows(), r.cols());
    for (Eigen::Index i = 0; i < r.rows(); ++i)
        for (Eigen::Index j = 0; j < r.cols(); ++j)
            out(i, j) = q(i, j) / std::sqrt(q(i, i).real() * q(j, j).real());
    return out;
}

// P(at least K successes) for independent Bernoulli(q_i), by enumerating all
// 2^n outcomes.
inline double poisson_binomial_tail(const std::vector<double>& q, std::size_t K) {
    const std::size_t n = q.size();
    double total = 0.0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        double pr = 1.0;
        std::size_t hits = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask >> i & 1U) {
                pr *= q[i];
                ++hits;
            } else {
                pr *= 1.0 - q[i];
            }
        }
        if (hits >= K) total += pr;
    }
    return total;
}

inline double log_binom(double n, double k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// p * P(Bin(p-1, q) >= delta): the exact mean hub count for i.i.d. uniform
// U-scores. Terms are summed in log space since q^k underflows for the
// small-q corner of the grids.
inline double exact_null_hub_mean(std::size_t p, double q, std::size_t delta) {
    const double n = static_cast<double>(p - 1);
    const double lq = std::log(q), l1q = std::log1p(-q);
    std::vector<double> logs;
    for (std::size_t k = delta; k <= p - 1; ++k) {
        const double kk = static_cast<double>(k);
        logs.push_back(log_binom(n, kk) + kk * lq + (n - kk) * l1q);
    }
    double mx = -INFINITY;
    for (double l : logs) mx = std::max(mx, l);
    if (mx == -INFINITY) return 0.0;
    double s = 0.0;
    for (double l : logs) s += std::exp(l - mx);
    return static_cast<double>(p) * std::exp(mx + std::log(s));
}

// Brute-force degrees of the thresholded graph.
inline std::vector<std::size_t> degrees(const Eigen::MatrixXcd& psi, double rho) {
    std::vector<std::size_t> d(psi.rows(), 0);
    for (Eigen::Index i = 0; i < psi.rows(); ++i)
        for (Eigen::Index j = 0; j < psi.cols(); ++j)
            if (i != j && std::abs(psi(i, j)) >= rho) ++d[i];
    return d;
}

// Random Hermitian unit-diagonal matrix of correlation form from random data.
inline Eigen::MatrixXcd random_data(std::size_t m, std::size_t p, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Eigen::MatrixXcd z(m, p);
    for (Eigen::Index j = 0; j < z.cols(); ++j)
        for (Eigen::Index i = 0; i < z.rows(); ++i) z(i, j) = cd(g(rng), g(rng));
    return z;
}

}  // namespace oracle
