#pragma once

#include "specscreen/ingest.hpp"
#include "specscreen/rng.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace specscreen {

using cdouble = std::complex<double>;

/// Unitary DFT matrix, W[k][l] = exp(-2 pi i k l / n) / sqrt(n).
Eigen::MatrixXcd dft_matrix(std::size_t n);

/// Normalized DFT of a real vector (same convention as dft_matrix), via FFT.
Eigen::VectorXcd unitary_dft(std::span<const double> x);

/// Normalized DFT applied to every column of a complex matrix.
Eigen::MatrixXcd unitary_dft_columns(const Eigen::MatrixXcd& x);

/// Per-frequency sample matrices. `bins[b]` is m x p and holds, for every
/// segment (row) and series (column), DFT coefficient b of that segment.
/// Bin b corresponds to frequency b / n.
struct SpectralSampleSet {
    std::vector<Eigen::MatrixXcd> bins;
    std::size_t window_length = 0;

    double frequency(std::size_t bin) const { return static_cast<double>(bin) / static_cast<double>(window_length); }
    std::size_t segment_count() const { return bins.empty() ? 0 : static_cast<std::size_t>(bins.front().rows()); }
    std::size_t series_count() const { return bins.empty() ? 0 : static_cast<std::size_t>(bins.front().cols()); }
};

SpectralSampleSet spectral_samples(const SegmentSet& segs);

/// Bin whose frequency b/n is nearest to f (f taken modulo 1).
std::size_t nearest_bin(double frequency, std::size_t window_length);

/// sigma^2 phi^|t| / (1 - phi^2).
double ar1_autocovariance(double phi, double sigma, long lag);

/// Absolute-summability diagnostics of an autocovariance sequence.
/// total = sum_{t=0}^{horizon} |c(t)|, err[n] = total - sum_{t<n} |c(t)| for
/// n = 0..horizon, avg[n] = mean(err[0..n-1]) for n >= 1 (avg[0] is NaN).
struct AutocovarianceDiagnostics {
    double total = 0.0;
    std::vector<double> err;
    std::vector<double> avg;
};

AutocovarianceDiagnostics summability_diagnostics(const std::function<double(long)>& autocov, std::size_t horizon);

/// Same quantities for AR(1) using the exact geometric tail (total is the
/// infinite sum).
AutocovarianceDiagnostics ar1_diagnostics(double phi, double sigma, std::size_t horizon);

/// Fills `out` with one realization of a real process.
using ProcessGenerator = std::function<void(std::span<double> out, Engine& rng)>;

/// Stationary AR(1) windows: runs the X(0)=0 recursion through `burn_in`
/// samples and returns the following out.size() samples.
ProcessGenerator ar1_generator(double phi, double sigma, std::size_t burn_in = 200);

ProcessGenerator white_noise_generator(double sigma = 1.0);

/// Sample correlation between DFT coefficients k and l (0-based indices of
/// the n-point unitary DFT) across independent realizations:
/// sum (Y_k - mean)(Y_l - mean)^* / sqrt(sum |Y_k - mean|^2 sum |Y_l - mean|^2).
cdouble empirical_cross_frequency_correlation(const ProcessGenerator& gen, std::size_t k, std::size_t l,
                                              std::size_t n, std::size_t trials, std::uint64_t seed);

}  // namespace specscreen
