#pragma once

#include "specscreen/ingest.hpp"
#include "specscreen/rng.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <vector>

namespace specscreen {

/// m x p matrix of i.i.d. circular complex Gaussians: real and imaginary
/// parts independent N(0, 1/2), so each entry has unit total variance.
Eigen::MatrixXcd gen_iid_complex_gaussian(std::size_t p, std::size_t m, std::uint64_t seed);
Eigen::MatrixXcd gen_iid_complex_gaussian(std::size_t p, std::size_t m, Engine& rng);

/// X(0) = 0, X(k) = phi X(k-1) + eps(k), eps ~ N(0, sigma^2). N samples.
std::vector<double> gen_ar1(double phi, double sigma, std::size_t n_samples, std::uint64_t seed);

struct FirDesign {
    double stopband_attenuation_db = 45.0;
    /// Cutoffs sit this far outside the nominal band edges so the narrow
    /// band keeps a flat midband despite the Kaiser transition width.
    double edge_margin = 0.0015;
    /// Offset from the band edges beyond which the stopband contract applies.
    double stopband_offset = 0.01;
};

/// Linear-phase Kaiser-windowed-sinc band-pass for the band [f_lo, f_hi]
/// (cycles/sample, f_hi <= 0.5). `taps` must be odd. Throws when the taps
/// cannot meet the stopband/midband contract.
std::vector<double> fir_bandpass(double f_lo, double f_hi, std::size_t taps, const FirDesign& design = {});

/// |H(f)| = |sum_k h[k] exp(-2 pi i f k)|.
double frequency_response(const std::vector<double>& h, double f);

/// Shared-source band-pass ensemble. Series i (1-based) = spacing*l for
/// l = 1..filter_count carries the band [(4l-1)/400, 4l/400]; series
/// mirror_offset + spacing*l repeats the same filter. All other series are
/// pure noise.
struct BandpassSpec {
    std::size_t series_count = 1000;
    std::size_t filter_count = 50;
    std::size_t spacing = 10;
    std::size_t mirror_offset = 500;
    std::size_t sample_count = 12000;
    std::size_t discard_prefix = 2000;
    std::size_t taps = 501;
    double noise_sigma = 0.1;
    double source_sigma = 1.0;
    FirDesign design{};

    void validate() const;

    /// Band of filter l (1-based).
    static double band_low(std::size_t l) { return (4.0 * static_cast<double>(l) - 1.0) / 400.0; }
    static double band_high(std::size_t l) { return 4.0 * static_cast<double>(l) / 400.0; }

    /// Filter index l (1-based) driving 0-based series `s`, or 0 if inactive.
    std::size_t filter_of(std::size_t s) const;
};

struct BandpassEnsemble {
    TimeSeriesMatrix series;
    Eigen::MatrixXd signal;  // filtered source per active series, noise-free (N x p)
};

/// Names are X1..Xp (1-based, matching the construction above).
BandpassEnsemble gen_bandpass_ensemble_detailed(const BandpassSpec& spec, std::uint64_t seed);
TimeSeriesMatrix gen_bandpass_ensemble(const BandpassSpec& spec, std::uint64_t seed);

struct HubCountEstimate {
    std::size_t delta = 1;
    double mean = 0.0;
    double stderr_ = 0.0;  // NaN for a single trial
};

/// Mean number of delta-hubs over independent i.i.d. complex Gaussian
/// datasets (sample correlation mode). Trial t uses substream (seed, t).
HubCountEstimate monte_carlo_hub_counts(std::size_t p, std::size_t m, double rho, std::size_t delta,
                                        std::size_t trials, std::uint64_t seed);

/// Same, for several degree thresholds from one set of trials.
std::vector<HubCountEstimate> monte_carlo_hub_counts(std::size_t p, std::size_t m, double rho,
                                                     const std::vector<std::size_t>& deltas, std::size_t trials,
                                                     std::uint64_t seed);

struct SweepPoint {
    std::size_t m = 0;
    double rho = 0.0;
    double mean_hubs = 0.0;
    double stderr_ = 0.0;
};

struct TransitionSummary {
    std::size_t m = 0;
    double midpoint = 0.0;  // mean crosses p/2 (linear interpolation), NaN if not bracketed
    double upper = 0.0;     // smallest grid rho with mean < 1% of p
    double lower = 0.0;     // largest grid rho with mean > 99% of p
    double width() const { return upper - lower; }
};

struct SweepResult {
    std::size_t p = 0;
    std::size_t delta = 1;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::vector<SweepPoint> points;  // grouped by m (input order), rho ascending
    std::vector<TransitionSummary> transitions;

    void write_csv(std::ostream& out) const;
    void write_transitions_csv(std::ostream& out) const;
};

/// Mean hub counts over an (m, rho) grid. Each trial computes the order
/// statistics once and counts hubs at every grid level.
SweepResult phase_transition_sweep(std::size_t p, const std::vector<std::size_t>& m_list,
                                   const std::vector<double>& rho_grid, std::size_t delta, std::size_t trials,
                                   std::uint64_t seed);

}  // namespace specscreen
