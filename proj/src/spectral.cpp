#include "specscreen/spectral.hpp"

#include "specscreen/error.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <limits>
#include <numbers>

namespace specscreen {
namespace {

Eigen::FFT<double>& thread_fft() {
    thread_local Eigen::FFT<double> fft;
    return fft;
}

// Normalized DFT of x into out (both length n).
void dft_inplace(const std::vector<cdouble>& x, std::vector<cdouble>& out) {
    if (x.size() == 1) {  // kissfft does not handle the trivial length
        out = x;
        return;
    }
    thread_fft().fwd(out, x);
    const double scale = 1.0 / std::sqrt(static_cast<double>(x.size()));
    for (auto& v : out) v *= scale;
}

// Single normalized DFT coefficient, direct O(n) sum.
cdouble dft_coefficient(std::span<const double> x, std::size_t k) {
    const std::size_t n = x.size();
    const double w = -2.0 * std::numbers::pi / static_cast<double>(n);
    cdouble acc{0.0, 0.0};
    for (std::size_t t = 0; t < n; ++t) {
        // Reduce k*t mod n first so the phase stays small and exact for large n.
        const double angle = w * static_cast<double>((k * t) % n);
        acc += x[t] * cdouble(std::cos(angle), std::sin(angle));
    }
    return acc / std::sqrt(static_cast<double>(n));
}

}  // namespace

Eigen::MatrixXcd dft_matrix(std::size_t n) {
    if (n == 0) fail_config("DFT order must be >= 1");
    const auto N = static_cast<Eigen::Index>(n);
    Eigen::MatrixXcd w(N, N);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
            const double angle = -2.0 * std::numbers::pi * static_cast<double>((k * l) % n) / static_cast<double>(n);
            w(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = std::polar(scale, angle);
        }
    return w;
}

Eigen::VectorXcd unitary_dft(std::span<const double> x) {
    if (x.empty()) fail_config("DFT of an empty vector");
    std::vector<cdouble> in(x.begin(), x.end());
    std::vector<cdouble> out;
    dft_inplace(in, out);
    return Eigen::Map<Eigen::VectorXcd>(out.data(), static_cast<Eigen::Index>(out.size()));
}

Eigen::MatrixXcd unitary_dft_columns(const Eigen::MatrixXcd& x) {
    const auto rows = x.rows();
    Eigen::MatrixXcd y(rows, x.cols());
    std::vector<cdouble> in(static_cast<std::size_t>(rows));
    std::vector<cdouble> out;
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        for (Eigen::Index r = 0; r < rows; ++r) in[static_cast<std::size_t>(r)] = x(r, c);
        dft_inplace(in, out);
        for (Eigen::Index r = 0; r < rows; ++r) y(r, c) = out[static_cast<std::size_t>(r)];
    }
    return y;
}

SpectralSampleSet spectral_samples(const SegmentSet& segs) {
    const std::size_t n = segs.window_length;
    const std::size_t m = segs.segment_count();
    const std::size_t p = segs.series_count();
    if (n == 0 || m == 0 || p == 0) fail_data("empty segment set");

    SpectralSampleSet out;
    out.window_length = n;
    out.bins.assign(n, Eigen::MatrixXcd(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(p)));

    // Each (segment, series) column is an independent transform.
#pragma omp parallel
    {
        std::vector<cdouble> in(n);
        std::vector<cdouble> coeffs;
#pragma omp for schedule(static)
        for (std::ptrdiff_t job = 0; job < static_cast<std::ptrdiff_t>(m * p); ++job) {
            const auto j = static_cast<Eigen::Index>(static_cast<std::size_t>(job) / p);
            const auto q = static_cast<Eigen::Index>(static_cast<std::size_t>(job) % p);
            const auto& seg = segs.segments[static_cast<std::size_t>(j)];
            for (std::size_t t = 0; t < n; ++t) in[t] = seg(static_cast<Eigen::Index>(t), q);
            dft_inplace(in, coeffs);
            for (std::size_t b = 0; b < n; ++b) out.bins[b](j, q) = coeffs[b];
        }
    }
    return out;
}

std::size_t nearest_bin(double frequency, std::size_t window_length) {
    if (window_length == 0) fail_config("window length must be positive");
    double f = std::fmod(frequency, 1.0);
    if (f < 0) f += 1.0;
    const auto b = static_cast<std::size_t>(std::llround(f * static_cast<double>(window_length)));
    return b % window_length;
}

double ar1_autocovariance(double phi, double sigma, long lag) {
    if (!(std::abs(phi) < 1.0)) fail_config("AR(1) coefficient must satisfy |phi| < 1 (stationarity)");
    if (!(sigma > 0.0)) fail_config("AR(1) innovation sigma must be positive");
    return sigma * sigma * std::pow(phi, static_cast<double>(std::labs(lag))) / (1.0 - phi * phi);
}

AutocovarianceDiagnostics summability_diagnostics(const std::function<double(long)>& autocov, std::size_t horizon) {
    if (horizon == 0) fail_config("horizon must be positive");
    std::vector<double> mags(horizon + 1);
    for (std::size_t t = 0; t <= horizon; ++t) mags[t] = std::abs(autocov(static_cast<long>(t)));

    AutocovarianceDiagnostics d;
    for (double v : mags) d.total += v;
    d.err.resize(horizon + 1);
    d.avg.resize(horizon + 1);
    // err[n] is the tail sum over t >= n; accumulated backwards for accuracy.
    double tail = 0.0;
    for (std::size_t n = horizon + 1; n-- > 0;) {
        tail += mags[n];
        d.err[n] = tail;
    }
    if (d.err[horizon] > 1e-6 * d.total) {
        fail_numeric("autocovariance not converged at horizon " + std::to_string(horizon) +
                     ": tail " + std::to_string(d.err[horizon]) + " exceeds 1e-6 of the sum");
    }
    d.avg[0] = std::numeric_limits<double>::quiet_NaN();
    double running = 0.0;
    for (std::size_t n = 1; n <= horizon; ++n) {
        running += d.err[n - 1];
        d.avg[n] = running / static_cast<double>(n);
    }
    return d;
}

AutocovarianceDiagnostics ar1_diagnostics(double phi, double sigma, std::size_t horizon) {
    const double c0 = ar1_autocovariance(phi, sigma, 0);
    const double a = std::abs(phi);
    AutocovarianceDiagnostics d;
    d.total = c0 / (1.0 - a);
    d.err.resize(horizon + 1);
    d.avg.resize(horizon + 1);
    for (std::size_t n = 0; n <= horizon; ++n) d.err[n] = d.total * std::pow(a, static_cast<double>(n));
    d.avg[0] = std::numeric_limits<double>::quiet_NaN();
    double running = 0.0;
    for (std::size_t n = 1; n <= horizon; ++n) {
        running += d.err[n - 1];
        d.avg[n] = running / static_cast<double>(n);
    }
    return d;
}

ProcessGenerator ar1_generator(double phi, double sigma, std::size_t burn_in) {
    if (!(std::abs(phi) < 1.0)) fail_config("AR(1) coefficient must satisfy |phi| < 1 (stationarity)");
    return [phi, sigma, burn_in](std::span<double> out, Engine& rng) {
        std::normal_distribution<double> eps(0.0, sigma);
        double x = 0.0;
        for (std::size_t k = 0; k < burn_in; ++k) x = phi * x + eps(rng);
        for (auto& v : out) {
            x = phi * x + eps(rng);
            v = x;
        }
    };
}

ProcessGenerator white_noise_generator(double sigma) {
    return [sigma](std::span<double> out, Engine& rng) {
        std::normal_distribution<double> eps(0.0, sigma);
        for (auto& v : out) v = eps(rng);
    };
}

cdouble empirical_cross_frequency_correlation(const ProcessGenerator& gen, std::size_t k, std::size_t l,
                                              std::size_t n, std::size_t trials, std::uint64_t seed) {
    if (k == l) fail_config("cross-frequency correlation needs distinct bins");
    if (k >= n || l >= n) fail_config("bin index out of range for window length " + std::to_string(n));
    if (trials < 1000) fail_config("need at least 1000 trials");

    std::vector<cdouble> yk(trials), yl(trials);
#pragma omp parallel
    {
        std::vector<double> x(n);
#pragma omp for schedule(static)
        for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(trials); ++t) {
            Engine rng = substream(seed, static_cast<std::uint64_t>(t));
            gen(x, rng);
            yk[static_cast<std::size_t>(t)] = dft_coefficient(x, k);
            yl[static_cast<std::size_t>(t)] = dft_coefficient(x, l);
        }
    }

    // Sequential reduction keeps the result independent of the thread count.
    cdouble mk{}, ml{};
    for (std::size_t t = 0; t < trials; ++t) {
        mk += yk[t];
        ml += yl[t];
    }
    mk /= static_cast<double>(trials);
    ml /= static_cast<double>(trials);
    cdouble cross{};
    double vk = 0.0, vl = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const cdouble a = yk[t] - mk;
        const cdouble b = yl[t] - ml;
        cross += a * std::conj(b);
        vk += std::norm(a);
        vl += std::norm(b);
    }
    if (!(vk > 0.0) || !(vl > 0.0)) fail_numeric("degenerate variance in a DFT bin");
    return cross / std::sqrt(vk * vl);
}

}  // namespace specscreen
