#include "specscreen/synth.hpp"

#include "specscreen/corrcore.hpp"
#include "specscreen/error.hpp"
#include "specscreen/rng.hpp"
#include "specscreen/screen.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace specscreen {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double sinc(double x) {
    if (x == 0.0) return 1.0;
    const double px = std::numbers::pi * x;
    return std::sin(px) / px;
}

double kaiser_beta(double attenuation_db) {
    if (attenuation_db > 50.0) return 0.1102 * (attenuation_db - 8.7);
    if (attenuation_db >= 21.0)
        return 0.5842 * std::pow(attenuation_db - 21.0, 0.4) + 0.07886 * (attenuation_db - 21.0);
    return 0.0;
}

// Kaiser's estimate of the transition width (cycles/sample) for a filter
// of order taps-1 reaching the given stopband attenuation.
double kaiser_transition_width(double attenuation_db, std::size_t taps) {
    return (attenuation_db - 7.95) / (14.36 * static_cast<double>(taps - 1));
}

double mean_and_stderr(const std::vector<double>& xs, double& stderr_out) {
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    if (xs.size() < 2) {
        stderr_out = kNaN;
        return mean;
    }
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    stderr_out = std::sqrt(ss / (n - 1.0) / n);
    return mean;
}

std::vector<double> causal_filter(const std::vector<double>& h, const Eigen::VectorXd& x) {
    const std::size_t n = static_cast<std::size_t>(x.size());
    std::vector<double> y(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t span = std::min(k + 1, h.size());
        double acc = 0.0;
        for (std::size_t j = 0; j < span; ++j) acc += h[j] * x(static_cast<Eigen::Index>(k - j));
        y[k] = acc;
    }
    return y;
}

}  // namespace

Eigen::MatrixXcd gen_iid_complex_gaussian(std::size_t p, std::size_t m, Engine& rng) {
    if (p < 1 || m < 1) fail_config("p and m must be >= 1");
    std::normal_distribution<double> half(0.0, std::sqrt(0.5));
    Eigen::MatrixXcd z(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(p));
    for (Eigen::Index q = 0; q < z.cols(); ++q)
        for (Eigen::Index i = 0; i < z.rows(); ++i) {
            const double re = half(rng);
            const double im = half(rng);
            z(i, q) = std::complex<double>(re, im);
        }
    return z;
}

Eigen::MatrixXcd gen_iid_complex_gaussian(std::size_t p, std::size_t m, std::uint64_t seed) {
    Engine rng = substream(seed, 0);
    return gen_iid_complex_gaussian(p, m, rng);
}

std::vector<double> gen_ar1(double phi, double sigma, std::size_t n_samples, std::uint64_t seed) {
    if (!(std::abs(phi) < 1.0)) fail_config("AR(1) coefficient must satisfy |phi| < 1 (stationarity)");
    if (!(sigma >= 0.0)) fail_config("AR(1) innovation sigma must be nonnegative");
    std::vector<double> x(n_samples, 0.0);
    if (n_samples == 0 || sigma == 0.0) return x;
    Engine rng = substream(seed, 0);
    std::normal_distribution<double> eps(0.0, sigma);
    for (std::size_t k = 1; k < n_samples; ++k) x[k] = phi * x[k - 1] + eps(rng);
    return x;
}

double frequency_response(const std::vector<double>& h, double f) {
    std::complex<double> acc{};
    for (std::size_t k = 0; k < h.size(); ++k) {
        const double angle = -2.0 * std::numbers::pi * f * static_cast<double>(k);
        acc += h[k] * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    return std::abs(acc);
}

std::vector<double> fir_bandpass(double f_lo, double f_hi, std::size_t taps, const FirDesign& design) {
    if (!(f_lo > 0.0 && f_lo < f_hi && f_hi <= 0.5)) fail_config("band-pass needs 0 < f_lo < f_hi <= 0.5");
    if (taps < 3 || taps % 2 == 0) fail_config("band-pass tap count must be odd and >= 3");
    const double width = kaiser_transition_width(design.stopband_attenuation_db, taps);
    if (design.edge_margin + 0.5 * width > design.stopband_offset || (f_hi - f_lo) + 2.0 * design.edge_margin < width) {
        fail_config("band-pass [" + std::to_string(f_lo) + ", " + std::to_string(f_hi) + "] infeasible with " +
                    std::to_string(taps) + " taps (transition width " + std::to_string(width) + ")");
    }

    const double f1 = std::max(f_lo - design.edge_margin, 0.0);
    const double f2 = std::min(f_hi + design.edge_margin, 0.5);
    const double beta = kaiser_beta(design.stopband_attenuation_db);
    const double order = static_cast<double>(taps - 1);
    const double i0_beta = std::cyl_bessel_i(0.0, beta);
    std::vector<double> h(taps);
    for (std::size_t k = 0; k < taps; ++k) {
        const double t = static_cast<double>(k) - order / 2.0;
        const double ideal = 2.0 * f2 * sinc(2.0 * f2 * t) - 2.0 * f1 * sinc(2.0 * f1 * t);
        const double r = 2.0 * static_cast<double>(k) / order - 1.0;
        const double window = std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0_beta;
        h[k] = ideal * window;
    }
    // Exact symmetry for linear phase.
    for (std::size_t k = 0; k < taps / 2; ++k) {
        const double avg = 0.5 * (h[k] + h[taps - 1 - k]);
        h[k] = h[taps - 1 - k] = avg;
    }

    const double mid = frequency_response(h, 0.5 * (f_lo + f_hi));
    const double stop_limit = std::pow(10.0, -40.0 / 20.0);
    bool ok = std::abs(20.0 * std::log10(mid)) <= 3.0;
    constexpr int kGrid = 400;
    for (int g = 0; ok && g <= kGrid; ++g) {
        const double lo_f = (f_lo - design.stopband_offset) * g / kGrid;
        const double hi_f = f_hi + design.stopband_offset + (0.5 - f_hi - design.stopband_offset) * g / kGrid;
        if (f_lo - design.stopband_offset > 0.0 && g < kGrid && frequency_response(h, lo_f) > stop_limit) ok = false;
        if (f_hi + design.stopband_offset < 0.5 && g > 0 && frequency_response(h, hi_f) > stop_limit) ok = false;
    }
    if (!ok) {
        fail_config("band-pass [" + std::to_string(f_lo) + ", " + std::to_string(f_hi) +
                    "] misses its magnitude contract with " + std::to_string(taps) + " taps");
    }
    return h;
}

void BandpassSpec::validate() const {
    if (filter_count < 1 || spacing < 1) fail_config("band-pass spec needs filter_count, spacing >= 1");
    if (mirror_offset < spacing * filter_count) fail_config("mirror series overlap the primary active series");
    if (mirror_offset + spacing * filter_count > series_count)
        fail_config("band-pass spec needs at least " + std::to_string(mirror_offset + spacing * filter_count) + " series");
    if (band_high(filter_count) > 0.5) fail_config("pass bands must stay below Nyquist");
    if (discard_prefix >= sample_count) fail_config("discard prefix exceeds the sample count");
    if (!(noise_sigma >= 0.0) || !(source_sigma >= 0.0)) fail_config("noise levels must be nonnegative");
}

std::size_t BandpassSpec::filter_of(std::size_t s) const {
    const std::size_t one_based = s + 1;
    for (const std::size_t base : {std::size_t{0}, mirror_offset}) {
        if (one_based > base && (one_based - base) % spacing == 0) {
            const std::size_t l = (one_based - base) / spacing;
            if (l >= 1 && l <= filter_count) return l;
        }
    }
    return 0;
}

BandpassEnsemble gen_bandpass_ensemble_detailed(const BandpassSpec& spec, std::uint64_t seed) {
    spec.validate();
    const auto N = static_cast<Eigen::Index>(spec.sample_count);
    const auto p = static_cast<Eigen::Index>(spec.series_count);

    Eigen::VectorXd source(N);
    {
        Engine rng = substream(seed, 0);
        std::normal_distribution<double> g(0.0, spec.source_sigma);
        for (Eigen::Index k = 0; k < N; ++k) source(k) = g(rng);
    }

    Eigen::MatrixXd signal = Eigen::MatrixXd::Zero(N, p);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t li = 1; li <= static_cast<std::ptrdiff_t>(spec.filter_count); ++li) {
        const auto l = static_cast<std::size_t>(li);
        const auto h = fir_bandpass(BandpassSpec::band_low(l), BandpassSpec::band_high(l), spec.taps, spec.design);
        const auto y = causal_filter(h, source);
        const auto primary = static_cast<Eigen::Index>(spec.spacing * l - 1);
        const auto mirror = static_cast<Eigen::Index>(spec.mirror_offset + spec.spacing * l - 1);
        for (Eigen::Index k = 0; k < N; ++k) signal(k, primary) = signal(k, mirror) = y[static_cast<std::size_t>(k)];
    }

    Eigen::MatrixXd data = signal;
#pragma omp parallel for schedule(static)
    for (Eigen::Index s = 0; s < p; ++s) {
        Engine rng = substream(seed, 1 + static_cast<std::uint64_t>(s));
        std::normal_distribution<double> g(0.0, spec.noise_sigma);
        if (spec.noise_sigma > 0.0)
            for (Eigen::Index k = 0; k < N; ++k) data(k, s) += g(rng);
    }
    return BandpassEnsemble{TimeSeriesMatrix(std::move(data)), std::move(signal)};
}

TimeSeriesMatrix gen_bandpass_ensemble(const BandpassSpec& spec, std::uint64_t seed) {
    return std::move(gen_bandpass_ensemble_detailed(spec, seed).series);
}

std::vector<HubCountEstimate> monte_carlo_hub_counts(std::size_t p, std::size_t m, double rho,
                                                     const std::vector<std::size_t>& deltas, std::size_t trials,
                                                     std::uint64_t seed) {
    if (trials < 2) fail_config("Monte-Carlo hub counts need at least 2 trials");
    if (deltas.empty()) fail_config("no degree thresholds given");
    if (!(rho >= 0.0 && rho <= 1.0)) fail_config("rho must lie in [0,1]");
    for (auto d : deltas)
        if (d < 1 || d > p - 1) fail_config("delta must lie in [1, p-1]");

    std::vector<std::vector<double>> counts(deltas.size(), std::vector<double>(trials));
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t ts = 0; ts < static_cast<std::ptrdiff_t>(trials); ++ts) {
        const auto t = static_cast<std::size_t>(ts);
        Engine rng = substream(seed, t);
        const CorrelationMatrix r = uscores(gen_iid_complex_gaussian(p, m, rng)).gram();
        for (std::size_t d = 0; d < deltas.size(); ++d)
            counts[d][t] = static_cast<double>(count_at_level(hub_order_statistic(r, deltas[d]), rho));
    }

    std::vector<HubCountEstimate> out;
    for (std::size_t d = 0; d < deltas.size(); ++d) {
        HubCountEstimate e;
        e.delta = deltas[d];
        e.mean = mean_and_stderr(counts[d], e.stderr_);
        out.push_back(e);
    }
    return out;
}

HubCountEstimate monte_carlo_hub_counts(std::size_t p, std::size_t m, double rho, std::size_t delta,
                                        std::size_t trials, std::uint64_t seed) {
    return monte_carlo_hub_counts(p, m, rho, std::vector<std::size_t>{delta}, trials, seed).front();
}

SweepResult phase_transition_sweep(std::size_t p, const std::vector<std::size_t>& m_list,
                                   const std::vector<double>& rho_grid, std::size_t delta, std::size_t trials,
                                   std::uint64_t seed) {
    if (m_list.empty()) fail_config("empty m list");
    if (rho_grid.empty()) fail_config("empty rho grid");
    if (trials < 1) fail_config("need at least one trial");
    if (delta < 1 || delta + 1 > p) fail_config("delta must lie in [1, p-1]");
    for (auto m : m_list)
        if (m < 3) fail_config("every m must be >= 3");
    std::vector<double> grid = rho_grid;
    for (double r : grid)
        if (!(r >= 0.0 && r <= 1.0)) fail_config("rho grid values must lie in [0,1]");
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    SweepResult result;
    result.p = p;
    result.delta = delta;
    result.trials = trials;
    result.seed = seed;

    const double pd = static_cast<double>(p);
    for (std::size_t mi = 0; mi < m_list.size(); ++mi) {
        const std::size_t m = m_list[mi];
        // counts[g][t]
        std::vector<std::vector<double>> counts(grid.size(), std::vector<double>(trials));
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t ts = 0; ts < static_cast<std::ptrdiff_t>(trials); ++ts) {
            const auto t = static_cast<std::size_t>(ts);
            Engine rng = substream(seed, m, t);
            const auto order = hub_order_statistic(uscores(gen_iid_complex_gaussian(p, m, rng)).gram(), delta);
            for (std::size_t g = 0; g < grid.size(); ++g)
                counts[g][t] = static_cast<double>(count_at_level(order, grid[g]));
        }

        std::vector<double> means(grid.size());
        for (std::size_t g = 0; g < grid.size(); ++g) {
            SweepPoint pt;
            pt.m = m;
            pt.rho = grid[g];
            pt.mean_hubs = mean_and_stderr(counts[g], pt.stderr_);
            means[g] = pt.mean_hubs;
            result.points.push_back(pt);
        }

        TransitionSummary ts{m, kNaN, kNaN, kNaN};
        for (std::size_t g = 1; g < grid.size(); ++g) {
            if (means[g - 1] >= pd / 2 && means[g] < pd / 2) {
                const double frac = (means[g - 1] - pd / 2) / (means[g - 1] - means[g]);
                ts.midpoint = grid[g - 1] + frac * (grid[g] - grid[g - 1]);
                break;
            }
        }
        for (std::size_t g = 0; g < grid.size(); ++g)
            if (means[g] < 0.01 * pd) {
                ts.upper = grid[g];
                break;
            }
        for (std::size_t g = grid.size(); g-- > 0;)
            if (means[g] > 0.99 * pd) {
                ts.lower = grid[g];
                break;
            }
        result.transitions.push_back(ts);
    }
    return result;
}

namespace {
void write_number(std::ostream& out, double v) {
    if (std::isnan(v)) {
        out << "NA";
    } else {
        out << v;
    }
}
}  // namespace

void SweepResult::write_csv(std::ostream& out) const {
    out.precision(17);
    out << "m,rho,mean_hubs,stderr\n";
    for (const auto& pt : points) {
        out << pt.m << ',' << pt.rho << ',' << pt.mean_hubs << ',';
        write_number(out, pt.stderr_);
        out << '\n';
    }
}

void SweepResult::write_transitions_csv(std::ostream& out) const {
    out.precision(17);
    out << "m,midpoint,lower_99,upper_01,width\n";
    for (const auto& t : transitions) {
        out << t.m << ',';
        write_number(out, t.midpoint);
        out << ',';
        write_number(out, t.lower);
        out << ',';
        write_number(out, t.upper);
        out << ',';
        write_number(out, t.width());
        out << '\n';
    }
}

}  // namespace specscreen
