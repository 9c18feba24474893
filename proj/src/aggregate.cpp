#include "specscreen/aggregate.hpp"

#include "specscreen/error.hpp"

#include <algorithm>
#include <cmath>

namespace specscreen {
namespace {

void check_pvalues(std::span<const double> pvalues) {
    if (pvalues.empty()) fail_config("empty p-value vector");
    for (double v : pvalues)
        if (!(v >= 0.0 && v <= 1.0)) fail_config("p-values must lie in [0,1]");
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

void FrequencyPValueVector::validate() const { check_pvalues(pvalues); }

double disjunctive(std::span<const double> pvalues) {
    check_pvalues(pvalues);
    double none = 1.0;
    for (double v : pvalues) none *= (1.0 - v);
    return clamp01(1.0 - none);
}

double conjunctive(std::span<const double> pvalues) {
    check_pvalues(pvalues);
    double all = 1.0;
    for (double v : pvalues) all *= v;
    return clamp01(all);
}

double persistent(std::span<const double> pvalues, std::size_t K) {
    check_pvalues(pvalues);
    const std::size_t n = pvalues.size();
    if (K < 1 || K > n) fail_config("K must lie in [1, " + std::to_string(n) + "]");

    // dist[k] = P(exactly k successes among the frequencies seen so far).
    // The update order makes dist[0] and dist[n] the same products that
    // disjunctive and conjunctive compute.
    std::vector<double> dist(n + 1, 0.0);
    dist[0] = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double q = pvalues[i];
        for (std::size_t k = i + 1; k >= 1; --k) dist[k] = dist[k] * (1.0 - q) + dist[k - 1] * q;
        dist[0] *= (1.0 - q);
    }

    if (K == n) return clamp01(dist[n]);
    if (2 * K <= n) {
        double below = 0.0;
        for (std::size_t k = 0; k < K; ++k) below += dist[k];
        return clamp01(1.0 - below);
    }
    double tail = 0.0;
    for (std::size_t k = n + 1; k-- > K;) tail += dist[k];
    return clamp01(tail);
}

AggregateResult aggregate(const FrequencyPValueVector& pvs, std::size_t K) {
    pvs.validate();
    AggregateResult r;
    r.vertex = pvs.vertex;
    r.disjunctive = disjunctive(pvs.pvalues);
    r.conjunctive = conjunctive(pvs.pvalues);
    r.K = K;
    r.persistent = persistent(pvs.pvalues, K);
    return r;
}

std::vector<std::size_t> aggregation_bins(std::size_t window_length, bool real_input) {
    if (window_length == 0) fail_config("window length must be positive");
    const std::size_t count = real_input ? window_length / 2 + 1 : window_length;
    std::vector<std::size_t> bins(count);
    for (std::size_t b = 0; b < count; ++b) bins[b] = b;
    return bins;
}

}  // namespace specscreen
