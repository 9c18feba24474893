#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace specscreen {

struct FrequencyPValueVector {
    std::string vertex;
    std::vector<double> pvalues;  // one per frequency graph, each in [0,1]

    void validate() const;
};

/// Hub at one or more frequencies: 1 - prod (1 - pv_i).
double disjunctive(std::span<const double> pvalues);

/// Hub at every frequency: prod pv_i.
double conjunctive(std::span<const double> pvalues);

/// Hub at K or more frequencies: upper tail of the Poisson-binomial law with
/// success probabilities pv_i, by O(n^2) dynamic programming. K = 1 and K = n
/// reproduce disjunctive and conjunctive bit for bit (n >= 2).
double persistent(std::span<const double> pvalues, std::size_t K);

struct AggregateResult {
    std::string vertex;
    double disjunctive = 1.0;
    double conjunctive = 1.0;
    std::size_t K = 1;
    double persistent = 1.0;
};

AggregateResult aggregate(const FrequencyPValueVector& pvs, std::size_t K);

/// Non-redundant bins for real input, 0..floor(n/2); all bins otherwise.
std::vector<std::size_t> aggregation_bins(std::size_t window_length, bool real_input = true);

}  // namespace specscreen
