#pragma once

#include "specscreen/corrcore.hpp"

#include <cstddef>
#include <ostream>
#include <vector>

namespace specscreen {

struct Edge {
    std::size_t i;  // i < j
    std::size_t j;
    double magnitude;
};

/// Graph on p vertices joining i and j whenever |psi_ij| >= threshold.
struct ScreeningGraph {
    std::size_t vertex_count = 0;
    double threshold = 0.0;
    std::vector<Edge> edges;  // sorted by (i, j)
    std::vector<std::size_t> degrees;
};

struct HubList {
    std::size_t delta = 1;
    std::vector<std::size_t> members;  // ascending vertex index

    std::size_t count() const noexcept { return members.size(); }
};

ScreeningGraph threshold_graph(const CorrelationMatrix& psi, double rho);

/// Re-screens an existing graph at a stricter level rho >= g.threshold using
/// the stored edge magnitudes.
ScreeningGraph rethreshold(const ScreeningGraph& g, double rho);

HubList count_hubs(const ScreeningGraph& g, std::size_t delta);

/// rho_j(delta): the delta-th largest |psi_jq| over q != j, for every row j.
std::vector<double> hub_order_statistic(const CorrelationMatrix& psi, std::size_t delta);

/// Number of vertices j with rho_j(delta) >= rho. Equivalent to the hub count
/// of threshold_graph(psi, rho) at degree delta.
std::size_t count_at_level(const std::vector<double>& order_statistic, double rho);

void write_edges_csv(const ScreeningGraph& g, std::ostream& out);
void write_degrees_csv(const ScreeningGraph& g, std::ostream& out);

}  // namespace specscreen
