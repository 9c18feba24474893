#include "specscreen/screen.hpp"

#include "specscreen/error.hpp"

#include <algorithm>
#include <functional>

namespace specscreen {

ScreeningGraph threshold_graph(const CorrelationMatrix& psi, double rho) {
    if (!(rho >= 0.0 && rho <= 1.0)) fail_config("screening threshold rho must lie in [0,1]");
    const std::size_t p = psi.size();
    ScreeningGraph g;
    g.vertex_count = p;
    g.threshold = rho;
    g.degrees.assign(p, 0);
    const auto& v = psi.values();
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i + 1; j < p; ++j) {
            const double mag = std::abs(v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
            if (mag >= rho) {
                g.edges.push_back({i, j, mag});
                ++g.degrees[i];
                ++g.degrees[j];
            }
        }
    }
    return g;
}

ScreeningGraph rethreshold(const ScreeningGraph& g, double rho) {
    if (!(rho >= g.threshold && rho <= 1.0))
        fail_config("rethreshold needs rho in [" + std::to_string(g.threshold) + ", 1]");
    ScreeningGraph out;
    out.vertex_count = g.vertex_count;
    out.threshold = rho;
    out.degrees.assign(g.vertex_count, 0);
    for (const auto& e : g.edges) {
        if (e.magnitude >= rho) {
            out.edges.push_back(e);
            ++out.degrees[e.i];
            ++out.degrees[e.j];
        }
    }
    return out;
}

HubList count_hubs(const ScreeningGraph& g, std::size_t delta) {
    if (delta < 1) fail_config("delta must be >= 1");
    HubList hubs;
    hubs.delta = delta;
    for (std::size_t i = 0; i < g.vertex_count; ++i)
        if (g.degrees[i] >= delta) hubs.members.push_back(i);
    return hubs;
}

std::vector<double> hub_order_statistic(const CorrelationMatrix& psi, std::size_t delta) {
    const std::size_t p = psi.size();
    if (delta < 1 || delta > p - 1)
        fail_config("delta must be in [1, p-1] = [1, " + std::to_string(p - 1) + "], got " + std::to_string(delta));
    const auto& v = psi.values();
    std::vector<double> out(p);
#pragma omp parallel
    {
        std::vector<double> row(p - 1);
#pragma omp for schedule(static)
        for (std::ptrdiff_t js = 0; js < static_cast<std::ptrdiff_t>(p); ++js) {
            const auto j = static_cast<std::size_t>(js);
            std::size_t k = 0;
            // Column access: psi is Hermitian, so |psi(q,j)| = |psi(j,q)| and
            // column-major storage keeps this contiguous.
            for (std::size_t q = 0; q < p; ++q)
                if (q != j) row[k++] = std::abs(v(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(j)));
            std::nth_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(delta - 1), row.end(),
                             std::greater<>());
            out[j] = row[delta - 1];
        }
    }
    return out;
}

std::size_t count_at_level(const std::vector<double>& order_statistic, double rho) {
    return static_cast<std::size_t>(
        std::count_if(order_statistic.begin(), order_statistic.end(), [rho](double r) { return r >= rho; }));
}

void write_edges_csv(const ScreeningGraph& g, std::ostream& out) {
    out << "i,j,magnitude\n";
    out.precision(17);
    for (const auto& e : g.edges) out << e.i << ',' << e.j << ',' << e.magnitude << '\n';
}

void write_degrees_csv(const ScreeningGraph& g, std::ostream& out) {
    out << "vertex,degree\n";
    for (std::size_t i = 0; i < g.vertex_count; ++i) out << i << ',' << g.degrees[i] << '\n';
}

}  // namespace specscreen
