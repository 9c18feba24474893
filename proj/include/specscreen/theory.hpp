#pragma once

#include "specscreen/corrcore.hpp"
#include "specscreen/ingest.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace specscreen {

struct TheoryParams {
    std::size_t p = 2;
    std::size_t m = 3;
    std::size_t delta = 1;
    double rho = 0.0;
    double J = 1.0;

    /// m > 2, delta >= 1, p >= 2, rho in [0,1], J > 0.
    void validate() const;
};

/// Probability that a uniform point on the unit sphere of C^{m-1} has
/// |<y,u>| >= rho for a fixed unit u: (1 - rho^2)^(m-2).
double p0(double rho, std::size_t m);
double log_p0(double rho, std::size_t m);

/// Poisson rate divisor: 2 for delta = 1 (every edge makes two 1-hubs), else 1.
int phi(std::size_t delta);

/// eta = p^{1/delta} (p-1) P0.
double eta(const TheoryParams& params);

/// Lambda = p C(p-1, delta) P0^delta J, the asymptotic mean number of
/// delta-hubs. Evaluated in log space; the log form is exposed separately
/// because Lambda spans hundreds of decades.
double mean_hub_count(const TheoryParams& params);
double log_mean_hub_count(const TheoryParams& params);

/// 1 - exp(-Lambda / phi(delta)); Lambda/phi(delta) when Lambda < 1e-12.
double false_positive_prob(const TheoryParams& params);

/// Same map applied to a given rate Lambda.
double false_positive_prob_from_rate(double lambda, std::size_t delta);

/// Surface area of the unit sphere of C^{m-1} (as the sphere in R^{2m-2}):
/// 2 pi^{m-1} / Gamma(m-1).
double sphere_area_complex(std::size_t m);
double log_sphere_area_complex(std::size_t m);

/// Closed-form critical threshold
///   sqrt(1 - (c (p-1))^{-2 delta / (delta (2m-3) - 2)}),  c = b_{m-1} delta J.
/// Throws a Numeric error outside its validity domain (c (p-1) <= 1 or
/// delta (2m-3) <= 2).
double critical_threshold_closed(std::size_t p, std::size_t m, std::size_t delta, double J = 1.0);
std::optional<double> try_critical_threshold_closed(std::size_t p, std::size_t m, std::size_t delta, double J = 1.0);

/// Root of dLambda/drho = -p on the decreasing branch of |dLambda/drho|,
/// by bisection to 1e-8. Throws a Numeric error when the slope never
/// reaches p (degenerate regime).
double critical_threshold_numeric(std::size_t p, std::size_t m, std::size_t delta, double J = 1.0);

/// log |dLambda/drho| at rho (helper for the numeric solver and its tests).
double log_mean_hub_count_slope(std::size_t p, std::size_t m, std::size_t delta, double J, double rho);

struct VertexRecord {
    std::size_t vertex = 0;
    std::string name;
    std::size_t degree = 0;  // at the screening threshold
    double rho_j = 0.0;
    double pvalue = 1.0;
};

struct HubReport {
    double frequency = 0.0;
    std::size_t bin = 0;
    ScreeningMode mode = ScreeningMode::Correlation;
    std::size_t delta = 1;
    double rho = 0.0;          // screening threshold rho*
    double critical_rho = 0.0; // numeric critical threshold (NaN if degenerate)
    std::vector<VertexRecord> vertices;  // ascending p-value, then vertex
    std::vector<std::string> warnings;

    /// Vertices with degree >= delta at rho, ascending index.
    std::vector<std::size_t> hubs() const;
};

/// p-values for being a delta-hub. Vertices with degree >= delta at rho_star
/// get false_positive_prob at rho = rho_j(delta) with J = 1; others get 1.
/// `sample_count` is m, the number of samples behind psi.
HubReport assign_pvalues(const CorrelationMatrix& psi, std::size_t delta, double rho_star, std::size_t sample_count,
                         const std::vector<std::string>& names = {});

/// Smallest rho above the numeric critical threshold at which the
/// family-wise false positive probability is at most alpha.
double resolve_auto_threshold(std::size_t p, std::size_t m, std::size_t delta, double alpha = 0.01, double J = 1.0);

}  // namespace specscreen
