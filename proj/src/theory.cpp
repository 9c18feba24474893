#include "specscreen/theory.hpp"

#include "specscreen/error.hpp"
#include "specscreen/screen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace specscreen {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_binomial(std::size_t n, std::size_t k) {
    if (k > n) return kNegInf;
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

void check_common(std::size_t p, std::size_t m, std::size_t delta, double J) {
    if (p < 2) fail_config("p must be >= 2");
    if (m <= 2) fail_config("m must be > 2");
    if (delta < 1) fail_config("delta must be >= 1");
    if (!(J > 0.0) || !std::isfinite(J)) fail_config("J must be positive and finite");
}

}  // namespace

void TheoryParams::validate() const {
    check_common(p, m, delta, J);
    if (!(rho >= 0.0 && rho <= 1.0)) fail_config("rho must lie in [0,1]");
}

double log_p0(double rho, std::size_t m) {
    if (!(rho >= 0.0 && rho <= 1.0)) fail_config("rho must lie in [0,1]");
    if (m <= 2) fail_config("m must be > 2");
    if (rho == 1.0) return kNegInf;
    return static_cast<double>(m - 2) * std::log1p(-rho * rho);
}

double p0(double rho, std::size_t m) { return std::exp(log_p0(rho, m)); }

int phi(std::size_t delta) { return delta == 1 ? 2 : 1; }

double eta(const TheoryParams& params) {
    params.validate();
    const double p = static_cast<double>(params.p);
    const double log_eta = std::log(p) / static_cast<double>(params.delta) + std::log(p - 1.0) +
                           log_p0(params.rho, params.m);
    return std::exp(log_eta);
}

double log_mean_hub_count(const TheoryParams& params) {
    params.validate();
    const double lp0 = log_p0(params.rho, params.m);
    if (lp0 == kNegInf) return kNegInf;
    return std::log(static_cast<double>(params.p)) + log_binomial(params.p - 1, params.delta) +
           static_cast<double>(params.delta) * lp0 + std::log(params.J);
}

double mean_hub_count(const TheoryParams& params) { return std::exp(log_mean_hub_count(params)); }

double false_positive_prob_from_rate(double lambda, std::size_t delta) {
    if (!(lambda >= 0.0)) fail_config("Poisson rate must be nonnegative");
    const double rate = lambda / static_cast<double>(phi(delta));
    if (lambda < 1e-12) return rate;
    return std::clamp(-std::expm1(-rate), 0.0, 1.0);
}

double false_positive_prob(const TheoryParams& params) {
    return false_positive_prob_from_rate(mean_hub_count(params), params.delta);
}

double log_sphere_area_complex(std::size_t m) {
    if (m < 3) fail_config("sphere area needs m >= 3");
    const double dim = static_cast<double>(m - 1);
    return std::log(2.0) + dim * std::log(std::numbers::pi) - std::lgamma(dim);
}

double sphere_area_complex(std::size_t m) { return std::exp(log_sphere_area_complex(m)); }

std::optional<double> try_critical_threshold_closed(std::size_t p, std::size_t m, std::size_t delta, double J) {
    check_common(p, m, delta, J);
    const double d = static_cast<double>(delta);
    const double denom = d * (2.0 * static_cast<double>(m) - 3.0) - 2.0;
    if (!(denom > 0.0)) return std::nullopt;
    const double log_base = log_sphere_area_complex(m) + std::log(d) + std::log(J) + std::log(static_cast<double>(p - 1));
    if (!(log_base > 0.0)) return std::nullopt;
    const double power = std::exp(-2.0 * d / denom * log_base);
    return std::sqrt(1.0 - power);
}

double critical_threshold_closed(std::size_t p, std::size_t m, std::size_t delta, double J) {
    if (auto r = try_critical_threshold_closed(p, m, delta, J)) return *r;
    fail_numeric("closed-form critical threshold is outside its validity domain for p=" + std::to_string(p) +
                 ", m=" + std::to_string(m) + ", delta=" + std::to_string(delta) +
                 " (c_{m,delta}(p-1) <= 1); use the numeric slope solver");
}

double log_mean_hub_count_slope(std::size_t p, std::size_t m, std::size_t delta, double J, double rho) {
    check_common(p, m, delta, J);
    if (!(rho > 0.0 && rho < 1.0)) return kNegInf;
    const double a = static_cast<double>(delta) * static_cast<double>(m - 2) - 1.0;
    return std::log(static_cast<double>(p)) + log_binomial(p - 1, delta) + std::log(static_cast<double>(delta)) +
           std::log(J) + a * std::log1p(-rho * rho) + std::log(2.0 * rho * static_cast<double>(m - 2));
}

double critical_threshold_numeric(std::size_t p, std::size_t m, std::size_t delta, double J) {
    check_common(p, m, delta, J);
    const double a = static_cast<double>(delta) * static_cast<double>(m - 2) - 1.0;
    if (!(a > 0.0)) fail_numeric("degenerate regime: |dLambda/drho| has no decreasing branch for m=3, delta=1");
    const double target = std::log(static_cast<double>(p));
    auto h = [&](double rho) { return log_mean_hub_count_slope(p, m, delta, J, rho) - target; };

    // |dLambda/drho| ~ rho (1-rho^2)^a peaks at rho^2 = 1/(2a+1).
    double lo = 1.0 / std::sqrt(2.0 * a + 1.0);
    double hi = 1.0;
    if (!(h(lo) >= 0.0)) {
        fail_numeric("degenerate regime: the slope of the mean hub count never reaches -p (p=" + std::to_string(p) +
                     ", m=" + std::to_string(m) + ", delta=" + std::to_string(delta) + ")");
    }
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (h(mid) >= 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<std::size_t> HubReport::hubs() const {
    std::vector<std::size_t> out;
    for (const auto& v : vertices)
        if (v.degree >= delta) out.push_back(v.vertex);
    std::sort(out.begin(), out.end());
    return out;
}

HubReport assign_pvalues(const CorrelationMatrix& psi, std::size_t delta, double rho_star, std::size_t sample_count,
                         const std::vector<std::string>& names) {
    const std::size_t p = psi.size();
    if (!names.empty() && names.size() != p) fail_config("name count does not match the correlation matrix");
    check_common(p, sample_count, delta, 1.0);

    HubReport report;
    report.delta = delta;
    report.rho = rho_star;
    report.mode = psi.kind() == CorrelationKind::Correlation ? ScreeningMode::Correlation
                                                              : ScreeningMode::PartialCorrelation;
    try {
        report.critical_rho = critical_threshold_numeric(p, sample_count, delta);
        if (rho_star <= report.critical_rho) {
            report.warnings.push_back("screening threshold " + std::to_string(rho_star) +
                                      " is not above the critical threshold " + std::to_string(report.critical_rho));
        }
    } catch (const Error&) {
        report.critical_rho = std::numeric_limits<double>::quiet_NaN();
        report.warnings.push_back("critical threshold undefined (degenerate regime)");
    }

    const ScreeningGraph g = threshold_graph(psi, rho_star);
    const std::vector<double> rho_j = hub_order_statistic(psi, delta);
    const std::size_t max_degree = g.degrees.empty() ? 0 : *std::max_element(g.degrees.begin(), g.degrees.end());
    if (delta > max_degree && max_degree > 0) {
        report.warnings.push_back("delta exceeds the largest observed degree " + std::to_string(max_degree));
    }

    report.vertices.reserve(p);
    for (std::size_t j = 0; j < p; ++j) {
        VertexRecord rec;
        rec.vertex = j;
        rec.name = names.empty() ? "X" + std::to_string(j + 1) : names[j];
        rec.degree = g.degrees[j];
        rec.rho_j = rho_j[j];
        rec.pvalue = rec.degree >= delta ? false_positive_prob({p, sample_count, delta, rho_j[j], 1.0}) : 1.0;
        report.vertices.push_back(std::move(rec));
    }
    std::stable_sort(report.vertices.begin(), report.vertices.end(),
                     [](const VertexRecord& a, const VertexRecord& b) { return a.pvalue < b.pvalue; });
    return report;
}

double resolve_auto_threshold(std::size_t p, std::size_t m, std::size_t delta, double alpha, double J) {
    check_common(p, m, delta, J);
    if (!(alpha > 0.0 && alpha < 1.0)) fail_config("alpha must lie in (0,1)");
    // false_positive_prob is non-increasing in rho; find the smallest rho
    // with probability <= alpha.
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (false_positive_prob({p, m, delta, mid, J}) <= alpha ? hi : lo) = mid;
    }
    double rho = hi;
    try {
        const double rc = critical_threshold_numeric(p, m, delta, J);
        if (rho <= rc) rho = std::nextafter(rc, 2.0);
    } catch (const Error&) {
    }
    return std::min(rho, 1.0);
}

}  // namespace specscreen
