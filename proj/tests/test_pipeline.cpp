#include <doctest.h>

#include "specscreen/error.hpp"
#include "specscreen/log.hpp"
#include "specscreen/pipeline.hpp"
#include "specscreen/report.hpp"
#include "specscreen/synth.hpp"

#include <random>

using namespace specscreen;

namespace {

BandpassSpec small_spec() {
    BandpassSpec spec;
    spec.series_count = 40;
    spec.filter_count = 4;
    spec.spacing = 5;
    spec.mirror_offset = 20;
    spec.sample_count = 6000;
    spec.discard_prefix = 1000;
    return spec;
}

struct QuietWarnings {
    std::vector<std::string> seen;
    WarningSink previous;
    QuietWarnings() { previous = set_warning_sink([this](const std::string& w) { seen.push_back(w); }); }
    ~QuietWarnings() { set_warning_sink(previous); }
};

}  // namespace

TEST_CASE("screening a small band-pass ensemble recovers the filter pairs") {
    QuietWarnings quiet;
    const auto ts = gen_bandpass_ensemble(small_spec(), 3);
    ScreeningConfig config;
    config.rho = 0.9;
    config.discard_prefix = 1000;
    const auto run = screen_series(ts, config);
    CHECK(run.segment_count == 50);
    CHECK_FALSE(run.rho_was_auto);
    REQUIRE(run.reports.size() == 51);
    for (const auto& r : run.reports) {
        CHECK(r.frequency == doctest::Approx(r.bin / 100.0));
        CHECK(r.mode == ScreeningMode::Correlation);
        if (r.bin >= 1 && r.bin <= 4) {
            CHECK(r.hubs() == std::vector<std::size_t>{5 * r.bin - 1, 20 + 5 * r.bin - 1});
        } else {
            CHECK(r.hubs().empty());
        }
    }
}

TEST_CASE("explicit bins, automatic threshold and validation") {
    QuietWarnings quiet;
    const auto ts = gen_bandpass_ensemble(small_spec(), 4);
    ScreeningConfig config;
    config.discard_prefix = 1000;
    const auto run = screen_series(ts, config, {3, 1, 3});
    CHECK(run.rho_was_auto);
    CHECK(run.rho > critical_threshold_numeric(40, 50, 1));
    REQUIRE(run.reports.size() == 2);
    CHECK(run.reports[0].bin == 1);
    CHECK(run.reports[1].bin == 3);
    CHECK_THROWS_AS(screen_series(ts, config, {100}), Error);
    config.delta = 40;
    CHECK_THROWS_AS(screen_series(ts, config), Error);
}

TEST_CASE("partial correlation mode") {
    QuietWarnings quiet;
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    Eigen::MatrixXd d(200, 30);
    for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = g(rng);
    d.col(7) = d.col(3) + 0.01 * d.col(8);
    ScreeningConfig config;
    config.window_length = 10;
    config.rho = 0.95;
    config.mode = ScreeningMode::PartialCorrelation;
    const auto run = screen_series(TimeSeriesMatrix(d), config);
    for (const auto& r : run.reports) CHECK(r.mode == ScreeningMode::PartialCorrelation);

    // Too few variables for the partial U-score Gram matrix to be invertible.
    Eigen::MatrixXd narrow = d.leftCols(5);
    try {
        screen_series(TimeSeriesMatrix(narrow), config);
        FAIL("expected numeric error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Numeric);
    }
}

TEST_CASE("reports round-trip through JSON") {
    QuietWarnings quiet;
    const auto ts = gen_bandpass_ensemble(small_spec(), 5);
    ScreeningConfig config;
    config.rho = 0.9;
    config.discard_prefix = 1000;
    const auto run = screen_series(ts, config, {2});
    const auto& r = run.reports.front();
    const auto j = to_json(r);
    CHECK(j["frequency"] == 0.02);
    CHECK(j["mode"] == "correlation");
    CHECK(j["delta"] == 1);
    CHECK(j["rho"] == 0.9);
    CHECK(j["vertices"].size() == 40);
    CHECK(j["vertices"][0].contains("name"));
    CHECK(j["vertices"][0].contains("pvalue"));
    const auto back = hub_report_from_json(nlohmann::json::parse(j.dump()));
    CHECK(to_json(back) == j);
    CHECK(back.vertices.front().pvalue == r.vertices.front().pvalue);
    CHECK_THROWS_AS(hub_report_from_json(nlohmann::json::parse(R"({"frequency":0.1})")), Error);
}
