#include <doctest.h>

#include "specscreen/error.hpp"
#include "specscreen/ingest.hpp"
#include "specscreen/log.hpp"

#include <cstdio>
#include <cstring>
#include <functional>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

using namespace specscreen;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name, const std::string& contents) {
    const fs::path dir = fs::temp_directory_path() / "specscreen_test_ingest";
    fs::create_directories(dir);
    const fs::path path = dir / name;
    std::ofstream(path, std::ios::binary) << contents;
    return path;
}

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::Config;
}

TimeSeriesMatrix counting_series(std::size_t n, std::size_t p) {
    Eigen::MatrixXd d(n, p);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j) d(i, j) = static_cast<double>(i * 10 + j);
    return TimeSeriesMatrix(d);
}

}  // namespace

TEST_CASE("csv load reads header and rows") {
    const auto path = temp_file("small.csv", "a,b\n1,2\n3,4\n5,6\n");
    const auto ts = load_series(path, SeriesFormat::Csv);
    CHECK(ts.sample_count() == 3);
    CHECK(ts.series_count() == 2);
    CHECK(ts.names() == std::vector<std::string>{"a", "b"});
    CHECK(ts.data()(2, 1) == 6.0);
    CHECK(ts.data()(1, 0) == 3.0);
}

TEST_CASE("csv load tolerates CRLF, BOM and trailing newline absence") {
    const auto path = temp_file("crlf.csv", "\xEF\xBB\xBFx,y\r\n1.5,-2e3\r\n0,7");
    const auto ts = load_series(path, SeriesFormat::Csv);
    CHECK(ts.names() == std::vector<std::string>{"x", "y"});
    CHECK(ts.data()(0, 1) == -2000.0);
    CHECK(ts.sample_count() == 2);
}

TEST_CASE("csv load rejects bad input") {
    CHECK(kind_of([] { load_series(temp_file("nan.csv", "a,b\n1,NaN\n3,4\n"), SeriesFormat::Csv); }) ==
          ErrorKind::Data);
    CHECK(kind_of([] { load_series(temp_file("one.csv", "a\n1\n2\n"), SeriesFormat::Csv); }) == ErrorKind::Data);
    CHECK(kind_of([] { load_series(temp_file("ragged.csv", "a,b\n1,2\n3\n"), SeriesFormat::Csv); }) ==
          ErrorKind::Data);
    CHECK(kind_of([] { load_series(temp_file("junk.csv", "a,b\n1,x\n3,4\n"), SeriesFormat::Csv); }) ==
          ErrorKind::Data);
    CHECK(kind_of([] { load_series("/nonexistent/specscreen.csv", SeriesFormat::Csv); }) == ErrorKind::Data);
}

TEST_CASE("matrix constructor validates") {
    CHECK_THROWS_AS(TimeSeriesMatrix(Eigen::MatrixXd::Zero(5, 1)), Error);
    CHECK_THROWS_AS(TimeSeriesMatrix(Eigen::MatrixXd::Zero(1, 3)), Error);
    Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(3, 3);
    bad(1, 1) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(TimeSeriesMatrix{bad}, Error);
    CHECK_THROWS_AS(TimeSeriesMatrix(Eigen::MatrixXd::Zero(3, 2), {"only"}), Error);
    CHECK(TimeSeriesMatrix(Eigen::MatrixXd::Zero(3, 2)).names() == std::vector<std::string>{"X1", "X2"});
}

TEST_CASE("csv and raw round trips are bit-identical") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 2 + rng() % 30, p = 2 + rng() % 6;
        Eigen::MatrixXd d(n, p);
        for (Eigen::Index i = 0; i < d.size(); ++i) {
            const double scale = std::pow(10.0, static_cast<double>(static_cast<int>(rng() % 40) - 20));
            d(i) = u(rng) * scale;
        }
        d(0, 0) = std::nextafter(1.0, 2.0);
        d(1, 1) = -0.0;
        d(0, 1) = std::numeric_limits<double>::denorm_min();
        const TimeSeriesMatrix ts(d);
        for (auto fmt : {SeriesFormat::Csv, SeriesFormat::RawF64}) {
            const auto path = temp_file(fmt == SeriesFormat::Csv ? "rt.csv" : "rt.f64", "");
            save_series(ts, path, fmt);
            const auto back = load_series(path, fmt);
            REQUIRE(back.sample_count() == n);
            REQUIRE(back.series_count() == p);
            CHECK(back.names() == ts.names());
            CHECK(std::memcmp(back.data().data(), d.data(), sizeof(double) * d.size()) == 0);
        }
    }
}

TEST_CASE("raw format needs a consistent sidecar") {
    const TimeSeriesMatrix ts = counting_series(4, 3);
    const auto path = temp_file("side.f64", "");
    save_series(ts, path, SeriesFormat::RawF64);
    std::ofstream(raw_sidecar_path(path)) << R"({"rows":5,"cols":3,"names":["a","b","c"]})";
    CHECK(kind_of([&] { load_series(path, SeriesFormat::RawF64); }) == ErrorKind::Data);
    fs::remove(raw_sidecar_path(path));
    CHECK(kind_of([&] { load_series(path, SeriesFormat::RawF64); }) == ErrorKind::Data);
}

TEST_CASE("format names") {
    CHECK(parse_series_format("csv") == SeriesFormat::Csv);
    CHECK(parse_series_format("raw-f64") == SeriesFormat::RawF64);
    CHECK_THROWS_AS(parse_series_format("parquet"), Error);
    CHECK(parse_screening_mode("partial-correlation") == ScreeningMode::PartialCorrelation);
    CHECK(to_string(ScreeningMode::Correlation) == "correlation");
    CHECK(parse_screening_mode(to_string(ScreeningMode::PartialCorrelation)) == ScreeningMode::PartialCorrelation);
}

TEST_CASE("segment counts and layout") {
    SUBCASE("default band-pass sizes") {
        const auto segs = segment(counting_series(12000, 2), 100, 2000);
        CHECK(segs.segment_count() == 100);
        CHECK(segs.dropped_tail == 0);
        CHECK(segs.segments[0](0, 0) == 20000.0);
    }
    SUBCASE("remainder dropped with a warning") {
        std::vector<std::string> warnings;
        auto previous = set_warning_sink([&](const std::string& w) { warnings.push_back(w); });
        const auto segs = segment(counting_series(10, 2), 3, 0);
        set_warning_sink(previous);
        CHECK(segs.segment_count() == 3);
        CHECK(segs.dropped_tail == 1);
        CHECK(warnings.size() == 1);
        CHECK(segs.segments[2](2, 1) == 81.0);
    }
    SUBCASE("too few samples") {
        CHECK(kind_of([] { segment(counting_series(10, 2), 6, 0); }) == ErrorKind::Data);
        CHECK(kind_of([] { segment(counting_series(10, 2), 2, 9); }) == ErrorKind::Data);
    }
}

TEST_CASE("property: segments concatenate to the source slice") {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 1 + rng() % 7, discard = rng() % 9, N = discard + 2 * n + rng() % 40, p = 2 + rng() % 3;
        const auto ts = counting_series(N, p);
        std::vector<std::string> sink;
        auto prev = set_warning_sink([&](const std::string& w) { sink.push_back(w); });
        const auto segs = segment(ts, n, discard);
        set_warning_sink(prev);
        REQUIRE(segs.segment_count() == (N - discard) / n);
        CHECK(segs.segment_count() * n + discard + segs.dropped_tail == N);
        std::size_t row = discard;
        for (const auto& s : segs.segments) {
            REQUIRE(static_cast<std::size_t>(s.rows()) == n);
            for (std::size_t t = 0; t < n; ++t, ++row)
                for (std::size_t q = 0; q < p; ++q) CHECK(s(t, q) == ts.data()(row, q));
        }
    }
}

TEST_CASE("config validation") {
    ScreeningConfig c;
    CHECK_NOTHROW(c.validate());
    c.delta = 0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = {};
    c.rho = 1.5;
    CHECK_THROWS_AS(c.validate(), Error);
    c = {};
    c.J = 0.0;
    CHECK_THROWS_AS(c.validate(), Error);
}
