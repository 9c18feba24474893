#include "specscreen/ingest.hpp"

#include "specscreen/error.hpp"
#include "specscreen/log.hpp"

#include <json.hpp>

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace specscreen {
namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

double parse_double(const std::string& cell, std::size_t row, std::size_t col) {
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    if (!cell.empty() && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        fail_data("cannot parse '" + cell + "' as a number at data row " + std::to_string(row + 1) + ", column " +
                  std::to_string(col + 1));
    }
    if (!std::isfinite(value)) {
        fail_data("non-finite value '" + cell + "' at data row " + std::to_string(row + 1) + ", column " +
                  std::to_string(col + 1));
    }
    return value;
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

TimeSeriesMatrix load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail_data("cannot open " + path.string());

    std::string line;
    if (!std::getline(in, line)) fail_data(path.string() + ": empty file");
    if (line.size() >= 3 && std::memcmp(line.data(), "\xEF\xBB\xBF", 3) == 0) line.erase(0, 3);
    std::vector<std::string> names = split_csv_line(line);
    const std::size_t p = names.size();
    if (p < 2) fail_data(path.string() + ": need at least 2 series, header has " + std::to_string(p));

    std::vector<double> values;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != p) {
            fail_data(path.string() + ": ragged row " + std::to_string(rows + 1) + " has " +
                      std::to_string(cells.size()) + " cells, expected " + std::to_string(p));
        }
        for (std::size_t c = 0; c < p; ++c) values.push_back(parse_double(cells[c], rows, c));
        ++rows;
    }
    Eigen::MatrixXd data(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(p));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < p; ++c) data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = values[r * p + c];
    return TimeSeriesMatrix(std::move(data), std::move(names));
}

TimeSeriesMatrix load_raw(const std::filesystem::path& path) {
    const auto sidecar = raw_sidecar_path(path);
    std::ifstream meta_in(sidecar);
    if (!meta_in) fail_data("missing sidecar " + sidecar.string());
    nlohmann::json meta;
    try {
        meta_in >> meta;
    } catch (const nlohmann::json::exception& e) {
        fail_data(sidecar.string() + ": " + e.what());
    }
    if (!meta.contains("rows") || !meta.contains("cols")) fail_data(sidecar.string() + ": needs rows and cols");
    const auto rows = meta["rows"].get<std::size_t>();
    const auto cols = meta["cols"].get<std::size_t>();
    std::vector<std::string> names;
    if (meta.contains("names")) names = meta["names"].get<std::vector<std::string>>();

    std::ifstream in(path, std::ios::binary);
    if (!in) fail_data("cannot open " + path.string());
    std::vector<double> buffer(rows * cols);
    in.read(reinterpret_cast<char*>(buffer.data()), static_cast<std::streamsize>(buffer.size() * sizeof(double)));
    if (static_cast<std::size_t>(in.gcount()) != buffer.size() * sizeof(double))
        fail_data(path.string() + ": expected " + std::to_string(rows * cols) + " f64 values");
    if (in.peek() != std::char_traits<char>::eof()) fail_data(path.string() + ": trailing bytes after data");

    if constexpr (std::endian::native == std::endian::big) {
        for (auto& v : buffer) {
            auto bits = std::bit_cast<std::uint64_t>(v);
            bits = __builtin_bswap64(bits);
            v = std::bit_cast<double>(bits);
        }
    }
    Eigen::MatrixXd data(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            const double v = buffer[r * cols + c];
            if (!std::isfinite(v))
                fail_data(path.string() + ": non-finite value at row " + std::to_string(r + 1) + ", column " +
                          std::to_string(c + 1));
            data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
        }
    return TimeSeriesMatrix(std::move(data), std::move(names));
}

}  // namespace

TimeSeriesMatrix::TimeSeriesMatrix(Eigen::MatrixXd data, std::vector<std::string> names)
    : data_(std::move(data)), names_(std::move(names)) {
    if (data_.cols() < 2) fail_data("need at least 2 series (p >= 2), got " + std::to_string(data_.cols()));
    if (data_.rows() < 2) fail_data("need at least 2 samples (N >= 2), got " + std::to_string(data_.rows()));
    if (!data_.allFinite()) fail_data("time series contains non-finite values");
    if (names_.empty()) {
        for (Eigen::Index c = 0; c < data_.cols(); ++c) names_.push_back("X" + std::to_string(c + 1));
    } else if (names_.size() != static_cast<std::size_t>(data_.cols())) {
        fail_data("got " + std::to_string(names_.size()) + " names for " + std::to_string(data_.cols()) + " series");
    }
}

SeriesFormat parse_series_format(const std::string& name) {
    if (name == "csv") return SeriesFormat::Csv;
    if (name == "raw-f64" || name == "raw") return SeriesFormat::RawF64;
    fail_config("unknown series format '" + name + "' (expected csv or raw-f64)");
}

std::filesystem::path raw_sidecar_path(const std::filesystem::path& path) {
    return std::filesystem::path(path.string() + ".json");
}

TimeSeriesMatrix load_series(const std::filesystem::path& path, SeriesFormat format) {
    if (!std::filesystem::exists(path)) fail_data("no such file: " + path.string());
    return format == SeriesFormat::Csv ? load_csv(path) : load_raw(path);
}

void save_series(const TimeSeriesMatrix& ts, const std::filesystem::path& path, SeriesFormat format) {
    const auto& d = ts.data();
    if (format == SeriesFormat::Csv) {
        std::ofstream out(path);
        if (!out) fail_data("cannot write " + path.string());
        for (std::size_t c = 0; c < ts.names().size(); ++c) out << (c ? "," : "") << ts.names()[c];
        out << '\n';
        std::string row;
        for (Eigen::Index r = 0; r < d.rows(); ++r) {
            row.clear();
            for (Eigen::Index c = 0; c < d.cols(); ++c) {
                if (c) row += ',';
                row += format_double(d(r, c));
            }
            out << row << '\n';
        }
        if (!out) fail_data("write failed: " + path.string());
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) fail_data("cannot write " + path.string());
    for (Eigen::Index r = 0; r < d.rows(); ++r)
        for (Eigen::Index c = 0; c < d.cols(); ++c) {
            auto bits = std::bit_cast<std::uint64_t>(d(r, c));
            if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
            out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
        }
    nlohmann::json meta = {{"rows", d.rows()}, {"cols", d.cols()}, {"names", ts.names()}};
    std::ofstream side(raw_sidecar_path(path));
    side << meta.dump() << '\n';
    if (!out || !side) fail_data("write failed: " + path.string());
}

SegmentSet segment(const TimeSeriesMatrix& ts, std::size_t window_length, std::size_t discard_prefix) {
    if (window_length == 0) fail_config("window length n must be positive");
    const std::size_t total = ts.sample_count();
    const std::size_t usable = total > discard_prefix ? total - discard_prefix : 0;
    const std::size_t m = usable / window_length;
    if (m < 2) {
        fail_data("insufficient samples: N=" + std::to_string(total) + ", discard=" + std::to_string(discard_prefix) +
                  ", n=" + std::to_string(window_length) + " gives m=" + std::to_string(m) + " < 2 segments");
    }
    SegmentSet out;
    out.window_length = window_length;
    out.discarded_prefix = discard_prefix;
    out.dropped_tail = usable - m * window_length;
    out.segments.reserve(m);
    const auto n = static_cast<Eigen::Index>(window_length);
    for (std::size_t j = 0; j < m; ++j) {
        out.segments.emplace_back(ts.data().middleRows(static_cast<Eigen::Index>(discard_prefix + j * window_length), n));
    }
    if (out.dropped_tail > 0) {
        warn("segment: dropping " + std::to_string(out.dropped_tail) + " trailing samples beyond m*n = " +
             std::to_string(m * window_length));
    }
    return out;
}

std::string to_string(ScreeningMode mode) {
    return mode == ScreeningMode::Correlation ? "correlation" : "partial-correlation";
}

ScreeningMode parse_screening_mode(const std::string& name) {
    if (name == "correlation" || name == "R") return ScreeningMode::Correlation;
    if (name == "partial-correlation" || name == "partial" || name == "P") return ScreeningMode::PartialCorrelation;
    fail_config("unknown screening mode '" + name + "' (expected correlation or partial-correlation)");
}

void ScreeningConfig::validate() const {
    if (window_length == 0) fail_config("window length n must be positive");
    if (delta < 1) fail_config("delta must be >= 1");
    if (rho && !(*rho >= 0.0 && *rho <= 1.0)) fail_config("rho must lie in [0,1]");
    if (!(J > 0.0) || !std::isfinite(J)) fail_config("J must be a positive finite number");
}

}  // namespace specscreen
