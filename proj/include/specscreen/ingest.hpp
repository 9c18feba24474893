#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace specscreen {

/// Real-valued multichannel series: rows are time indices, columns are series.
class TimeSeriesMatrix {
public:
    /// Validates shape (N >= 2, p >= 2), finiteness and the name count.
    /// Empty `names` are replaced by X1..Xp.
    TimeSeriesMatrix(Eigen::MatrixXd data, std::vector<std::string> names = {});

    const Eigen::MatrixXd& data() const noexcept { return data_; }
    const std::vector<std::string>& names() const noexcept { return names_; }
    std::size_t sample_count() const noexcept { return static_cast<std::size_t>(data_.rows()); }
    std::size_t series_count() const noexcept { return static_cast<std::size_t>(data_.cols()); }

private:
    Eigen::MatrixXd data_;
    std::vector<std::string> names_;
};

/// m consecutive, non-overlapping windows of n samples each.
struct SegmentSet {
    std::vector<Eigen::MatrixXd> segments;  // each n x p
    std::size_t window_length = 0;
    std::size_t discarded_prefix = 0;
    std::size_t dropped_tail = 0;

    std::size_t segment_count() const noexcept { return segments.size(); }
    std::size_t series_count() const noexcept {
        return segments.empty() ? 0 : static_cast<std::size_t>(segments.front().cols());
    }
};

enum class SeriesFormat { Csv, RawF64 };

SeriesFormat parse_series_format(const std::string& name);

/// Reads a CSV (header row required) or a raw little-endian f64 file with a
/// JSON sidecar at `<path>.json`.
TimeSeriesMatrix load_series(const std::filesystem::path& path, SeriesFormat format);

/// Writes in a form `load_series` reads back bit-identically.
void save_series(const TimeSeriesMatrix& ts, const std::filesystem::path& path, SeriesFormat format);

std::filesystem::path raw_sidecar_path(const std::filesystem::path& path);

/// Splits rows [discard_prefix, discard_prefix + m*n) into m = floor((N - discard_prefix)/n)
/// windows. Remainder rows are dropped with a warning. Requires m >= 2.
SegmentSet segment(const TimeSeriesMatrix& ts, std::size_t window_length, std::size_t discard_prefix = 0);

enum class ScreeningMode { Correlation, PartialCorrelation };

std::string to_string(ScreeningMode mode);
ScreeningMode parse_screening_mode(const std::string& name);

struct ScreeningConfig {
    std::size_t window_length = 100;
    std::size_t delta = 1;
    std::optional<double> rho;  ///< empty = resolve automatically
    ScreeningMode mode = ScreeningMode::Correlation;
    double J = 1.0;
    std::size_t discard_prefix = 0;
    std::uint64_t seed = 0;

    void validate() const;
};

}  // namespace specscreen
