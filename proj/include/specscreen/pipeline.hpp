#pragma once

#include "specscreen/ingest.hpp"
#include "specscreen/spectral.hpp"
#include "specscreen/theory.hpp"

#include <cstddef>
#include <vector>

namespace specscreen {

struct ScreeningRun {
    std::size_t segment_count = 0;
    double rho = 0.0;  // resolved threshold
    bool rho_was_auto = false;
    std::vector<HubReport> reports;  // ascending bin
};

/// Segments, transforms and screens every requested bin. An empty `bins`
/// means the non-redundant bins 0..floor(n/2).
ScreeningRun screen_series(const TimeSeriesMatrix& ts, const ScreeningConfig& config,
                           std::vector<std::size_t> bins = {});

/// Screens one bin's m x p complex sample matrix.
HubReport screen_bin(const Eigen::MatrixXcd& samples, std::size_t bin, double frequency, const ScreeningConfig& config,
                     double rho, const std::vector<std::string>& names);

}  // namespace specscreen
