#include "specscreen/pipeline.hpp"

#include "specscreen/aggregate.hpp"
#include "specscreen/corrcore.hpp"
#include "specscreen/error.hpp"
#include "specscreen/log.hpp"

#include <algorithm>
#include <exception>

namespace specscreen {

HubReport screen_bin(const Eigen::MatrixXcd& samples, std::size_t bin, double frequency, const ScreeningConfig& config,
                     double rho, const std::vector<std::string>& names) {
    UScoreMatrix u = uscores(samples);
    if (config.mode == ScreeningMode::PartialCorrelation) u = uscores_partial(u);
    HubReport report = assign_pvalues(u.gram(), config.delta, rho, static_cast<std::size_t>(samples.rows()), names);
    report.bin = bin;
    report.frequency = frequency;
    return report;
}

ScreeningRun screen_series(const TimeSeriesMatrix& ts, const ScreeningConfig& config, std::vector<std::size_t> bins) {
    config.validate();
    const SegmentSet segs = segment(ts, config.window_length, config.discard_prefix);
    const SpectralSampleSet spectra = spectral_samples(segs);
    const std::size_t m = segs.segment_count();
    const std::size_t p = ts.series_count();
    if (config.delta > p - 1) fail_config("delta must not exceed p-1");

    if (bins.empty()) bins = aggregation_bins(config.window_length);
    std::sort(bins.begin(), bins.end());
    bins.erase(std::unique(bins.begin(), bins.end()), bins.end());
    for (auto b : bins)
        if (b >= config.window_length) fail_config("frequency bin " + std::to_string(b) + " is not below n");

    ScreeningRun run;
    run.segment_count = m;
    run.rho_was_auto = !config.rho.has_value();
    run.rho = config.rho ? *config.rho : resolve_auto_threshold(p, m, config.delta, 0.01, config.J);
    run.reports.resize(bins.size());

    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(bins.size()); ++i) {
        try {
            const std::size_t b = bins[static_cast<std::size_t>(i)];
            run.reports[static_cast<std::size_t>(i)] =
                screen_bin(spectra.bins[b], b, spectra.frequency(b), config, run.rho, ts.names());
        } catch (...) {
#pragma omp critical(specscreen_pipeline_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    for (const auto& r : run.reports)
        for (const auto& w : r.warnings) warn("bin " + std::to_string(r.bin) + ": " + w);
    return run;
}

}  // namespace specscreen
