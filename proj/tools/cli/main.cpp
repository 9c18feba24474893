#include "manifest.hpp"

#include "specscreen/aggregate.hpp"
#include "specscreen/corrcore.hpp"
#include "specscreen/error.hpp"
#include "specscreen/log.hpp"
#include "specscreen/pipeline.hpp"
#include "specscreen/report.hpp"
#include "specscreen/screen.hpp"
#include "specscreen/spectral.hpp"
#include "specscreen/synth.hpp"
#include "specscreen/theory.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace specscreen;
using namespace specscreen::cli;
using nlohmann::json;

namespace {

std::string num(double v) {
    if (std::isnan(v)) return "NA";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

double parse_double(const std::string& s, const std::string& what) {
    const std::string t = trim(s);
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(v))
        fail_config("bad number '" + s + "' in " + what);
    return v;
}

/// "a,b,c" or "start:stop:step" (inclusive of stop up to rounding).
std::vector<double> parse_grid(const std::string& text, const std::string& what) {
    std::vector<double> out;
    if (trim(text).empty()) return out;
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(text);
        for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
        if (parts.size() != 3) fail_config(what + " range must be start:stop:step");
        const double start = parse_double(parts[0], what), stop = parse_double(parts[1], what),
                     step = parse_double(parts[2], what);
        if (!(step > 0.0) || stop < start) fail_config(what + " range needs step > 0 and stop >= start");
        const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
        for (long i = 0; i <= count; ++i) out.push_back(start + static_cast<double>(i) * step);
        return out;
    }
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) out.push_back(parse_double(item, what));
    return out;
}

std::vector<std::size_t> parse_counts(const std::string& text, const std::string& what) {
    std::vector<std::size_t> out;
    for (double v : parse_grid(text, what)) {
        if (v < 0 || v != std::floor(v)) fail_config(what + " must hold nonnegative integers");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

void set_threads(int threads) {
    if (threads <= 0) {
        if (const char* env = std::getenv("SPECSCREEN_THREADS")) {
            try {
                threads = std::stoi(env);
            } catch (const std::exception&) {
                fail_config(std::string("SPECSCREEN_THREADS must be an integer, got '") + env + "'");
            }
            if (threads <= 0) fail_config("SPECSCREEN_THREADS must be positive");
        }
    }
    if (threads > 0) omp_set_num_threads(threads);
}

json with_run_id(const std::string& run_id, json body) {
    body["run_id"] = run_id;
    return body;
}

// ---------------------------------------------------------------------------

struct ScreenOptions {
    std::string input;
    std::string format = "csv";
    std::size_t n = 100;
    std::size_t delta = 1;
    std::string rho = "auto";
    double alpha = 0.01;
    std::string mode = "correlation";
    std::string frequencies = "all";
    std::string bins;
    std::size_t discard = 0;
    double J = 1.0;
    std::uint64_t seed = 0;
    std::size_t persistent_k = 0;
    bool edges = false;
};

void write_graph_exports(RunRecord& rec, const TimeSeriesMatrix& ts, const ScreeningConfig& config,
                         const ScreeningRun& run) {
    const auto segs = segment(ts, config.window_length, config.discard_prefix);
    const auto spectra = spectral_samples(segs);
    for (const auto& r : run.reports) {
        UScoreMatrix u = uscores(spectra.bins[r.bin]);
        if (config.mode == ScreeningMode::PartialCorrelation) u = uscores_partial(u);
        const auto g = threshold_graph(u.gram(), run.rho);
        std::ostringstream edges, degrees;
        write_edges_csv(g, edges);
        write_degrees_csv(g, degrees);
        rec.write_output("graphs/edges_bin" + std::to_string(r.bin) + ".csv", edges.str());
        rec.write_output("graphs/degrees_bin" + std::to_string(r.bin) + ".csv", degrees.str());
    }
}

void cmd_screen(const ScreenOptions& o, RunRecord& rec) {
    ScreeningConfig config;
    config.window_length = o.n;
    config.delta = o.delta;
    config.mode = parse_screening_mode(o.mode);
    config.J = o.J;
    config.discard_prefix = o.discard;
    config.seed = o.seed;
    if (o.rho != "auto") config.rho = parse_double(o.rho, "--rho");
    if (!(o.alpha > 0.0 && o.alpha < 1.0)) fail_config("--alpha must lie in (0,1)");
    config.validate();

    std::vector<std::size_t> bins;
    if (!o.bins.empty()) {
        bins = parse_counts(o.bins, "--bins");
    } else if (o.frequencies != "all") {
        for (double f : parse_grid(o.frequencies, "--frequencies")) {
            if (f < 0.0 || f > 0.5) fail_config("--frequencies values must lie in [0, 0.5]");
            bins.push_back(nearest_bin(f, o.n));
        }
    }
    if (!o.bins.empty() && bins.empty()) fail_config("--bins is empty");

    rec.add_input(o.input);
    const TimeSeriesMatrix ts = load_series(o.input, parse_series_format(o.format));

    // Resolve an automatic threshold before fixing the run id so the manifest
    // records the value actually used.
    if (!config.rho) {
        const std::size_t m = (ts.sample_count() - std::min(ts.sample_count(), o.discard)) / o.n;
        if (m < 3) fail_data("too few segments for screening (m = " + std::to_string(m) + ")");
        config.rho = resolve_auto_threshold(ts.series_count(), m, o.delta, o.alpha, o.J);
    }
    json cfg = {{"input", fs::absolute(o.input).lexically_normal().string()},
                {"format", o.format},
                {"n", o.n},
                {"delta", o.delta},
                {"rho_requested", o.rho},
                {"rho", *config.rho},
                {"alpha", o.alpha},
                {"mode", to_string(config.mode)},
                {"frequencies", o.frequencies},
                {"bins", o.bins},
                {"discard", o.discard},
                {"J", o.J},
                {"seed", o.seed},
                {"persistent_k", o.persistent_k},
                {"edges", o.edges}};
    rec.set_config(cfg);

    const ScreeningRun run = screen_series(ts, config, bins);
    json reports = json::array();
    for (const auto& r : run.reports) reports.push_back(to_json(r));
    rec.write_output("hubs.json", with_run_id(rec.run_id(), {{"rho", run.rho},
                                                             {"rho_was_auto", o.rho == "auto"},
                                                             {"segment_count", run.segment_count},
                                                             {"reports", std::move(reports)}})
                                      .dump(1) +
                                      "\n");

    if (o.persistent_k > 0) {
        const std::size_t p = ts.series_count();
        if (o.persistent_k > run.reports.size())
            fail_config("--persistent-k exceeds the number of screened frequencies");
        std::vector<std::vector<double>> pv(p, std::vector<double>(run.reports.size(), 1.0));
        for (std::size_t b = 0; b < run.reports.size(); ++b)
            for (const auto& v : run.reports[b].vertices) pv[v.vertex][b] = v.pvalue;
        json agg = json::array();
        for (std::size_t j = 0; j < p; ++j)
            agg.push_back(to_json(aggregate(FrequencyPValueVector{ts.names()[j], pv[j]}, o.persistent_k)));
        json used_bins = json::array();
        for (const auto& r : run.reports) used_bins.push_back(r.bin);
        rec.write_output("aggregate.json",
                         with_run_id(rec.run_id(), {{"K", o.persistent_k}, {"bins", used_bins}, {"vertices", agg}})
                                 .dump(1) +
                             "\n");
    }
    if (o.edges) write_graph_exports(rec, ts, config, run);

    for (const auto& r : run.reports) {
        const auto hubs = r.hubs();
        std::cout << "f=" << num(r.frequency) << " bin " << r.bin << ": " << hubs.size() << " hub(s)";
        for (std::size_t i = 0; i < hubs.size() && i < 10; ++i) std::cout << (i ? ", " : " ") << ts.names()[hubs[i]];
        if (hubs.size() > 10) std::cout << ", ...";
        std::cout << '\n';
    }
    std::cout << "rho = " << num(run.rho) << (o.rho == "auto" ? " (auto)" : "") << ", m = " << run.segment_count
              << '\n';
}

// ---------------------------------------------------------------------------

struct SweepOptions {
    std::size_t p = 1000;
    std::string m_list = "2000,1000,500,100,50,20,10,6,4";
    std::string rho_grid = "0:1:0.005";
    std::size_t delta = 1;
    std::size_t trials = 20;
    std::uint64_t seed = 1;
};

void cmd_sweep(const SweepOptions& o, RunRecord& rec) {
    const auto ms = parse_counts(o.m_list, "--m-list");
    const auto grid = parse_grid(o.rho_grid, "--rho-grid");
    if (grid.empty()) fail_config("--rho-grid is empty");
    if (ms.empty()) fail_config("--m-list is empty");
    rec.set_config({{"p", o.p},
                    {"m_list", o.m_list},
                    {"rho_grid", o.rho_grid},
                    {"delta", o.delta},
                    {"trials", o.trials},
                    {"seed", o.seed}});
    const auto result = phase_transition_sweep(o.p, ms, grid, o.delta, o.trials, o.seed);
    std::ostringstream points, transitions;
    result.write_csv(points);
    result.write_transitions_csv(transitions);
    rec.write_output("sweep.csv", points.str());
    rec.write_output("transitions.csv", transitions.str());

    json t = json::array();
    for (const auto& tr : result.transitions) {
        auto finite = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
        t.push_back({{"m", tr.m},
                     {"midpoint", finite(tr.midpoint)},
                     {"lower_99", finite(tr.lower)},
                     {"upper_01", finite(tr.upper)},
                     {"width", finite(tr.width())}});
    }
    rec.write_output("sweep.json", with_run_id(rec.run_id(), {{"p", o.p},
                                                              {"delta", o.delta},
                                                              {"trials", o.trials},
                                                              {"seed", o.seed},
                                                              {"transitions", t}})
                                           .dump(1) +
                                       "\n");
    std::cout << "m      midpoint  width\n";
    for (const auto& tr : result.transitions)
        std::cout << std::left << std::setw(7) << tr.m << std::setw(10) << num(std::round(tr.midpoint * 1e4) / 1e4)
                  << num(std::round(tr.width() * 1e4) / 1e4) << '\n';
}

// ---------------------------------------------------------------------------

struct TablesOptions {
    std::size_t trials = 1000;
    std::uint64_t seed = 20140101;
};

void cmd_tables(const TablesOptions& o, RunRecord& rec) {
    rec.set_config({{"trials", o.trials}, {"seed", o.seed}});
    const std::size_t p = 1000;

    const std::map<std::size_t, double> reference_rho = {{4, 0.99},   {6, 0.94},   {10, 0.78},   {20, 0.56},   {50, 0.36},
                                                  {100, 0.24}, {500, 0.11}, {1000, 0.08}, {2000, 0.06}};
    std::ostringstream t1;
    t1 << "m,reference,closed_form,closed_form_valid,numeric\n";
    json j1 = json::array();
    std::cout << "Critical threshold, p=1000, delta=1\n"
              << "m      ref    closed   numeric\n";
    for (const auto& [m, ref] : reference_rho) {
        const auto closed = try_critical_threshold_closed(p, m, 1);
        const double numeric = critical_threshold_numeric(p, m, 1);
        t1 << m << ',' << num(ref) << ',' << (closed ? num(*closed) : "NA") << ',' << (closed ? "true" : "false")
           << ',' << num(numeric) << '\n';
        j1.push_back({{"m", m},
                      {"reference", ref},
                      {"closed_form", closed ? json(*closed) : json(nullptr)},
                      {"closed_form_valid", closed.has_value()},
                      {"numeric", numeric}});
        std::ostringstream line;
        line << std::left << std::setw(7) << m << std::setw(7) << num(ref) << std::setw(9)
             << (closed ? num(std::round(*closed * 1e4) / 1e4) : "invalid") << num(std::round(numeric * 1e4) / 1e4);
        std::cout << line.str() << '\n';
    }

    const double ref_emp[] = {284, 45, 5, 0};
    const double ref_pred[] = {335, 56, 6, 0};
    std::vector<HubCountEstimate> emp;
    if (o.trials >= 2) emp = monte_carlo_hub_counts(p, 100, 0.28, std::vector<std::size_t>{1, 2, 3, 4}, o.trials, o.seed);
    std::ostringstream t2;
    t2 << "delta,ref_empirical,empirical_mean,empirical_stderr,ref_predicted,predicted\n";
    json j2 = json::array();
    std::cout << "\nMean hub count, p=1000, m=100, rho=0.28\n"
              << "delta  empirical          predicted\n";
    for (std::size_t d = 1; d <= 4; ++d) {
        const double pred = mean_hub_count({p, 100, d, 0.28, 1.0});
        const double mean = emp.empty() ? NAN : emp[d - 1].mean;
        const double se = emp.empty() ? NAN : emp[d - 1].stderr_;
        t2 << d << ',' << num(ref_emp[d - 1]) << ',' << num(mean) << ',' << num(se) << ','
           << num(ref_pred[d - 1]) << ',' << num(pred) << '\n';
        auto finite = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
        j2.push_back({{"delta", d},
                      {"empirical_mean", finite(mean)},
                      {"empirical_stderr", finite(se)},
                      {"predicted", pred},
                      {"ref_empirical", ref_emp[d - 1]},
                      {"ref_predicted", ref_pred[d - 1]}});
        std::ostringstream line;
        line << std::left << std::setw(7) << d << std::setw(19)
             << (emp.empty() ? std::string("skipped") : num(std::round(mean * 100) / 100) + " +- " + num(std::round(se * 100) / 100))
             << num(std::round(pred * 100) / 100);
        std::cout << line.str() << '\n';
    }
    rec.write_output("critical_threshold.csv", t1.str());
    rec.write_output("hub_counts.csv", t2.str());
    rec.write_output("tables.json",
                     with_run_id(rec.run_id(), {{"critical_threshold", j1}, {"hub_counts", j2}, {"trials", o.trials}}).dump(1) + "\n");
}

// ---------------------------------------------------------------------------

struct IndependenceOptions {
    double phi = 0.9;
    double sigma = 1.0;
    std::string n_grid = "10:250:10";
    std::size_t trials = 50000;
    std::size_t burn_in = 200;
    std::size_t k = 1;
    std::size_t l = 2;
    std::uint64_t seed = 6;
};

void cmd_validate_independence(const IndependenceOptions& o, RunRecord& rec) {
    const auto ns = parse_counts(o.n_grid, "--n-grid");
    if (ns.empty()) fail_config("--n-grid is empty");
    rec.set_config({{"phi", o.phi},
                    {"sigma", o.sigma},
                    {"n_grid", o.n_grid},
                    {"trials", o.trials},
                    {"burn_in", o.burn_in},
                    {"k", o.k},
                    {"l", o.l},
                    {"seed", o.seed}});
    const std::size_t horizon = *std::max_element(ns.begin(), ns.end());
    const auto diag = ar1_diagnostics(o.phi, o.sigma, horizon);
    const auto gen = ar1_generator(o.phi, o.sigma, o.burn_in);

    std::ostringstream csv;
    csv << "n,err,avg,empirical_cor_magnitude,bound_10_over_n\n";
    bool all_within = true;
    for (std::size_t n : ns) {
        if (n < 2 || o.k >= n || o.l >= n) {
            warn("n=" + std::to_string(n) + " skipped: bins " + std::to_string(o.k) + " and " + std::to_string(o.l) +
                 " are not distinct DFT bins of that window");
            continue;
        }
        const double c = std::abs(empirical_cross_frequency_correlation(gen, o.k, o.l, n, o.trials, o.seed + n));
        const double bound = 10.0 / static_cast<double>(n);
        all_within = all_within && c <= bound;
        csv << n << ',' << num(diag.err[n]) << ',' << num(diag.avg[n]) << ',' << num(c) << ',' << num(bound) << '\n';
        std::cout << "n=" << n << " |cor|=" << num(std::round(c * 1e5) / 1e5) << " 10/n=" << num(bound) << '\n';
    }
    rec.write_output("independence.csv", csv.str());
    rec.write_output("independence.json",
                     with_run_id(rec.run_id(), {{"all_within_10_over_n", all_within}}).dump(1) + "\n");
}

// ---------------------------------------------------------------------------

struct BandpassOptions {
    BandpassSpec spec;
    std::string format = "csv";
    std::uint64_t seed = 53;
};

void cmd_generate_bandpass(const BandpassOptions& o, RunRecord& rec) {
    const SeriesFormat format = parse_series_format(o.format);
    const auto& s = o.spec;
    rec.set_config({{"series_count", s.series_count},
                    {"filter_count", s.filter_count},
                    {"spacing", s.spacing},
                    {"mirror_offset", s.mirror_offset},
                    {"sample_count", s.sample_count},
                    {"discard_prefix", s.discard_prefix},
                    {"taps", s.taps},
                    {"noise_sigma", s.noise_sigma},
                    {"source_sigma", s.source_sigma},
                    {"format", o.format},
                    {"seed", o.seed}});
    const auto ts = gen_bandpass_ensemble(s, o.seed);
    const std::string name = format == SeriesFormat::Csv ? "series.csv" : "series.f64";
    // Serialize through a temporary path so the bytes can be digested.
    const fs::path tmp = rec.out_dir() / (".tmp_" + name);
    save_series(ts, tmp, format);
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    rec.write_output(name, slurp(tmp));
    fs::remove(tmp);
    if (format == SeriesFormat::RawF64) {
        rec.write_output(name + ".json", with_run_id(rec.run_id(), json::parse(slurp(raw_sidecar_path(tmp)))).dump());
        fs::remove(raw_sidecar_path(tmp));
    }
    std::cout << "wrote " << (rec.out_dir() / name).string() << " (" << ts.sample_count() << " x " << ts.series_count()
              << ")\n";
}

// ---------------------------------------------------------------------------

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Config: return 2;
        case ErrorKind::Data: return 3;
        case ErrorKind::Numeric: return 4;
    }
    return 3;
}

int run(std::vector<std::string> args);

int cmd_replay(const std::string& from, const std::string& out) {
    const json manifest = read_manifest(from);
    for (const auto& in : manifest.at("inputs")) {
        const std::string path = in.at("path").get<std::string>();
        if (!fs::exists(path) || sha256_file(path) != in.at("sha256").get<std::string>())
            fail_data("input " + path + " changed since the recorded run");
    }
    std::vector<std::string> args = manifest.at("argv").get<std::vector<std::string>>();
    const std::string new_out = fs::absolute(out).lexically_normal().string();
    bool replaced = false;
    for (std::size_t i = 0; i + 1 < args.size(); ++i)
        if (args[i] == "--out") {
            args[i + 1] = new_out;
            replaced = true;
        }
    if (!replaced) fail_data("manifest argv has no --out");
    const fs::path cwd = fs::current_path();
    fs::current_path(manifest.at("cwd").get<std::string>());
    const int rc = run(args);
    fs::current_path(cwd);
    if (rc != 0) return rc;

    const json fresh = read_manifest(new_out);
    std::map<std::string, std::string> before, after;
    for (const auto& o : manifest.at("outputs")) before[o.at("path")] = o.at("sha256");
    for (const auto& o : fresh.at("outputs")) after[o.at("path")] = o.at("sha256");
    if (before != after || manifest.at("run_id") != fresh.at("run_id")) {
        std::cerr << "replay differs from the recorded run\n";
        return 3;
    }
    std::cout << "replay reproduced " << before.size() << " output(s) bit-identically\n";
    return 0;
}

int run(std::vector<std::string> args) {
    CLI::App app{"Correlation hub screening in the spectral domain"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "Worker threads (default: SPECSCREEN_THREADS or all cores)");

    std::string out = "out";
    auto add_out = [&](CLI::App* sub) { sub->add_option("--out", out, "Output directory")->capture_default_str(); };

    ScreenOptions so;
    auto* screen = app.add_subcommand("screen", "Screen every frequency bin of a multichannel series for hubs");
    screen->add_option("input", so.input, "Input file")->required();
    screen->add_option("--format", so.format, "csv or raw-f64")->capture_default_str();
    screen->add_option("--n", so.n, "Window length")->capture_default_str();
    screen->add_option("--delta", so.delta, "Hub degree threshold")->capture_default_str();
    screen->add_option("--rho", so.rho, "Correlation threshold in [0,1] or 'auto'")->capture_default_str();
    screen->add_option("--alpha", so.alpha, "False positive target used by --rho auto")->capture_default_str();
    screen->add_option("--mode", so.mode, "correlation or partial-correlation")->capture_default_str();
    screen->add_option("--frequencies", so.frequencies, "'all' or frequencies in [0,0.5]")->capture_default_str();
    screen->add_option("--bins", so.bins, "Explicit DFT bins (overrides --frequencies)");
    screen->add_option("--discard", so.discard, "Leading samples to drop")->capture_default_str();
    screen->add_option("--J", so.J, "Dependency coefficient J")->capture_default_str();
    screen->add_option("--seed", so.seed, "Seed recorded in the manifest")->capture_default_str();
    screen->add_option("--persistent-k", so.persistent_k, "Also aggregate p-values across bins with this K");
    screen->add_flag("--edges", so.edges, "Write edge and degree CSVs per bin");
    add_out(screen);

    SweepOptions sw;
    auto* sweep = app.add_subcommand("sweep", "Mean hub counts over an (m, rho) grid under the i.i.d. null");
    sweep->add_option("--p", sw.p)->capture_default_str();
    sweep->add_option("--m-list", sw.m_list)->capture_default_str();
    sweep->add_option("--rho-grid", sw.rho_grid, "list or start:stop:step")->capture_default_str();
    sweep->add_option("--delta", sw.delta)->capture_default_str();
    sweep->add_option("--trials", sw.trials)->capture_default_str();
    sweep->add_option("--seed", sw.seed)->capture_default_str();
    add_out(sweep);

    TablesOptions to;
    auto* tables = app.add_subcommand("tables", "Critical threshold and mean hub count tables");
    tables->add_option("--trials", to.trials, "Monte-Carlo trials for the empirical column (0 skips)")
        ->capture_default_str();
    tables->add_option("--seed", to.seed)->capture_default_str();
    add_out(tables);

    IndependenceOptions io;
    auto* indep = app.add_subcommand("validate-independence", "Cross-frequency correlation of AR(1) DFT coefficients");
    indep->add_option("--phi", io.phi)->capture_default_str();
    indep->add_option("--sigma", io.sigma)->capture_default_str();
    indep->add_option("--n-grid", io.n_grid, "list or start:stop:step")->capture_default_str();
    indep->add_option("--trials", io.trials)->capture_default_str();
    indep->add_option("--burn-in", io.burn_in)->capture_default_str();
    indep->add_option("--k", io.k, "First DFT bin (0-based)")->capture_default_str();
    indep->add_option("--l", io.l, "Second DFT bin (0-based)")->capture_default_str();
    indep->add_option("--seed", io.seed)->capture_default_str();
    add_out(indep);

    BandpassOptions bo;
    auto* gen = app.add_subcommand("generate-bandpass", "Write the shared-source band-pass ensemble");
    gen->add_option("--p", bo.spec.series_count)->capture_default_str();
    gen->add_option("--filters", bo.spec.filter_count)->capture_default_str();
    gen->add_option("--spacing", bo.spec.spacing)->capture_default_str();
    gen->add_option("--mirror-offset", bo.spec.mirror_offset)->capture_default_str();
    gen->add_option("--samples", bo.spec.sample_count)->capture_default_str();
    gen->add_option("--discard", bo.spec.discard_prefix, "Transient length (recorded, not removed)")
        ->capture_default_str();
    gen->add_option("--taps", bo.spec.taps)->capture_default_str();
    gen->add_option("--noise-sigma", bo.spec.noise_sigma)->capture_default_str();
    gen->add_option("--format", bo.format)->capture_default_str();
    gen->add_option("--seed", bo.seed)->capture_default_str();
    add_out(gen);

    std::string verify_dir;
    auto* verify = app.add_subcommand("verify", "Check an output directory against its manifest");
    verify->add_option("dir", verify_dir)->required();

    std::string replay_from;
    auto* replay = app.add_subcommand("replay", "Re-run a recorded command and compare outputs");
    replay->add_option("dir", replay_from, "Directory holding manifest.json")->required();
    add_out(replay);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    set_threads(threads);

    if (verify->parsed()) {
        const auto result = verify_directory(verify_dir);
        for (const auto& p : result.problems) std::cerr << p << '\n';
        if (result.ok) std::cout << "ok: " << verify_dir << " matches its manifest\n";
        return result.ok ? 0 : 3;
    }
    if (replay->parsed()) return cmd_replay(replay_from, out);

    CLI::App* sub = app.get_subcommands().front();
    RunRecord rec(sub->get_name(), args, out);
    if (screen->parsed()) cmd_screen(so, rec);
    if (sweep->parsed()) cmd_sweep(sw, rec);
    if (tables->parsed()) cmd_tables(to, rec);
    if (indep->parsed()) cmd_validate_independence(io, rec);
    if (gen->parsed()) cmd_generate_bandpass(bo, rec);
    rec.finish();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        return run(args);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
