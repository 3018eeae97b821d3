// frust — frustration/transitivity hierarchy analysis over windowed
// correlation matrices of market-index time series.
//
// Subcommands:
//   ingest-check   load, align and window the inputs; print a summary
//   analyze        full pipeline: matrices, signs, plaquettes, hierarchy,
//                  measure series, trends, reactions
//   demo-table1    the bundled 1987 worked example
//   report         rerun the post-correlation stages from saved matrix dumps
//
// Options may also come from a flat key=value config file (--config FILE);
// command-line flags win. Exit codes: 0 success, 2 validation error,
// 3 data error.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "frust/frust.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitData = 3;

std::vector<std::pair<std::string, std::string>> parse_sector_args(
    const std::vector<std::string>& args) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& a : args) {
        const auto eq = a.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == a.size())
            throw frust::ValidationError("--sectors entries must be ID=path, got '" + a + "'");
        out.emplace_back(a.substr(0, eq), a.substr(eq + 1));
    }
    return out;
}

frust::OutputFormat parse_format(const std::string& s) {
    if (s == "csv") return frust::OutputFormat::csv;
    if (s == "json") return frust::OutputFormat::json;
    return frust::OutputFormat::both;
}

struct CommonOpts {
    std::vector<std::string> sector_args;
    std::string config_path;
    std::size_t min_obs = 20;
    double zero_tol = 0.0;
    double eps_frac = 0.10;
    double pick_frac = 0.25;
    std::string returns_mode = "levels";
    bool fill_forward = false;
    int fill_max_gap = 5;
    std::string out_dir;
    std::string format = "both";
};

void add_ingest_options(CLI::App& cmd, CommonOpts& o) {
    cmd.add_option("--sectors", o.sector_args, "Sector series as ID=path (repeat or list)")
        ->take_all();
    cmd.add_option("--config", o.config_path, "Flat key=value config file; flags win");
    cmd.add_option("--min-obs", o.min_obs, "Minimum observations per half-year window");
    cmd.add_option("--returns", o.returns_mode, "Correlate levels or log returns")
        ->check(CLI::IsMember({"levels", "log"}));
    cmd.add_flag("--fill-forward", o.fill_forward,
                 "Forward-fill gaps up to --max-gap-days before alignment");
    cmd.add_option("--max-gap-days", o.fill_max_gap, "Forward-fill cap in calendar days");
}

void add_analysis_options(CLI::App& cmd, CommonOpts& o) {
    cmd.add_option("--zero-tol", o.zero_tol, "|rho| at or below this carries no sign");
    cmd.add_option("--eps-frac", o.eps_frac, "Zero band as a fraction of series max magnitude");
    cmd.add_option("--pick-frac", o.pick_frac, "Pick threshold as a fraction of series max");
    cmd.add_option("--format", o.format, "Series export format")
        ->check(CLI::IsMember({"csv", "json", "both"}));
}

bool flag_given(const CLI::App& cmd, const std::string& name) {
    const CLI::Option* opt = cmd.get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
}

// Config file first, then every flag the user actually passed on top.
frust::RunConfig build_run_config(const CLI::App& cmd, const CommonOpts& o) {
    frust::RunConfig cfg;
    if (!o.config_path.empty()) frust::apply_config_file(cfg, o.config_path);
    if (flag_given(cmd, "--sectors")) cfg.sectors = parse_sector_args(o.sector_args);
    if (flag_given(cmd, "--min-obs")) cfg.min_obs = o.min_obs;
    if (flag_given(cmd, "--zero-tol")) cfg.zero_tol = o.zero_tol;
    if (flag_given(cmd, "--eps-frac")) cfg.eps_frac = o.eps_frac;
    if (flag_given(cmd, "--pick-frac")) cfg.pick_frac = o.pick_frac;
    if (flag_given(cmd, "--returns")) cfg.log_returns = o.returns_mode == "log";
    if (flag_given(cmd, "--fill-forward")) cfg.fill_forward = true;
    if (flag_given(cmd, "--max-gap-days")) cfg.fill_max_gap_days = o.fill_max_gap;
    if (flag_given(cmd, "--out")) cfg.out_dir = o.out_dir;
    if (flag_given(cmd, "--format")) cfg.format = parse_format(o.format);
    if (cfg.sectors.empty())
        throw frust::ValidationError("no sectors given (use --sectors or a config file)");
    return cfg;
}

int run_ingest_check(const CLI::App& cmd, const CommonOpts& o) {
    frust::RunConfig cfg = build_run_config(cmd, o);
    cfg.out_dir = "-"; // unused by this subcommand
    frust::validate(cfg);

    std::vector<frust::IndexSeries> series;
    for (const auto& [id, path] : cfg.sectors) series.push_back(frust::load_series(path, id));
    if (cfg.fill_forward) series = frust::forward_fill(series, cfg.fill_max_gap_days);

    frust::AlignedPanel panel = frust::align(series);
    if (cfg.log_returns) panel = frust::to_log_returns(panel);
    const frust::WindowPartition part = frust::partition_windows(panel, cfg.min_obs);

    for (const auto& sw : part.skipped)
        std::cerr << frust::json{{"warning", "skipped_window"},
                                 {"year", sw.window.year},
                                 {"half", sw.window.half},
                                 {"y", sw.window.y()},
                                 {"rows", sw.rows},
                                 {"reason", sw.reason}}
                         .dump()
                  << "\n";

    std::cout << "sectors:";
    for (const auto& s : panel.sectors) std::cout << " " << s;
    std::cout << "\nrows: " << panel.rows() << "  span: " << frust::to_string(panel.dates.front())
              << " .. " << frust::to_string(panel.dates.back()) << "\n";
    std::cout << "windows: " << part.windows.size() << " usable, " << part.skipped.size()
              << " skipped\n";
    for (const auto& wp : part.windows)
        std::cout << "  " << wp.window.tag() << "  rows=" << wp.panel.rows() << "\n";
    return kExitOk;
}

int run_analyze(const CLI::App& cmd, const CommonOpts& o) {
    const frust::RunConfig cfg = build_run_config(cmd, o);
    const frust::RunManifest mf = frust::run_pipeline(cfg, &std::cerr);
    std::cout << "windows: " << mf.window_tags.size()
              << "  artifacts: " << mf.artifacts.size() << "  out: " << cfg.out_dir << "\n";
    for (const auto& note : mf.notes) std::cout << "note: " << note << "\n";
    return kExitOk;
}

int run_report(const CommonOpts& o, const std::string& in_dir) {
    frust::AnalysisParams params{o.zero_tol, o.eps_frac, o.pick_frac, parse_format(o.format)};
    const frust::RunManifest mf = frust::report_from_matrices(in_dir, params, o.out_dir);
    std::cout << "windows: " << mf.window_tags.size()
              << "  artifacts: " << mf.artifacts.size() << "  out: " << o.out_dir << "\n";
    return kExitOk;
}

int run_demo(int half) {
    const frust::CorrelationMatrix cm = half == 1 ? frust::reference_matrix_1987h1()
                                                  : frust::reference_matrix_1987h2();
    std::cout << frust::emit_table1_demo(cm);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frustration/transitivity hierarchy over windowed correlation matrices"};
    app.require_subcommand(1);

    CommonOpts ingest_opts, analyze_opts, report_opts;
    int demo_half = 2;
    std::string report_in;

    CLI::App* ingest = app.add_subcommand("ingest-check", "Validate, align and window inputs");
    add_ingest_options(*ingest, ingest_opts);

    CLI::App* analyze = app.add_subcommand("analyze", "Run the full pipeline");
    add_ingest_options(*analyze, analyze_opts);
    add_analysis_options(*analyze, analyze_opts);
    analyze->add_option("--out", analyze_opts.out_dir, "Output directory");

    CLI::App* demo = app.add_subcommand("demo-table1", "Print the bundled 1987 worked example");
    demo->add_option("--half", demo_half, "Which 1987 half-year matrix to use")
        ->check(CLI::IsMember({1, 2}));

    CLI::App* report = app.add_subcommand("report", "Recompute reports from saved matrix dumps");
    report->add_option("--in", report_in, "Directory holding windows/corr_<tag>.csv")->required();
    report->add_option("--out", report_opts.out_dir, "Output directory")->required();
    add_analysis_options(*report, report_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (ingest->parsed()) return run_ingest_check(*ingest, ingest_opts);
        if (analyze->parsed()) return run_analyze(*analyze, analyze_opts);
        if (demo->parsed()) return run_demo(demo_half);
        if (report->parsed()) return run_report(report_opts, report_in);
    } catch (const frust::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const frust::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitValidation;
}
