#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "onecomp/errors.hpp"
#include "onecomp/render.hpp"
#include "onecomp/report.hpp"

namespace fs = std::filesystem;
using onecomp::Json;

namespace {

std::filesystem::path default_out_dir() {
    if (const char* env = std::getenv("ONECOMP_OUT_DIR")) return env;
    return "out";
}

std::vector<double> parse_eta_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &pos);
        } catch (const std::exception&) {
            throw onecomp::ValidationError("bad eta value '" + tok + "'");
        }
        if (pos != tok.size())
            throw onecomp::ValidationError("bad eta value '" + tok + "'");
        if (!(v > 0.0 && v < 1.0))
            throw onecomp::ValidationError("eta must lie in (0, 1), got '" + tok +
                                           "'");
        out.push_back(v);
    }
    if (out.empty())
        throw onecomp::ValidationError("--eta needs at least one value");
    return out;
}

struct CommonFlags {
    int grid_levels = 4;
    double r_max = 0.9999;
    long budget = 512;
    double tol = 0.02;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--grid-levels", grid_levels,
                        "Refinement levels for connectivity analysis")
            ->capture_default_str()
            ->check(CLI::Range(1, 8));
        cmd->add_option("--r-max", r_max,
                        "Outer sampling radius cap (schedule entries are "
                        "clamped to it)")
            ->capture_default_str()
            ->check(CLI::Range(0.1, 0.9999999));
        cmd->add_option("--budget", budget,
                        "Sample budget for the boundary criterion scan")
            ->capture_default_str()
            ->check(CLI::Range(8L, 1000000L));
        cmd->add_option("--tol", tol, "Certified log-modulus tolerance")
            ->capture_default_str()
            ->check(CLI::Range(1e-9, 0.5));
    }

    onecomp::AnalyzeOptions analyze_options(const std::vector<double>& etas) const {
        onecomp::AnalyzeOptions opt;
        opt.etas = etas;
        opt.policy.levels = grid_levels;
        for (double& r : opt.policy.r_max_schedule) r = std::min(r, r_max);
        opt.policy.log_tol = tol;
        opt.scan_density = budget;
        return opt;
    }
};

void refresh_hash(Json& rep) {
    Json timing = rep.contains("timing") ? rep["timing"] : Json();
    rep.erase("timing");
    rep.erase("content_hash");
    rep["content_hash"] = onecomp::content_hash(rep.dump());
    rep["timing"] = timing;
}

int run_analyze(const std::string& spec_file, const std::string& eta_csv,
                fs::path out, const CommonFlags& flags, bool dump_grid) {
    const onecomp::InnerSpec u = onecomp::load_spec(spec_file);
    auto opt = flags.analyze_options(parse_eta_list(eta_csv));
    opt.dump_grid = dump_grid;
    if (out.empty()) out = default_out_dir() / "report.json";
    const Json rep = onecomp::analyze_report(u, opt);
    onecomp::write_file_atomic(out, onecomp::dump_report(rep));
    std::cout << out.string() << "\n";
    return 0;
}

int run_render(const std::string& spec_file, const std::string& eta_csv,
               const std::string& format, fs::path out, int width,
               const CommonFlags& flags) {
    const onecomp::InnerSpec u = onecomp::load_spec(spec_file);
    onecomp::RenderOptions opt;
    opt.etas = parse_eta_list(eta_csv);
    opt.width = width;
    opt.r_max = std::min(0.999, flags.r_max);
    opt.log_tol = flags.tol;
    if (out.empty()) out = default_out_dir() / ("render." + format);
    const std::string bytes = format == "svg" ? onecomp::render_svg(u, opt)
                                              : onecomp::render_ppm(u, opt);
    onecomp::write_file_atomic(out, bytes);
    std::cout << out.string() << "\n";
    return 0;
}

struct Experiment {
    std::string name;
    onecomp::InnerSpec spec;
    std::vector<double> etas;
    int levels = 4;
    bool threshold = false;
};

std::vector<Experiment> stock_experiments() {
    using onecomp::Complex;
    using onecomp::InnerSpec;
    using onecomp::ZeroSequence;

    std::vector<Experiment> xs;
    xs.push_back({"atomic", InnerSpec::atomic_s(), {0.5, 0.25}, 4, false});
    xs.push_back({"atomic-square",
                  compose(InnerSpec::atomic_s(),
                          InnerSpec::finite_blaschke(
                              {Complex(0, 0), Complex(0, 0)})),
                  {0.45, 0.3},
                  4,
                  true});
    xs.push_back({"blaschke-pair",
                  InnerSpec::finite_blaschke({Complex(0.6, 0), Complex(-0.6, 0)}),
                  {0.6, 0.2},
                  4,
                  false});
    xs.push_back({"geometric",
                  InnerSpec::infinite_blaschke(ZeroSequence::geometric(64)),
                  {0.5},
                  3,
                  false});
    xs.push_back({"power-2",
                  InnerSpec::infinite_blaschke(ZeroSequence::power(2.0, 10000)),
                  {0.5},
                  4,
                  false});
    xs.push_back({"hyperbolic-orbit",
                  InnerSpec::infinite_blaschke(ZeroSequence::hyperbolic_orbit(64)),
                  {0.5},
                  3,
                  false});
    xs.push_back({"parabolic-orbit",
                  InnerSpec::infinite_blaschke(ZeroSequence::parabolic_orbit(2000)),
                  {0.5},
                  2,
                  false});
    {
        std::vector<Complex> thin;
        for (int n = 2; n <= 6; ++n)
            thin.push_back(Complex(1.0 - std::pow(n, -double(n)), 0.0));
        xs.push_back({"thin-truncated", InnerSpec::finite_blaschke(thin),
                      {0.2, 0.033}, 4, false});
    }
    xs.push_back({"super-exponential",
                  InnerSpec::infinite_blaschke(ZeroSequence::super_exponential(64)),
                  {0.5},
                  3,
                  false});
    xs.push_back({"frostman-atomic",
                  frostman_shift(InnerSpec::atomic_s(), onecomp::DiskPoint(0.5, 0.0)),
                  {0.5},
                  3,
                  false});
    xs.push_back({"two-atoms",
                  InnerSpec::singular_atomic(
                      {{onecomp::BoundaryPoint(1.0, 0.0), 1.0},
                       {onecomp::BoundaryPoint(-1.0, 0.0), 1.0}}),
                  {0.5},
                  4,
                  false});
    return xs;
}

int run_paper_suite(fs::path out_dir, const CommonFlags& flags) {
    if (out_dir.empty()) out_dir = default_out_dir() / "paper-suite";
    fs::create_directories(out_dir);

    Json summary = Json::array();
    std::string table =
        "| experiment | verdicts | criterion | hash |\n"
        "|---|---|---|---|\n";

    for (const Experiment& x : stock_experiments()) {
        CommonFlags f = flags;
        f.grid_levels = std::min(flags.grid_levels, x.levels);
        auto opt = f.analyze_options(x.etas);
        Json rep = onecomp::analyze_report(x.spec, opt);

        if (x.threshold) {
            const onecomp::ThresholdBracket br =
                onecomp::threshold_search(x.spec, 0.02, opt.policy);
            Json probes = Json::array();
            for (const auto& [eta, v] : br.probes)
                probes.push_back(Json::array({eta, onecomp::to_string(v)}));
            const char* status =
                br.status == onecomp::ThresholdBracket::Status::Flipped
                    ? "flipped"
                    : (br.status ==
                               onecomp::ThresholdBracket::Status::AllConnected
                           ? "all_connected"
                           : "unresolved");
            rep["threshold_bracket"] = Json{{"status", status},
                                            {"lo", br.lo},
                                            {"hi", br.hi},
                                            {"probes", probes}};
            refresh_hash(rep);
        }

        const fs::path file = out_dir / (x.name + ".json");
        onecomp::write_file_atomic(file, onecomp::dump_report(rep));

        std::string verdict_cell;
        for (const auto& v : rep["verdicts"]) {
            if (!verdict_cell.empty()) verdict_cell += ", ";
            char buf[64];
            std::snprintf(buf, sizeof buf, "%g: %s", v["eta"].get<double>(),
                          v.contains("error")
                              ? "error"
                              : v["verdict"].get<std::string>().c_str());
            verdict_cell += buf;
        }
        const std::string crit =
            rep["criterion"].is_object() && rep["criterion"].contains("consistent")
                ? (rep["criterion"]["consistent"].get<bool>() ? "consistent"
                                                              : "inconsistent")
                : "n/a";
        const std::string hash = rep["content_hash"].get<std::string>();
        table += "| " + x.name + " | " + verdict_cell + " | " + crit + " | " +
                 hash + " |\n";
        summary.push_back(Json{{"name", x.name},
                               {"file", x.name + ".json"},
                               {"content_hash", hash}});
        std::cout << x.name << ": " << verdict_cell << "\n";
    }

    onecomp::write_file_atomic(out_dir / "summary.md", table);
    onecomp::write_file_atomic(out_dir / "summary.json",
                               onecomp::dump_report(summary));
    std::cout << out_dir.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Sublevel-set connectivity and boundary analysis for inner functions "
        "on the unit disk.\nDefault output directory: $ONECOMP_OUT_DIR "
        "(falls back to ./out)."};
    app.require_subcommand(1);

    std::string spec_file, eta_csv = "0.5", format = "ppm", out;
    int width = 800;
    bool dump_grid = false;
    CommonFlags flags;

    CLI::App* analyze =
        app.add_subcommand("analyze", "Write a JSON analysis report");
    analyze->add_option("--spec", spec_file, "Spec JSON file")->required();
    analyze->add_option("--eta", eta_csv, "Comma-separated thresholds in (0,1)")
        ->capture_default_str();
    analyze->add_option("--out", out, "Output path (default: <outdir>/report.json)");
    analyze->add_flag("--dump-grid", dump_grid,
                      "Include run-length component maps in the report");
    flags.add_to(analyze);

    CLI::App* render = app.add_subcommand("render", "Raster or vector picture");
    render->add_option("--spec", spec_file, "Spec JSON file")->required();
    render->add_option("--eta", eta_csv, "Comma-separated thresholds in (0,1)")
        ->capture_default_str();
    render->add_option("--format", format, "ppm or svg")
        ->capture_default_str()
        ->check(CLI::IsMember({"ppm", "svg"}));
    render->add_option("--out", out, "Output path (default: <outdir>/render.<fmt>)");
    render->add_option("--width", width, "Image width in pixels")
        ->capture_default_str()
        ->check(CLI::Range(16, 8192));
    CommonFlags render_flags;
    render_flags.add_to(render);

    CLI::App* suite = app.add_subcommand(
        "paper-suite", "Run the stock experiment collection into a directory");
    suite->add_option("--out", out, "Output directory (default: <outdir>/paper-suite)");
    CommonFlags suite_flags;
    suite_flags.add_to(suite);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (analyze->parsed())
            return run_analyze(spec_file, eta_csv, out, flags, dump_grid);
        if (render->parsed())
            return run_render(spec_file, eta_csv, format, out, width, render_flags);
        return run_paper_suite(out, suite_flags);
    } catch (const onecomp::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const onecomp::EtaOutOfRange& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const onecomp::UnsupportedSpec& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const onecomp::NotRadial& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
