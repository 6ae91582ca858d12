#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "onecomp/render.hpp"
#include "onecomp/report.hpp"

using namespace onecomp;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

Json strip_timing(Json j) {
    j.erase("timing");
    return j;
}

}  // namespace

TEST_CASE("spec json round trips every node kind") {
    const InnerSpec u = multiply(
        {frostman_shift(
             compose(InnerSpec::atomic_s(),
                     InnerSpec::finite_blaschke({Complex(0, 0), Complex(0.5, -0.25)})),
             DiskPoint(0.3, 0.1)),
         InnerSpec::singular_atomic({{BoundaryPoint(-1.0, 0.0), 2.0},
                                     {BoundaryPoint(0.0, 1.0), 0.5}}),
         InnerSpec::infinite_blaschke(ZeroSequence::geometric(64)),
         InnerSpec::infinite_blaschke(ZeroSequence::power(2.0, 1000000)),
         InnerSpec::infinite_blaschke(ZeroSequence::explicit_list(
             {Complex(0.5, 0), Complex(0, 0.75)}))});
    const Json j = spec_to_json(u);
    const InnerSpec back = spec_from_json(j);
    CHECK(spec_to_json(back) == j);
    // round trip preserves evaluation exactly
    const Complex z(0.3, -0.2);
    CHECK(eval(u, z, 1e-4).value == eval(back, z, 1e-4).value);
}

TEST_CASE("spec json accepts the atomic sugar form and rejects junk") {
    const InnerSpec s = spec_from_json(Json{{"kind", "atomic_s"}});
    CHECK(eval(s, Complex(0, 0)).value.real() ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK_THROWS_AS(spec_from_json(Json{{"kind", "nope"}}), ValidationError);
    CHECK_THROWS_AS(spec_from_json(Json::object()), ValidationError);
    CHECK_THROWS_AS(
        spec_from_json(Json{{"kind", "finite_blaschke"},
                            {"zeros", Json::array({Json::array({1.5, 0.0})})}}),
        ValidationError);
    CHECK_THROWS_AS(load_spec("/nonexistent/spec.json"), ValidationError);
}

TEST_CASE("content hash is the fnv-1a reference function") {
    CHECK(content_hash("") == "cbf29ce484222325");
    CHECK(content_hash("a") == "af63dc4c8601ec8c");
    CHECK(content_hash("hello") != content_hash("hello "));
}

TEST_CASE("analysis reports are deterministic modulo timing") {
    AnalyzeOptions opt;
    opt.etas = {0.5};
    opt.policy.levels = 2;
    opt.policy.r_max_schedule = {0.9, 0.99};
    opt.policy.workers = 1;
    opt.scan_density = 64;
    const InnerSpec u = InnerSpec::atomic_s();
    const Json a = analyze_report(u, opt);
    const Json b = analyze_report(u, opt);
    CHECK(a.at("schema") == "sublevel-analysis/1");
    CHECK(a.at("content_hash") == b.at("content_hash"));
    CHECK(dump_report(strip_timing(a)) == dump_report(strip_timing(b)));
    // the hash covers everything except timing and itself
    Json c = strip_timing(a);
    c.erase("content_hash");
    CHECK(a.at("content_hash") == content_hash(c.dump()));

    REQUIRE(a.at("verdicts").size() == 1);
    CHECK(a.at("verdicts")[0].at("verdict") == "connected");
    CHECK(a.at("criterion").at("consistent") == true);
    CHECK(a.at("spectrum").at("points").size() == 1);
}

TEST_CASE("sequence constants appear for zero-sequence specs") {
    AnalyzeOptions opt;
    opt.etas = {0.5};
    opt.policy.levels = 1;
    opt.policy.r_max_schedule = {0.9};
    opt.policy.workers = 1;
    opt.scan_density = 32;
    const Json r = analyze_report(
        InnerSpec::infinite_blaschke(ZeroSequence::geometric(64)), opt);
    const Json& sc = r.at("sequence_constants");
    CHECK(sc.at("separation").at("value").get<double>() ==
          doctest::Approx(1.0 / 3.0));
    CHECK(sc.at("vhn_ratio").at("sup").get<double>() == 0.5);
    CHECK(sc.at("hoffman").at("epsilon").get<double>() > 0.0);
    // atomic specs have no sequence leaf
    AnalyzeOptions small = opt;
    const Json r2 = analyze_report(InnerSpec::atomic_s(), small);
    CHECK(r2.at("sequence_constants").is_null());
}

TEST_CASE("verdict json exposes runs only on request") {
    GridPolicy p;
    p.levels = 1;
    p.r_max_schedule = {0.9};
    p.workers = 1;
    const ConnectivityVerdict v = is_connected(InnerSpec::atomic_s(), 0.5, p);
    const Json plain = verdict_to_json(v);
    CHECK_FALSE(plain.contains("component_runs"));
    const Json full = verdict_to_json(v, true);
    REQUIRE(full.contains("component_runs"));
    CHECK(full.at("component_runs").size() > 0);
    CHECK(full.at("verdict") == "connected");
    CHECK(full.at("eta") == 0.5);
}

TEST_CASE("atomic file writes leave no partial output") {
    const fs::path dir = fs::temp_directory_path() / "onecomp-report-test";
    fs::create_directories(dir);
    const fs::path f = dir / "r.json";
    write_file_atomic(f, "{\"x\": 1}\n");
    CHECK(slurp(f) == "{\"x\": 1}\n");
    write_file_atomic(f, "{}\n");  // overwrite in place
    CHECK(slurp(f) == "{}\n");
    for (const auto& e : fs::directory_iterator(dir))
        CHECK(e.path().filename() == "r.json");  // no temp files left behind
    fs::remove_all(dir);
}

TEST_CASE("renders are deterministic and well-formed") {
    RenderOptions opt;
    opt.width = 64;
    opt.etas = {0.5, 0.25};
    opt.r_max = 0.99;
    opt.workers = 1;
    const InnerSpec s = InnerSpec::atomic_s();
    const std::string ppm = render_ppm(s, opt);
    CHECK(ppm.substr(0, 2) == "P6");
    CHECK(ppm.size() > 64u * 64u * 3u);
    CHECK(render_ppm(s, opt) == ppm);

    const std::string svg = render_svg(s, opt);
    CHECK(svg.substr(0, 4) == "<svg");
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(render_svg(s, opt) == svg);

    // worker count must not affect the image
    RenderOptions opt8 = opt;
    opt8.workers = 8;
    CHECK(render_ppm(s, opt8) == ppm);
}
