#include "onecomp/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>

#include "onecomp/errors.hpp"
#include "onecomp/zero_sequence.hpp"

namespace onecomp {

namespace {

Json cplx(Complex z) { return Json::array({z.real(), z.imag()}); }

// nlohmann maps non-finite doubles to null; keep the sign information.
Json json_num(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
    return v;
}

Complex parse_cplx(const Json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ValidationError(std::string(what) + ": expected [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

const char* generator_name(GeneratorKind k) {
    switch (k) {
        case GeneratorKind::Geometric: return "geometric";
        case GeneratorKind::Power: return "power";
        case GeneratorKind::HyperbolicOrbit: return "hyperbolic_orbit";
        case GeneratorKind::ParabolicOrbit: return "parabolic_orbit";
        case GeneratorKind::InterleavedThin: return "interleaved_thin";
        case GeneratorKind::SuperExponential: return "super_exponential";
        default: return "explicit";
    }
}

ZeroSequence parse_sequence(const Json& j) {
    const std::string gen = j.value("generator", std::string());
    const long budget = j.value("budget", 0L);
    auto pick = [&](long dflt) { return budget > 0 ? budget : dflt; };
    if (gen == "geometric") return ZeroSequence::geometric(pick(64));
    if (gen == "power") {
        if (!j.contains("p") || !j["p"].is_number())
            throw ValidationError("power generator needs a numeric exponent p");
        return ZeroSequence::power(j["p"].get<double>(), pick(10000));
    }
    if (gen == "hyperbolic_orbit") return ZeroSequence::hyperbolic_orbit(pick(64));
    if (gen == "parabolic_orbit") return ZeroSequence::parabolic_orbit(pick(10000));
    if (gen == "interleaved_thin") return ZeroSequence::interleaved_thin(pick(64));
    if (gen == "super_exponential") return ZeroSequence::super_exponential(pick(64));
    if (gen == "explicit") {
        std::vector<Complex> zeros;
        for (const auto& z : j.value("zeros", Json::array()))
            zeros.push_back(parse_cplx(z, "explicit zeros"));
        return ZeroSequence::explicit_list(std::move(zeros));
    }
    throw ValidationError("unknown sequence generator '" + gen + "'");
}

const InfiniteBlaschkeLeaf* find_sequence_leaf(const InnerSpec& u) {
    return std::visit(
        [](const auto& n) -> const InfiniteBlaschkeLeaf* {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, InfiniteBlaschkeLeaf>) {
                return &n;
            } else if constexpr (std::is_same_v<T, ProductNode>) {
                for (const InnerSpec& f : n.factors)
                    if (const auto* leaf = find_sequence_leaf(f)) return leaf;
                return nullptr;
            } else if constexpr (std::is_same_v<T, ComposeNode>) {
                if (const auto* leaf = find_sequence_leaf(*n.outer)) return leaf;
                return find_sequence_leaf(*n.inner);
            } else if constexpr (std::is_same_v<T, FrostmanShiftNode>) {
                return find_sequence_leaf(*n.base);
            } else {
                return nullptr;
            }
        },
        u.node());
}

double now_seconds() {
    using namespace std::chrono;
    return duration<double>(steady_clock::now().time_since_epoch()).count();
}

Json sequence_constants(const ZeroSequence& seq) {
    Json out;
    const long N = seq.budget();
    out["generator"] = generator_name(seq.kind());
    out["budget"] = N;

    const BlaschkeSum bs = blaschke_sum(seq, N);
    out["blaschke_sum"] = {{"partial", bs.partial}, {"tail_bound", bs.tail_bound}};

    Json rho = Json::array();
    for (long n = 1; n < std::min<long>(N, 9); ++n)
        rho.push_back(consecutive_rho(seq, n));
    out["consecutive_rho"] = rho;

    const long n_sep = std::min<long>(N, 200);
    const double delta_sep = separation_constant(seq, n_sep);
    out["separation"] = {{"value", delta_sep}, {"over_first", n_sep}};
    out["eta_star"] = eta_star(seq, std::min<long>(N, 60));

    try {
        const VhnRatio v = vhn_ratio(seq, std::min<long>(N, 500));
        out["vhn_ratio"] = {{"sup", v.sup}, {"trending_to_one", v.trending_to_one}};
    } catch (const NotRadial&) {
        out["vhn_ratio"] = nullptr;
    }

    double delta = 1.0;
    const long trunc = std::min<long>(N, 200);
    for (long n = 1; n <= std::min<long>(N, 30); ++n)
        delta = std::min(delta, interp_delta_n(seq, n, trunc));
    out["interp_delta"] = {{"value", delta}, {"over_first", std::min<long>(N, 30)}};
    if (delta > 1e-9 && delta < 1.0) {
        const HoffmanConstants h = hoffman_constants(delta);
        out["hoffman"] = {{"delta", h.delta}, {"eta", h.eta}, {"epsilon", h.epsilon}};
    } else {
        out["hoffman"] = nullptr;
    }

    Json frostman = Json::array();
    for (const Complex& c : seq.cluster_points()) {
        const FrostmanSum fs =
            frostman_sum(seq, BoundaryPoint(c), std::min<long>(N, 2000));
        frostman.push_back({{"at", cplx(c)},
                            {"partial", fs.partial},
                            {"divergent", fs.divergent}});
    }
    out["frostman_sums"] = frostman;
    return out;
}

}  // namespace

Json spec_to_json(const InnerSpec& u) {
    return std::visit(
        [](const auto& n) -> Json {
            using T = std::decay_t<decltype(n)>;
            Json j;
            if constexpr (std::is_same_v<T, FiniteBlaschkeLeaf>) {
                j["kind"] = "finite_blaschke";
                Json zeros = Json::array();
                for (const Complex& z : n.zeros) zeros.push_back(cplx(z));
                j["zeros"] = zeros;
                j["unimodular"] = cplx(n.unimodular);
            } else if constexpr (std::is_same_v<T, InfiniteBlaschkeLeaf>) {
                j["kind"] = "infinite_blaschke";
                j["generator"] = generator_name(n.sequence.kind());
                if (n.sequence.kind() == GeneratorKind::Power)
                    j["p"] = n.sequence.power_exponent();
                if (n.sequence.kind() == GeneratorKind::Explicit) {
                    Json zeros = Json::array();
                    for (const Complex& z : n.sequence.explicit_zeros())
                        zeros.push_back(cplx(z));
                    j["zeros"] = zeros;
                }
                j["budget"] = n.sequence.budget();
            } else if constexpr (std::is_same_v<T, SingularAtomicLeaf>) {
                j["kind"] = "singular_atomic";
                Json atoms = Json::array();
                for (const SingularAtom& a : n.atoms)
                    atoms.push_back(
                        {{"zeta", cplx(a.zeta.value())}, {"mass", a.mass}});
                j["atoms"] = atoms;
            } else if constexpr (std::is_same_v<T, ProductNode>) {
                j["kind"] = "product";
                Json factors = Json::array();
                for (const InnerSpec& f : n.factors)
                    factors.push_back(spec_to_json(f));
                j["factors"] = factors;
            } else if constexpr (std::is_same_v<T, ComposeNode>) {
                j["kind"] = "compose";
                j["outer"] = spec_to_json(*n.outer);
                j["inner"] = spec_to_json(*n.inner);
            } else {  // FrostmanShiftNode
                j["kind"] = "frostman_shift";
                j["base"] = spec_to_json(*n.base);
                j["a"] = cplx(n.a);
            }
            return j;
        },
        u.node());
}

InnerSpec spec_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw ValidationError("spec node must be an object with a 'kind' string");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "finite_blaschke") {
        std::vector<Complex> zeros;
        for (const auto& z : j.value("zeros", Json::array()))
            zeros.push_back(parse_cplx(z, "finite_blaschke zeros"));
        Complex c(1.0, 0.0);
        if (j.contains("unimodular"))
            c = parse_cplx(j["unimodular"], "unimodular constant");
        return InnerSpec::finite_blaschke(std::move(zeros), c);
    }
    if (kind == "infinite_blaschke")
        return InnerSpec::infinite_blaschke(parse_sequence(j));
    if (kind == "singular_atomic") {
        std::vector<SingularAtom> atoms;
        for (const auto& a : j.value("atoms", Json::array())) {
            if (!a.is_object() || !a.contains("zeta") || !a.contains("mass"))
                throw ValidationError("atom needs 'zeta' and 'mass'");
            atoms.push_back(SingularAtom{
                BoundaryPoint(parse_cplx(a["zeta"], "atom zeta")),
                a["mass"].get<double>()});
        }
        return InnerSpec::singular_atomic(std::move(atoms));
    }
    if (kind == "atomic_s") return InnerSpec::atomic_s(j.value("mass", 1.0));
    if (kind == "product") {
        std::vector<InnerSpec> factors;
        for (const auto& f : j.value("factors", Json::array()))
            factors.push_back(spec_from_json(f));
        return multiply(std::move(factors));
    }
    if (kind == "compose") {
        if (!j.contains("outer") || !j.contains("inner"))
            throw ValidationError("compose needs 'outer' and 'inner'");
        return compose(spec_from_json(j["outer"]), spec_from_json(j["inner"]));
    }
    if (kind == "frostman_shift") {
        if (!j.contains("base") || !j.contains("a"))
            throw ValidationError("frostman_shift needs 'base' and 'a'");
        return frostman_shift(spec_from_json(j["base"]),
                              DiskPoint(parse_cplx(j["a"], "frostman pivot")));
    }
    throw ValidationError("unknown spec kind '" + kind + "'");
}

InnerSpec load_spec(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ValidationError("cannot open spec file: " + file.string());
    Json j;
    try {
        in >> j;
    } catch (const Json::parse_error& e) {
        throw ValidationError("spec file is not valid JSON: " +
                              std::string(e.what()));
    }
    return spec_from_json(j);
}

Json spectrum_to_json(const Spectrum& s) {
    Json pts = Json::array();
    for (const Complex& z : s.points) pts.push_back(cplx(z));
    return Json{{"points", pts}, {"exact", s.exact}};
}

Json criterion_to_json(const CriterionReport& r) {
    Json probes = Json::array();
    for (const RadialProbe& p : r.probes)
        probes.push_back({{"zeta", cplx(p.zeta)},
                          {"min_log_modulus", json_num(p.min_log_modulus)},
                          {"last_log_modulus", json_num(p.last_log_modulus)},
                          {"deepest_radius", p.deepest_radius}});
    return Json{{"sup_ratio", r.sup_ratio},
                {"argmax", cplx(r.argmax)},
                {"samples", r.samples},
                {"sup_ratio_dense", r.sup_ratio_dense},
                {"samples_dense", r.samples_dense},
                {"sup_stable", r.sup_stable},
                {"radial_probes", probes},
                {"decay_at_spectrum", r.decay_at_spectrum},
                {"consistent", r.consistent}};
}

Json verdict_to_json(const ConnectivityVerdict& v, bool include_runs) {
    Json comps = Json::array();
    for (const ComponentStats& st : v.in_map.components) {
        Json c{{"cells", st.cells},
               {"r_lo", st.r_lo},
               {"r_hi", st.r_hi},
               {"contains_zero", st.contains_zero},
               {"touches_rim", st.touches_rim}};
        c["min_log_modulus"] = json_num(st.min_log_mod);
        comps.push_back(c);
    }
    Json witnesses = Json::array();
    for (const Complex& w : v.witnesses) witnesses.push_back(cplx(w));
    Json out{{"eta", v.eta},
             {"verdict", to_string(v.verdict)},
             {"in_components", v.in_components},
             {"merged_components", v.merged_components},
             {"in_cells", v.in_cells},
             {"uncertain_cells", v.uncertain_cells},
             {"witnesses", witnesses},
             {"components", comps},
             {"refinement_levels_used", v.refinement_levels_used},
             {"grid",
              {{"level", v.grid.level},
               {"r_max", v.grid.r_max},
               {"cell_cap", v.grid.cell_cap},
               {"cells", v.grid.cells},
               {"rings", v.grid.rings},
               {"r_max_clipped", v.grid.r_max_clipped}}}};
    if (include_runs) {
        // RLE by ring: [ring, begin, end, label]
        Json runs = Json::array();
        for (size_t ring = 0; ring < v.in_map.runs.size(); ++ring)
            for (const auto& run : v.in_map.runs[ring])
                runs.push_back(Json::array(
                    {static_cast<long>(ring), run.begin, run.end, run.label}));
        out["component_runs"] = runs;
    }
    return out;
}

Json analyze_report(const InnerSpec& u, const AnalyzeOptions& opt) {
    Json rep;
    Json timing;
    rep["schema"] = "sublevel-analysis/1";

    const Json spec_json = spec_to_json(u);
    rep["spec"] = spec_json;
    rep["spec_hash"] = content_hash(spec_json.dump());

    double t0 = now_seconds();
    try {
        rep["spectrum"] = spectrum_to_json(spectrum(u));
    } catch (const UnsupportedSpec& e) {
        rep["spectrum"] = Json{{"error", e.what()}};
    }
    timing["spectrum_s"] = now_seconds() - t0;

    t0 = now_seconds();
    if (const InfiniteBlaschkeLeaf* leaf = find_sequence_leaf(u))
        rep["sequence_constants"] = sequence_constants(leaf->sequence);
    else
        rep["sequence_constants"] = nullptr;
    timing["constants_s"] = now_seconds() - t0;

    t0 = now_seconds();
    Json verdicts = Json::array();
    for (double eta : opt.etas) {
        try {
            verdicts.push_back(
                verdict_to_json(is_connected(u, eta, opt.policy), opt.dump_grid));
        } catch (const Error& e) {
            verdicts.push_back(Json{{"eta", eta}, {"error", e.what()}});
        }
    }
    rep["verdicts"] = verdicts;
    timing["verdicts_s"] = now_seconds() - t0;

    t0 = now_seconds();
    if (opt.run_criterion) {
        try {
            rep["criterion"] = criterion_to_json(criterion_scan(u, opt.scan_density));
        } catch (const Error& e) {
            rep["criterion"] = Json{{"error", e.what()}};
        }
    } else {
        rep["criterion"] = nullptr;
    }
    timing["criterion_s"] = now_seconds() - t0;

    rep["provenance"] = Json{
        {"library", "onecomp"},
        {"version", "0.1.0"},
        {"grid_policy",
         {{"levels", opt.policy.levels},
          {"r_max_schedule", opt.policy.r_max_schedule},
          {"cell_cap0", opt.policy.cell_cap0},
          {"log_tol", opt.policy.log_tol}}},
        {"scan_density", opt.scan_density}};

    // hash over everything except wall-clock noise
    rep["content_hash"] = content_hash(rep.dump());
    rep["timing"] = timing;
    return rep;
}

std::string content_hash(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string dump_report(const Json& j) { return j.dump(2) + "\n"; }

void write_file_atomic(const std::filesystem::path& p, const std::string& bytes) {
    namespace fs = std::filesystem;
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    const fs::path tmp = p.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw Error("short write to " + tmp.string());
    }
    fs::rename(tmp, p);
}

}  // namespace onecomp
