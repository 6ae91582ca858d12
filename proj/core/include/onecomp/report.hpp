#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "onecomp/boundary_criterion.hpp"
#include "onecomp/sublevel.hpp"

namespace onecomp {

using Json = nlohmann::ordered_json;

/// Spec tree <-> JSON.  Complex numbers serialize as [re, im]; sequence
/// leaves serialize as generator name + parameters, never as point lists.
Json spec_to_json(const InnerSpec& u);
InnerSpec spec_from_json(const Json& j);
InnerSpec load_spec(const std::filesystem::path& file);

Json spectrum_to_json(const Spectrum& s);
Json criterion_to_json(const CriterionReport& r);
/// include_runs adds the run-length encoded component map by ring.
Json verdict_to_json(const ConnectivityVerdict& v, bool include_runs = false);

struct AnalyzeOptions {
    std::vector<double> etas{0.5};
    GridPolicy policy;
    long scan_density = 512;
    bool dump_grid = false;
    bool run_criterion = true;
};

/// Full machine-readable analysis: spec echo + hash, structural spectrum,
/// sequence constants where a zero-sequence leaf is present, one
/// connectivity verdict per threshold, criterion scan, provenance.  The
/// "timing" block is excluded from the content hash so reruns byte-compare.
Json analyze_report(const InnerSpec& u, const AnalyzeOptions& opt);

/// FNV-1a 64-bit, hex encoded.
std::string content_hash(const std::string& bytes);

/// Stable serialization (2-space indent, trailing newline).
std::string dump_report(const Json& j);

/// Write via temp file + rename so readers never observe partial output.
void write_file_atomic(const std::filesystem::path& p, const std::string& bytes);

}  // namespace onecomp
