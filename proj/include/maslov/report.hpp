#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "maslov/band.hpp"
#include "maslov/errors.hpp"
#include "maslov/maslov.hpp"
#include "maslov/scenarios.hpp"
#include "maslov/spectral_flow.hpp"
#include "maslov/verify1d.hpp"

namespace maslov {

nlohmann::json to_json(const CrossingReport& c);
nlohmann::json to_json(const std::vector<CrossingReport>& cs);
nlohmann::json to_json(const MaslovResult& r);
/// Carries "lhs" (Morse difference) and "rhs" (Maslov index).
nlohmann::json to_json(const IdentityReport& r);
nlohmann::json to_json(const Y19Report& r);
nlohmann::json to_json(const VerificationReport& r);
nlohmann::json error_json(ErrorCode code, const std::string& message);

/// Wraps a result as {"schema_version", "command", "pass", "result"} or, on failure to run,
/// {"schema_version", "command", "pass": false, "error"}.
nlohmann::json report_envelope(const std::string& command, bool pass, const nlohmann::json& result);
nlohmann::json error_envelope(const std::string& command, ErrorCode code, const std::string& message);

/// Pretty-printed JSON to `path`, or standard output when `path` is empty.
void emit_report(const nlohmann::json& report, const std::string& path);
/// CSV with header "t,j,lambda", one row per (sample, track) pair.
void emit_tracks(const EigenTracks& tracks, const std::string& path);
/// CSV with header "location,dim,signature,n_plus,n_minus,regular".
void emit_crossings(const std::vector<CrossingReport>& crossings, const std::string& path);

std::string tracks_csv(const EigenTracks& tracks);
std::string crossings_csv(const std::vector<CrossingReport>& crossings);

/// Plane basis as CSV: one line per row of the 2n x n matrix, each entry written as adjacent re,im columns.
std::string plane_csv(const Mat& basis);
Mat parse_plane_csv(const std::string& text);
void write_plane_csv(const Mat& basis, const std::string& path);
Mat read_plane_csv(const std::string& path);

/// Sampled path of planes: each line is "s,re,im,re,im,..." for one row of the basis at parameter s;
/// consecutive lines with equal s form one 2n x n basis.
struct PlaneSamples {
  std::vector<double> s;
  std::vector<Mat> bases;
};
PlaneSamples parse_plane_samples_csv(const std::string& text);
PlaneSamples read_plane_samples_csv(const std::string& path);

std::string read_text_file(const std::string& path);

}  // namespace maslov
