#include "maslov/report.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "maslov/config.hpp"

namespace maslov {

using nlohmann::json;

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) raise(ErrorCode::IoError, "write to '" + path + "' failed");
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string item; std::getline(ss, item, sep);) out.push_back(item);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, int line) {
  const std::string t = trim(text);
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used == t.size()) return v;
  } catch (const std::exception&) {
  }
  raise(ErrorCode::IoError, "line " + std::to_string(line) + ": '" + t + "' is not a number");
}

/// Non-empty, non-comment lines that do not start with a letter (headers are skipped).
std::vector<std::pair<int, std::vector<double>>> numeric_rows(const std::string& text) {
  std::vector<std::pair<int, std::vector<double>>> rows;
  std::stringstream ss(text);
  int number = 0;
  for (std::string line; std::getline(ss, line);) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || std::isalpha(static_cast<unsigned char>(t[0]))) continue;
    std::vector<double> vals;
    for (const auto& cell : split(t, ',')) vals.push_back(parse_number(cell, number));
    rows.emplace_back(number, std::move(vals));
  }
  return rows;
}

Mat rows_to_basis(const std::vector<std::vector<double>>& rows, int first_col, int line) {
  const int r = static_cast<int>(rows.size());
  const int width = static_cast<int>(rows.front().size()) - first_col;
  if (width <= 0 || width % 2 != 0) raise(ErrorCode::IoError, "line " + std::to_string(line) + ": expected re,im pairs");
  const int cols = width / 2;
  if (r != 2 * cols)
    raise(ErrorCode::IoError, "plane near line " + std::to_string(line) + " has " + std::to_string(r) + " rows and " +
                                  std::to_string(cols) + " columns; expected a 2n x n basis");
  Mat out(r, cols);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != first_col + width)
      raise(ErrorCode::IoError, "ragged plane rows near line " + std::to_string(line));
    for (int j = 0; j < cols; ++j) {
      const auto& row = rows[static_cast<std::size_t>(i)];
      out(i, j) = cplx(row[static_cast<std::size_t>(first_col + 2 * j)], row[static_cast<std::size_t>(first_col + 2 * j + 1)]);
    }
  }
  return out;
}

}  // namespace

json to_json(const CrossingReport& c) {
  return json{{"location", c.location},         {"intersection_dim", c.intersection_dim},
              {"form_eigenvalues", c.form_eigenvalues}, {"signature", c.signature},
              {"n_plus", c.n_plus},              {"n_minus", c.n_minus},
              {"regular", c.regular}};
}

json to_json(const std::vector<CrossingReport>& cs) {
  json out = json::array();
  for (const auto& c : cs) out.push_back(to_json(c));
  return out;
}

json to_json(const MaslovResult& r) {
  json partition = json::array();
  for (const auto& seg : r.partition) partition.push_back(json{{"s0", seg.s0}, {"s1", seg.s1}, {"eps", seg.eps}});
  return json{{"index", r.index},
              {"method", to_string(r.method)},
              {"crossings", to_json(r.crossings)},
              {"partition", partition},
              {"samples", r.samples}};
}

json to_json(const IdentityReport& r) {
  json j{{"identity", r.identity},
         {"theta1", r.theta1},
         {"theta2", r.theta2},
         {"morse1", r.morse1},
         {"morse2", r.morse2},
         {"lhs", r.lhs_morse_diff},
         {"rhs", r.rhs_maslov},
         {"crossings", to_json(r.crossings)},
         {"beyond_quoted_range", r.beyond_quoted_range},
         {"pass", r.pass}};
  j["rhs_via_crossings"] = r.rhs_via_crossings ? json(*r.rhs_via_crossings) : json(nullptr);
  if (!r.crossing_method_note.empty()) j["crossing_method_note"] = r.crossing_method_note;
  if (r.identity == "robin") {
    json kernels = json::array();
    for (const auto& k : r.kernels)
      kernels.push_back(json{{"theta", k.theta}, {"multiplicity", k.multiplicity}, {"oracle_jump", k.oracle_jump}});
    j["kernels"] = kernels;
    j["kernel_sum"] = r.kernel_sum;
    j["endpoint_kernel"] = r.endpoint_kernel;
    j["single_path_forms"] = to_json(r.single_path_forms);
    j["forms_negative"] = r.forms_negative;
  }
  return j;
}

json to_json(const Y19Report& r) {
  json rows = json::array();
  for (const auto& row : r.table.rows) {
    json jr{{"t", row.t}, {"morse", row.morse}};
    if (row.morse_doubled) jr["morse_doubled"] = *row.morse_doubled;
    rows.push_back(jr);
  }
  json j{{"tau", r.tau},
         {"morse_tau", r.morse_tau},
         {"morse_one", r.morse_one},
         {"spectral_flow", r.spectral_flow},
         {"y21", r.y21_holds},
         {"tau0", r.tau0},
         {"morse_small", r.morse_small},
         {"spectral_flow_tau0", r.spectral_flow_tau0},
         {"morse_v0", r.morse_v0},
         {"morse_table", rows},
         {"pass", r.pass}};
  j["y22"] = r.y22_holds ? json(*r.y22_holds) : json(nullptr);
  j["y23"] = r.y23_holds ? json(*r.y23_holds) : json(nullptr);
  j["maslov_1d"] = r.maslov_1d ? json(*r.maslov_1d) : json(nullptr);
  return j;
}

json to_json(const VerificationReport& r) {
  auto opt = [](const std::optional<int>& v) { return v ? json(*v) : json(nullptr); };
  json sides = json::array();
  for (const auto& s : r.sides) {
    json js{{"name", s.name},
            {"index", s.index},
            {"index_via_crossings", opt(s.index_via_crossings)},
            {"crossings", to_json(s.crossings)}};
    if (s.seconds > 0.0) js["seconds"] = s.seconds;
    sides.push_back(js);
  }
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back(json{{"name", c.name}, {"ok", c.ok}});
  json j{{"scenario", r.scenario},
         {"kind", r.kind},
         {"alpha", r.alpha},
         {"beta", r.beta},
         {"lambda_inf", r.lambda_inf},
         {"sides", sides},
         {"morse_alpha", opt(r.morse_alpha)},
         {"morse_beta", opt(r.morse_beta)},
         {"spectral_flow", opt(r.spectral_flow)},
         {"maslov", opt(r.maslov)},
         {"endpoint_kernel", r.endpoint_kernel},
         {"checks", checks},
         {"pass", r.pass}};
  if (r.seconds > 0.0) j["seconds"] = r.seconds;
  return j;
}

json error_json(ErrorCode code, const std::string& message) {
  return json{{"code", to_string(code)}, {"message", message}};
}

json report_envelope(const std::string& command, bool pass, const json& result) {
  return json{{"schema_version", kSchemaVersion}, {"command", command}, {"pass", pass}, {"result", result}};
}

json error_envelope(const std::string& command, ErrorCode code, const std::string& message) {
  return json{{"schema_version", kSchemaVersion}, {"command", command}, {"pass", false}, {"error", error_json(code, message)}};
}

void emit_report(const json& report, const std::string& path) {
  const std::string text = report.dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    return;
  }
  write_file(path, text);
}

std::string tracks_csv(const EigenTracks& tracks) {
  std::string out = "t,j,lambda\n";
  for (std::size_t i = 0; i < tracks.t.size(); ++i) {
    const auto& vals = tracks.values.at(i);
    for (std::size_t j = 0; j < vals.size(); ++j) out += g17(tracks.t[i]) + "," + std::to_string(j) + "," + g17(vals[j]) + "\n";
  }
  return out;
}

std::string crossings_csv(const std::vector<CrossingReport>& crossings) {
  std::string out = "location,dim,signature,n_plus,n_minus,regular\n";
  for (const auto& c : crossings)
    out += g17(c.location) + "," + std::to_string(c.intersection_dim) + "," + std::to_string(c.signature) + "," +
           std::to_string(c.n_plus) + "," + std::to_string(c.n_minus) + "," + (c.regular ? "1" : "0") + "\n";
  return out;
}

void emit_tracks(const EigenTracks& tracks, const std::string& path) { write_file(path, tracks_csv(tracks)); }

void emit_crossings(const std::vector<CrossingReport>& crossings, const std::string& path) {
  write_file(path, crossings_csv(crossings));
}

std::string plane_csv(const Mat& basis) {
  std::string out;
  for (int i = 0; i < basis.rows(); ++i) {
    for (int j = 0; j < basis.cols(); ++j) {
      if (j > 0) out += ",";
      out += g17(basis(i, j).real()) + "," + g17(basis(i, j).imag());
    }
    out += "\n";
  }
  return out;
}

Mat parse_plane_csv(const std::string& text) {
  const auto rows = numeric_rows(text);
  if (rows.empty()) raise(ErrorCode::IoError, "plane file has no data rows");
  std::vector<std::vector<double>> vals;
  for (const auto& r : rows) vals.push_back(r.second);
  return rows_to_basis(vals, 0, rows.front().first);
}

void write_plane_csv(const Mat& basis, const std::string& path) { write_file(path, plane_csv(basis)); }

Mat read_plane_csv(const std::string& path) { return parse_plane_csv(read_text_file(path)); }

PlaneSamples parse_plane_samples_csv(const std::string& text) {
  const auto rows = numeric_rows(text);
  if (rows.empty()) raise(ErrorCode::IoError, "plane sample file has no data rows");
  PlaneSamples out;
  std::size_t i = 0;
  while (i < rows.size()) {
    const double s = rows[i].second.at(0);
    std::vector<std::vector<double>> block;
    const int line = rows[i].first;
    while (i < rows.size() && rows[i].second.at(0) == s) block.push_back(rows[i++].second);
    if (!out.s.empty() && !(s > out.s.back()))
      raise(ErrorCode::IoError, "line " + std::to_string(line) + ": parameters must increase");
    out.s.push_back(s);
    out.bases.push_back(rows_to_basis(block, 1, line));
    if (out.bases.back().rows() != out.bases.front().rows())
      raise(ErrorCode::IoError, "line " + std::to_string(line) + ": plane dimension changes along the path");
  }
  return out;
}

PlaneSamples read_plane_samples_csv(const std::string& path) { return parse_plane_samples_csv(read_text_file(path)); }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::IoError, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace maslov
