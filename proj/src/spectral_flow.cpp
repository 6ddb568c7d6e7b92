#include "maslov/spectral_flow.hpp"

#include <cmath>
#include <sstream>

#include "maslov/errors.hpp"
#include "maslov/linalg.hpp"

namespace maslov {

namespace {

void check_shape(const EigenTracks& tr) {
  if (tr.t.size() != tr.values.size()) raise(ErrorCode::ConfigError, "track grid and values differ in length");
  for (const auto& v : tr.values)
    if (v.size() != tr.values.front().size()) raise(ErrorCode::ConfigError, "tracks must have equal counts per sample");
}

std::vector<int> match(const std::vector<double>& prev, const std::vector<double>& cur) {
  const auto n = static_cast<Eigen::Index>(prev.size());
  RMat cost(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      cost(i, j) = std::abs(prev[static_cast<std::size_t>(i)] - cur[static_cast<std::size_t>(j)]);
  return linalg::optimal_assignment(cost);
}

}  // namespace

EigenTracks match_tracks(const EigenTracks& raw) {
  check_shape(raw);
  EigenTracks out = raw;
  for (std::size_t i = 1; i < out.values.size(); ++i) {
    const auto assign = match(out.values[i - 1], raw.values[i]);
    for (std::size_t j = 0; j < assign.size(); ++j) out.values[i][j] = raw.values[i][static_cast<std::size_t>(assign[j])];
  }
  return out;
}

int spectral_flow(const EigenTracks& tracks, double through, double tol) {
  check_shape(tracks);
  if (tracks.values.size() < 2) return 0;
  const EigenTracks tr = match_tracks(tracks);
  int flow = 0;
  for (std::size_t i = 0; i + 1 < tr.values.size(); ++i) {
    for (std::size_t j = 0; j < tr.values[i].size(); ++j) {
      const double x0 = tr.values[i][j] - through;
      const double x1 = tr.values[i + 1][j] - through;
      if (std::abs(x0) <= tol && std::abs(x1) <= tol) {
        std::ostringstream os;
        os << "track " << j << " rests on the level over [" << tr.t[i] << ", " << tr.t[i + 1] << "]";
        raise(ErrorCode::AmbiguousCrossing, os.str());
      }
      const bool below0 = x0 < -tol;
      const bool below1 = x1 < -tol;
      if (below0 && !below1) ++flow;
      if (!below0 && below1) --flow;
    }
  }
  return flow;
}

}  // namespace maslov
