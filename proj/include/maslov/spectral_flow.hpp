#pragma once

#include <vector>

namespace maslov {

/// Eigenvalue curves on a parameter grid. values[i] holds the eigenvalues at t[i];
/// after match_tracks, values[i][j] follows track j continuously.
struct EigenTracks {
  std::vector<double> t;
  std::vector<std::vector<double>> values;
};

/// Reorders each sample so that column j follows one continuous track (optimal assignment on
/// absolute distance between neighbouring samples).
EigenTracks match_tracks(const EigenTracks& raw);

/// Net count of tracks crossing `through` upward minus downward. A value within tol of the level
/// counts as above it, matching the strict count of negative eigenvalues, so the result equals
/// Mor(start) - Mor(end) for semibounded families. Throws AmbiguousCrossing if a track rests on
/// the level at two consecutive samples.
int spectral_flow(const EigenTracks& tracks, double through = 0.0, double tol = 1e-9);

}  // namespace maslov
