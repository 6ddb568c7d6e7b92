#pragma once

#include <vector>

#include "maslov/schrodinger1d.hpp"

namespace maslov {

struct OracleOptions {
  int grid = 2000;
  int count = 8;
  /// Relative floor added to every Richardson band.
  double band_floor = 1e-9;
  /// Return ambiguous spectra flagged instead of throwing MorseAmbiguous.
  bool allow_ambiguous = false;
};

/// Lowest eigenvalues of a discretized self-adjoint extension with its Morse index.
struct SpectrumResult {
  /// Richardson-extrapolated values, ascending.
  std::vector<double> eigenvalues;
  /// Per-eigenvalue uncertainty band.
  std::vector<double> bands;
  int morse_index = 0;
  int grid = 0;
  int order = 2;
  /// Band of the eigenvalue nearest zero.
  double tolerance = 0.0;
  /// Some eigenvalue lies within its band of zero.
  bool ambiguous = false;
};

/// Eigenvalues of the 3-point finite-difference operator on one grid (N intervals), lowest `count`.
/// Boundary rows encode the extension directly: ghost points for Neumann and Robin, a phase-twisted
/// wrap for theta-periodic, interior nodes for Dirichlet.
std::vector<double> fd_eigenvalues(const Potential1D& v, const ExtensionPlane& g, int grid, int count);

/// Richardson over (grid, 2 grid); Morse index counts values below minus their band.
SpectrumResult oracle_spectrum(const Potential1D& v, const ExtensionPlane& g, const OracleOptions& opts = {});

/// Oracle eigenvalues within the band of lambda (multiplicity of lambda in the oracle spectrum).
int oracle_multiplicity(const SpectrumResult& spec, double lambda);

}  // namespace maslov
