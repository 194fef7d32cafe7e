#pragma once

#include <array>
#include <cstdint>
#include <numbers>
#include <string>

#include "dispersolve/symbols.hpp"

namespace dispersolve {

/// Frequency scales N1 <= N2 <= N3 and modulation scales L1, L2, L3 (L = 0
/// is the |sigma| < 1/sqrt(2) band) of three sharply localized space-time
/// functions.
struct ResonanceTriple {
  std::array<double, 3> n{};
  std::array<double, 3> l{};
};

enum class TripleClass { Violating, Compatible };

/// Classification by the certificate constants widened by 4: violating when
/// L_max lies outside [c_min/4, 4 c_max] * max(N1 N2^alpha, L_med).
TripleClass classify_triple(const ResonanceTriple& t,
                            const HypothesisCertificate& cert, double alpha);

struct ResonanceTestOptions {
  double length = 2.0 * std::numbers::pi;  // spatial period: xi in (2 pi/length) Z
  double dtau = 0.25;                      // temporal frequency lattice step
  int trials = 100;
  std::uint64_t seed = 1;
  double witness_threshold = 1e-8;
};

struct ResonanceTestResult {
  ResonanceTriple triple;
  TripleClass classification = TripleClass::Compatible;
  /// Range of |Omega| over admissible lattice frequency triples.
  double omega_min = 0.0;
  double omega_max = 0.0;
  bool frequency_support_empty = false;
  /// True when band-edge arithmetic proves the integral vanishes.
  bool provably_zero = false;
  double max_normalized = 0.0;  // max over trials of |integral| / prod ||u_i||
  int trials_run = 0;
  int first_witness_trial = -1;  // -1: no nonzero witness
};

/// Draws `trials` random Hermitian data triples with sharp (N, L) supports
/// and evaluates int u1 u2 u3 over the space-time lattice. Throws
/// PreconditionError when the certificate is absent.
ResonanceTestResult resonance_support_test(const ResonanceTriple& t,
                                           const SymbolSpec& p,
                                           const HypothesisCertificate* cert,
                                           double alpha,
                                           const ResonanceTestOptions& opt = {});

}  // namespace dispersolve
