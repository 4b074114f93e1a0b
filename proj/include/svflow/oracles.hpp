#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace svflow {

// Result of one randomized numerical check. worst_margin is the most adverse
// slack seen over all trials and evaluations; the check passes when it stays
// above -tolerance. skipped counts trials resampled or dropped because a
// hypothesis of the statement under test did not hold for the sample.
struct OracleOutcome {
  std::string name;
  int trials = 0;
  int skipped = 0;
  double worst_margin = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

// |A^r X B^{1-r}| <= |AX|^r |XB|^{1-r} for random SPD A, B, arbitrary X and
// r in (0,1). Margin is (rhs - lhs) / rhs.
OracleOutcome check_mcintosh(int n, int trials, std::uint64_t seed);

// Two-sided identifiability check. Forward: a shared eigenvector makes
// log |A^{1-x} B^x v| affine to 1e-10. Generic: with an injective
// eigenvalue-ratio map and v not an eigenvector, the affine residual must
// exceed generic_tol. Pairs failing the injectivity hypothesis are resampled
// (counted in skipped).
OracleOutcome check_identifiability(int n, int trials, std::uint64_t seed,
                                    double generic_tol = 1e-4);

// Alignment inequalities for principal singular vectors of interpolated
// normalized kernel pairs, at every interior point of an (m_segments+1)-point
// grid; also enforces sigma_1 <= 1 + 1e-12 throughout. Margin is
// (measured overlap^2 - bound) over evaluations with a positive bound.
// Trials whose top eigenvalue is within 1e-8 of degenerate are skipped.
OracleOutcome check_stability(int n, int trials, std::uint64_t seed,
                              int m_segments = 11);

// On the same kernel pairs as check_stability (same seed): the tail second
// moment never exceeds mu_2^2 (+1e-12) and the refined bound dominates the
// mu_2^2-gap baseline. Zero-tail trials pass trivially.
OracleOutcome check_refinement(int n, int trials, std::uint64_t seed,
                               int m_segments = 11);

// All checks at their default sizes.
std::vector<OracleOutcome> run_all_checks(std::uint64_t seed);

}  // namespace svflow
