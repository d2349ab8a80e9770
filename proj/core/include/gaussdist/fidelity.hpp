#pragma once

#include <string_view>
#include <vector>

#include "gaussdist/correlation.hpp"

namespace gaussdist {

/// Branches of the fidelity dispatch.
enum class FidelityBranch {
  SingleMode,    // l = 1 closed form
  Regular,       // no unit modes in either input
  Pure,          // one input fully pure
  PartialUnit,   // some unit modes: reduce and recurse
  Orthogonal,    // pure sector of one state orthogonal to the other
  Coincident,    // inputs equal to rounding: F = 1 exactly
};

std::string_view to_string(FidelityBranch branch);

/// Fidelity between two single-mode states with signed <sigma^z> values.
double fidelity_single_mode(double gamma1, double gamma2);

/// F = det((1 + Gamma_1 Gamma_2)/2)^{1/4}, valid when at least one input is
/// pure. Evaluated through the Pfaffian of (m_pure + m_other)/2, which carries
/// the same determinant with linear rather than quartic error amplification.
double fidelity_pure(const CorrelationMatrix& g1, const CorrelationMatrix& g2);

/// F = det((1+G1)/2)^{1/4} det((1+G2)/2)^{1/4} det(1 + sqrt(K1 K2))^{1/2}
/// for inputs without unit modes. Clamped to [0, 1].
double fidelity_regular(const CorrelationMatrix& g1, const CorrelationMatrix& g2);

/// Result of eliminating the unit modes of R against S.
struct UnitReduction {
  double prefactor = 0.0;  // det((1 + R_X S_X)/2)^{1/4}
  CorrelationMatrix r_y;
  CorrelationMatrix s_y;   // S_Y - S_YX R_X (1 + S_X R_X)^{-1} S_XY
  bool orthogonal = false;  // prefactor vanished; r_y / s_y left empty
};

/// Threshold on sqrt(det((1 + R_X S_X)/2)) below which the pure sector of R is
/// treated as orthogonal to S.
inline constexpr double kOrthogonalPrefactor = 1e-14;

UnitReduction reduce_unit_modes(const ModePartition& partition);

/// Inputs whose m differ by at most this (entrywise) are treated as the same
/// state. Near F = 1 the Bures distance sqrt(2 (1 - F)) turns eps-level noise
/// into ~1e-8; snapping keeps coincident pairs at exactly zero distance.
inline constexpr double kCoincidentStates = 1e-11;

/// Diagnostic trail of one fidelity evaluation.
struct FidelityReport {
  double value = 0.0;
  std::vector<FidelityBranch> branches;  // one entry per recursion level
  int reductions = 0;
};

/// Fidelity between two Gaussian states, dispatching between the closed
/// forms and recursive unit-mode reduction.
double fidelity(const CorrelationMatrix& g1, const CorrelationMatrix& g2);
FidelityReport fidelity_report(const CorrelationMatrix& g1, const CorrelationMatrix& g2);

/// B = sqrt(2 (1 - F)).
double bures_from_fidelity(double f);
double bures_distance(const CorrelationMatrix& g1, const CorrelationMatrix& g2);

}  // namespace gaussdist
