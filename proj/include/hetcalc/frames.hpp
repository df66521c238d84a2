#pragma once

// Catalogue of nilpotent Lie coframes over R^4 with conformal dilaton
// weights (1,1,1,1,0,...). Every entry is a (possibly truncated) K_A:
// d e^{4+i} = sum_j a_ij sigma_j with the anti-self-dual forms
//   sigma_1 = e^12 - e^34, sigma_2 = e^13 + e^24, sigma_3 = e^14 - e^23.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hetcalc/exterior.hpp"

namespace het {

using Matrix3 = std::array<std::array<CoefExpr, 3>, 3>;

/// Matrix of parameter symbols prefix11 .. prefix33.
Matrix3 symbolic_matrix(std::string_view prefix);
Matrix3 rational_matrix(const std::array<std::array<long, 3>, 3>& entries);
Matrix3 identity_matrix();
Matrix3 zero_matrix();
Matrix3 operator*(const Matrix3& a, const Matrix3& b);
Matrix3 transpose(const Matrix3& a);
/// sum of squared entries
CoefExpr frob_norm_sq(const Matrix3& a);
/// Value of every entry; throws when an entry is not a rational constant.
std::optional<std::array<std::array<Rational, 3>, 3>> constant_entries(const Matrix3& a);
/// Rank of a matrix with rational entries.
int rank(const Matrix3& a);
std::string matrix_str(const Matrix3& a);

/// sigma_i (i = 1..3) or omega_i on legs 1..4 of a dim-dimensional coframe.
FormExpr sigma_form(int dim, int i);
FormExpr omega_form(int dim, int i);

enum class FrameKind { QuaternionicHeisenberg, KA, H5, H3, H21, ContractionEps6D, ContractionEps5D };

struct FrameId {
  FrameKind kind = FrameKind::KA;
  Matrix3 A = identity_matrix();  // KA
  CoefExpr a;                      // H5, H3, Eps6
  CoefExpr b;                      // H5, Eps6
  std::array<CoefExpr, 3> ai{};    // H21, Eps5
  Rational eps = 0;                // Eps6, Eps5

  static FrameId quaternionic_heisenberg();
  static FrameId k_a(Matrix3 A);
  static FrameId h5(CoefExpr a, CoefExpr b);
  static FrameId h3(CoefExpr a);
  static FrameId h21(CoefExpr a1, CoefExpr a2, CoefExpr a3);
  static FrameId eps6(CoefExpr a, CoefExpr b, Rational eps);
  static FrameId eps5(CoefExpr a1, CoefExpr a2, CoefExpr a3, Rational eps);

  /// Catalogue name as used by scenario configs: gH, kA, h5, h3, h21, eps6, eps5.
  std::string name() const;
};

/// Rows of the structure matrix with a leading dimension: (dim, rows).
/// Row i gives d e^{4+i} = sum_j rows[i][j] sigma_j.
struct StructureRows {
  int dim = 7;
  std::vector<std::array<CoefExpr, 3>> rows;
};

StructureRows structure_rows(const FrameId& id);

/// Coframe for structure rows: dim = 4 + rows.size().
CoframeSpec coframe_from_rows(std::string name, const std::vector<std::array<CoefExpr, 3>>& rows);

CoframeSpec build_coframe(const FrameId& id);

struct IntegrabilityResult {
  bool pass = true;
  std::vector<FormExpr> residuals;  // d(de^k), k = 1..dim
};

IntegrabilityResult integrability_check(const CoframeSpec& c);
IntegrabilityResult integrability_check(std::span<const FormExpr> lie_differentials);

/// K_{A_eps} for the contraction families. At eps = 0 the degenerate legs are
/// dropped and recorded in dropped_legs(); for eps > 0 the full 7D coframe is
/// returned.
CoframeSpec contract_family(const FrameId& id, const Rational& eps);

/// The structure rows recovered from a coframe built by coframe_from_rows.
std::vector<std::array<CoefExpr, 3>> rows_of(const CoframeSpec& c);

}  // namespace het
