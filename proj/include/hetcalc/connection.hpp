#pragma once

// Metric connections on a barred coframe.
//
// Conventions: nabla_X ebar_j = omega^s_j(X) ebar_s, so that
// omega^i_j(ebar_k) = g(nabla_{ebar_k} ebar_j, ebar_i);
// Omega^i_j = d omega^i_j + omega^i_k ^ omega^k_j;
// R(X,Y,Z,U) = g(R(X,Y)Z, U), i.e. R(i,j,k,l) = Omega^l_k(ebar_i, ebar_j).

#include <vector>

#include "hetcalc/exterior.hpp"
#include "hetcalc/frames.hpp"

namespace het {

/// Square matrix of forms of a fixed degree, 1-based indices.
class FormMatrix {
 public:
  FormMatrix() = default;
  FormMatrix(int dim, int degree);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  const FormExpr& operator()(int i, int j) const { return m_[idx(i, j)]; }
  FormExpr& operator()(int i, int j) { return m_[idx(i, j)]; }

  friend bool operator==(const FormMatrix& a, const FormMatrix& b) { return a.m_ == b.m_; }

 private:
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>((i - 1) * dim_ + (j - 1)); }
  int dim_ = 0;
  int degree_ = 0;
  std::vector<FormExpr> m_;
};

using ConnectionForms = FormMatrix;  // 1-forms
using CurvatureForms = FormMatrix;   // 2-forms

/// Entrywise omega^i_j + omega^j_i; all zero for a metric connection.
FormMatrix antisymmetry_defect(const FormMatrix& m);

ConnectionForms levi_civita(const CoframeSpec& c);

/// The metric connection nabla^g + (sign/2) T with totally skew torsion T:
/// g(nabla_X Y, Z) = g(nabla^g_X Y, Z) + (sign/2) T(X, Y, Z), hence
/// omega^i_j(ebar_k) = omega^g^i_j(ebar_k) - (sign/2) T(ebar_i, ebar_j, ebar_k).
ConnectionForms torsion_connection(const ConnectionForms& lc, const FormExpr& T, int sign);

/// dē^i + sum_j omega^i_j ^ ē^j for each i (the torsion 2-forms of the connection).
std::vector<FormExpr> first_structure_residual(const ConnectionForms& conn, const CoframeSpec& c);

CurvatureForms curvature(const ConnectionForms& conn, const CoframeSpec& c);

/// R(i,j,k,l) = Omega^l_k(ebar_i, ebar_j).
CoefExpr riemann(const CurvatureForms& curv, int i, int j, int k, int l);

/// 8 pi^2 p_1 = sum_{i<j} Omega^i_j ^ Omega^i_j.
FormExpr pontryagin4(const CurvatureForms& curv);

/// The quaternionic-block connection D_Lambda. In dimension 7 the rows are
/// lambda_i1 ebar^5 + lambda_i2 ebar^6 + lambda_i3 ebar^7; in dimension 5 only
/// the first column is used. With `require_rank1`, throws ConstraintViolated unless
/// every 2x2 minor over the used columns vanishes.
ConnectionForms build_instanton_DLambda(const Matrix3& Lambda, const CoframeSpec& c, bool require_rank1 = false);

/// 2x2 minors Lambda_{ijkl} = l_ik l_jl - l_il l_jk, i<j, k<l.
CoefExpr lambda_minor(const Matrix3& Lambda, int i, int j, int k, int l);

/// The minus connection of the auxiliary coframe whose structure rows are
/// those of B (first dim-4 rows), expressed in the barred basis.
ConnectionForms build_DB(const Matrix3& B, const CoframeSpec& c);

/// s = sum_{i,j} Omega^i_j(ebar_i, ebar_j).
CoefExpr scalar_curvature(const CurvatureForms& curv);

}  // namespace het
