#include "hetcalc/connection.hpp"

#include "hetcalc/errors.hpp"
#include "hetcalc/gstruct.hpp"

namespace het {

FormMatrix::FormMatrix(int dim, int degree)
    : dim_(dim), degree_(degree), m_(static_cast<std::size_t>(dim * dim), FormExpr(dim, degree)) {}

FormMatrix antisymmetry_defect(const FormMatrix& m) {
  FormMatrix out(m.dim(), m.degree());
  for (int i = 1; i <= m.dim(); ++i)
    for (int j = 1; j <= m.dim(); ++j) out(i, j) = m(i, j) + m(j, i);
  return out;
}

namespace {

// a(ebar_j, ebar_k) for a 2-form.
CoefExpr slot2(const FormExpr& a, int j, int k) {
  if (j == k) return {};
  if (j < k) return a.coeff(mask_of({j, k}));
  return -a.coeff(mask_of({k, j}));
}

}  // namespace

ConnectionForms levi_civita(const CoframeSpec& c) {
  const int n = c.dim();
  ConnectionForms w(n, 1);
  const Rational half(1, 2);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      FormExpr form(n, 1);
      for (int k = 1; k <= n; ++k) {
        CoefExpr v = slot2(c.dbar(i), j, k) - slot2(c.dbar(k), i, j) + slot2(c.dbar(j), k, i);
        if (!v.is_zero()) form.add(mask_of({k}), CoefExpr(half) * v);
      }
      w(i, j) = std::move(form);
    }
  }
  return w;
}

ConnectionForms torsion_connection(const ConnectionForms& lc, const FormExpr& T, int sign) {
  if (T.degree() != 3 || T.dim() != lc.dim()) throw DimensionMismatch("torsion must be a 3-form on the coframe");
  if (sign != 1 && sign != -1) throw BadParams("torsion connection sign must be +1 or -1");
  ConnectionForms w = lc;
  const CoefExpr factor(Rational(-sign, 2));
  for (int i = 1; i <= lc.dim(); ++i) {
    FormExpr ti = interior(i, T);
    for (int j = 1; j <= lc.dim(); ++j) {
      if (i == j) continue;
      // T(ebar_i, ebar_j, .)
      w(i, j) += factor * interior(j, ti);
    }
  }
  return w;
}

std::vector<FormExpr> first_structure_residual(const ConnectionForms& conn, const CoframeSpec& c) {
  std::vector<FormExpr> out;
  for (int i = 1; i <= c.dim(); ++i) {
    FormExpr r = c.dbar(i);
    for (int j = 1; j <= c.dim(); ++j) r += wedge(conn(i, j), FormExpr::basis(c.dim(), {j}));
    out.push_back(std::move(r));
  }
  return out;
}

CurvatureForms curvature(const ConnectionForms& conn, const CoframeSpec& c) {
  const int n = conn.dim();
  if (n != c.dim()) throw DimensionMismatch("connection and coframe dimensions differ");
  CurvatureForms out(n, 2);
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      FormExpr om = exterior_derivative(conn(i, j), c);
      for (int k = 1; k <= n; ++k) {
        if (conn(i, k).is_zero() || conn(k, j).is_zero()) continue;
        om += wedge(conn(i, k), conn(k, j));
      }
      out(i, j) = std::move(om);
    }
  }
  return out;
}

CoefExpr riemann(const CurvatureForms& curv, int i, int j, int k, int l) { return slot2(curv(l, k), i, j); }

FormExpr pontryagin4(const CurvatureForms& curv) {
  const int n = curv.dim();
  if (n < 4) throw DimensionMismatch("Pontryagin 4-form needs dimension at least 4");
  FormExpr p(n, 4);
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) p += wedge(curv(i, j), curv(i, j));
  return p;
}

CoefExpr lambda_minor(const Matrix3& L, int i, int j, int k, int l) {
  auto at = [&](int r, int s) -> const CoefExpr& {
    return L[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(s - 1)];
  };
  return at(i, k) * at(j, l) - at(i, l) * at(j, k);
}

ConnectionForms build_instanton_DLambda(const Matrix3& Lambda, const CoframeSpec& c, bool require_rank1) {
  const int n = c.dim();
  if (n != 5 && n != 7) throw BadParams("D_Lambda is defined in dimensions 5 and 7");
  const int cols = (n == 7) ? 3 : 1;
  if (require_rank1) {
    for (int i = 1; i <= 3; ++i)
      for (int j = i + 1; j <= 3; ++j)
        for (int k = 1; k <= cols; ++k)
          for (int l = k + 1; l <= cols; ++l) {
            CoefExpr m = lambda_minor(Lambda, i, j, k, l);
            if (!m.is_zero()) throw ConstraintViolated("Lambda must have rank at most one: minor " + m.str());
          }
  }
  std::array<FormExpr, 3> row;
  for (int i = 0; i < 3; ++i) {
    row[static_cast<std::size_t>(i)] = FormExpr(n, 1);
    for (int k = 0; k < cols; ++k) {
      row[static_cast<std::size_t>(i)] +=
          Lambda[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] * FormExpr::basis(n, {5 + k});
    }
  }
  // omega = sum_i row_i (x) sigma_i as an so(4)-valued 1-form.
  ConnectionForms w(n, 1);
  auto put = [&](int i, int j, const FormExpr& f) {
    w(i, j) += f;
    w(j, i) -= f;
  };
  put(1, 2, row[0]);
  put(3, 4, -row[0]);
  put(1, 3, row[1]);
  put(2, 4, row[1]);
  put(1, 4, row[2]);
  put(2, 3, -row[2]);
  return w;
}

ConnectionForms build_DB(const Matrix3& B, const CoframeSpec& c) {
  const int n = c.dim();
  std::vector<std::array<CoefExpr, 3>> rows(B.begin(), B.begin() + (n - 4));
  CoframeSpec aux = coframe_from_rows(c.name() + "[B]", rows);
  FormExpr T = structure_torsion(aux);
  return torsion_connection(levi_civita(aux), T, -1);
}

CoefExpr scalar_curvature(const CurvatureForms& curv) {
  CoefExpr s;
  for (int i = 1; i <= curv.dim(); ++i)
    for (int j = 1; j <= curv.dim(); ++j) s += slot2(curv(i, j), i, j);
  return s;
}

}  // namespace het
