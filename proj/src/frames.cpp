#include "hetcalc/frames.hpp"

#include <algorithm>
#include <sstream>

#include "hetcalc/errors.hpp"

namespace het {

Matrix3 symbolic_matrix(std::string_view prefix) {
  Matrix3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      m[i][j] = CoefExpr::param(std::string(prefix) + std::to_string(i + 1) + std::to_string(j + 1));
  return m;
}

Matrix3 rational_matrix(const std::array<std::array<long, 3>, 3>& entries) {
  Matrix3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = CoefExpr(entries[i][j]);
  return m;
}

Matrix3 identity_matrix() { return rational_matrix({{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}); }

Matrix3 zero_matrix() { return Matrix3{}; }

Matrix3 operator*(const Matrix3& a, const Matrix3& b) {
  Matrix3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) m[i][j] += a[i][k] * b[k][j];
  return m;
}

Matrix3 transpose(const Matrix3& a) {
  Matrix3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = a[j][i];
  return m;
}

CoefExpr frob_norm_sq(const Matrix3& a) {
  CoefExpr s;
  for (const auto& row : a)
    for (const auto& x : row) s += x * x;
  return s;
}

std::optional<std::array<std::array<Rational, 3>, 3>> constant_entries(const Matrix3& a) {
  std::array<std::array<Rational, 3>, 3> out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (!a[i][j].is_constant()) return std::nullopt;
      out[i][j] = a[i][j].constant_value();
    }
  return out;
}

int rank(const Matrix3& a) {
  auto vals = constant_entries(a);
  if (!vals) throw BadParams("rank of a matrix with symbolic entries");
  auto m = *vals;
  int r = 0;
  for (int col = 0; col < 3 && r < 3; ++col) {
    int piv = -1;
    for (int i = r; i < 3; ++i)
      if (m[i][col] != 0) piv = i;
    if (piv < 0) continue;
    std::swap(m[piv], m[r]);
    for (int i = 0; i < 3; ++i) {
      if (i == r || m[i][col] == 0) continue;
      Rational f = m[i][col] / m[r][col];
      for (int k = 0; k < 3; ++k) m[i][k] -= f * m[r][k];
    }
    ++r;
  }
  return r;
}

std::string matrix_str(const Matrix3& a) {
  std::ostringstream os;
  os << '[';
  for (int i = 0; i < 3; ++i) {
    os << (i ? ", [" : "[");
    for (int j = 0; j < 3; ++j) os << (j ? ", " : "") << a[i][j].str();
    os << ']';
  }
  os << ']';
  return os.str();
}

FormExpr sigma_form(int dim, int i) {
  switch (i) {
    case 1: return FormExpr::basis(dim, {1, 2}) - FormExpr::basis(dim, {3, 4});
    case 2: return FormExpr::basis(dim, {1, 3}) + FormExpr::basis(dim, {2, 4});
    case 3: return FormExpr::basis(dim, {1, 4}) - FormExpr::basis(dim, {2, 3});
    default: throw BadParams("sigma index must be 1..3");
  }
}

FormExpr omega_form(int dim, int i) {
  switch (i) {
    case 1: return FormExpr::basis(dim, {1, 2}) + FormExpr::basis(dim, {3, 4});
    case 2: return FormExpr::basis(dim, {1, 3}) - FormExpr::basis(dim, {2, 4});
    case 3: return FormExpr::basis(dim, {1, 4}) + FormExpr::basis(dim, {2, 3});
    default: throw BadParams("omega index must be 1..3");
  }
}

// ---------------------------------------------------------------------------

FrameId FrameId::quaternionic_heisenberg() {
  FrameId id;
  id.kind = FrameKind::QuaternionicHeisenberg;
  return id;
}

FrameId FrameId::k_a(Matrix3 A) {
  FrameId id;
  id.kind = FrameKind::KA;
  id.A = std::move(A);
  return id;
}

FrameId FrameId::h5(CoefExpr a, CoefExpr b) {
  FrameId id;
  id.kind = FrameKind::H5;
  id.a = std::move(a);
  id.b = std::move(b);
  return id;
}

FrameId FrameId::h3(CoefExpr a) {
  FrameId id;
  id.kind = FrameKind::H3;
  id.a = std::move(a);
  return id;
}

FrameId FrameId::h21(CoefExpr a1, CoefExpr a2, CoefExpr a3) {
  FrameId id;
  id.kind = FrameKind::H21;
  id.ai = {std::move(a1), std::move(a2), std::move(a3)};
  return id;
}

FrameId FrameId::eps6(CoefExpr a, CoefExpr b, Rational eps) {
  FrameId id;
  id.kind = FrameKind::ContractionEps6D;
  id.a = std::move(a);
  id.b = std::move(b);
  id.eps = std::move(eps);
  return id;
}

FrameId FrameId::eps5(CoefExpr a1, CoefExpr a2, CoefExpr a3, Rational eps) {
  FrameId id;
  id.kind = FrameKind::ContractionEps5D;
  id.ai = {std::move(a1), std::move(a2), std::move(a3)};
  id.eps = std::move(eps);
  return id;
}

std::string FrameId::name() const {
  switch (kind) {
    case FrameKind::QuaternionicHeisenberg: return "gH";
    case FrameKind::KA: return "kA";
    case FrameKind::H5: return "h5";
    case FrameKind::H3: return "h3";
    case FrameKind::H21: return "h21";
    case FrameKind::ContractionEps6D: return "eps6";
    case FrameKind::ContractionEps5D: return "eps5";
  }
  return "?";
}

namespace {

using Row = std::array<CoefExpr, 3>;

std::vector<Row> matrix_rows(const Matrix3& m) { return {m[0], m[1], m[2]}; }

Matrix3 eps6_matrix(const FrameId& id, const Rational& eps) {
  Matrix3 m;
  m[0] = {CoefExpr{}, id.b, CoefExpr{}};
  m[1] = {id.a, CoefExpr{}, -id.b};
  m[2] = {CoefExpr{}, CoefExpr{}, CoefExpr(eps)};
  return m;
}

Matrix3 eps5_matrix(const FrameId& id, const Rational& eps) {
  Matrix3 m;
  m[0] = id.ai;
  m[1] = {CoefExpr{}, CoefExpr(eps), CoefExpr{}};
  m[2] = {CoefExpr{}, CoefExpr{}, CoefExpr(eps)};
  return m;
}

}  // namespace

StructureRows structure_rows(const FrameId& id) {
  StructureRows out;
  switch (id.kind) {
    case FrameKind::QuaternionicHeisenberg:
      out.rows = matrix_rows(identity_matrix());
      break;
    case FrameKind::KA:
      out.rows = matrix_rows(id.A);
      break;
    case FrameKind::H5:
      out.rows = {Row{CoefExpr{}, id.b, CoefExpr{}}, Row{id.a, CoefExpr{}, -id.b}};
      break;
    case FrameKind::H3:
      out.rows = {Row{}, Row{id.a, CoefExpr{}, CoefExpr{}}};
      break;
    case FrameKind::H21:
      if (id.ai[0].is_zero() && id.ai[1].is_zero() && id.ai[2].is_zero()) {
        throw BadParams("h(2,1) needs (a1,a2,a3) != 0");
      }
      out.rows = {id.ai};
      break;
    case FrameKind::ContractionEps6D:
      if (id.eps < 0) throw BadParams("contraction parameter must be nonnegative");
      out.rows = matrix_rows(eps6_matrix(id, id.eps));
      break;
    case FrameKind::ContractionEps5D:
      if (id.eps < 0) throw BadParams("contraction parameter must be nonnegative");
      out.rows = matrix_rows(eps5_matrix(id, id.eps));
      break;
  }
  out.dim = 4 + static_cast<int>(out.rows.size());
  return out;
}

CoframeSpec coframe_from_rows(std::string name, const std::vector<std::array<CoefExpr, 3>>& rows) {
  const int dim = 4 + static_cast<int>(rows.size());
  std::vector<FormExpr> lie(static_cast<std::size_t>(dim), FormExpr(dim, 2));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < 3; ++j) {
      for (const auto& t : rows[i][static_cast<std::size_t>(j)].terms()) {
        if (t.mono.expf != 0 || t.mono.factors.end() !=
                                    std::find_if(t.mono.factors.begin(), t.mono.factors.end(),
                                                 [](const auto& f) { return f.first.is_jet(); })) {
          throw BadParams("structure constants must not depend on the dilaton");
        }
      }
      lie[4 + i] += rows[i][static_cast<std::size_t>(j)] * sigma_form(dim, j + 1);
    }
  }
  std::vector<int> weights(static_cast<std::size_t>(dim), 0);
  for (int k = 0; k < 4; ++k) weights[static_cast<std::size_t>(k)] = 1;
  return CoframeSpec(std::move(name), dim, std::move(lie), std::move(weights));
}

CoframeSpec build_coframe(const FrameId& id) {
  if (id.kind == FrameKind::ContractionEps6D || id.kind == FrameKind::ContractionEps5D) {
    return contract_family(id, id.eps);
  }
  auto rows = structure_rows(id);
  return coframe_from_rows(id.name(), rows.rows);
}

IntegrabilityResult integrability_check(std::span<const FormExpr> lie_differentials) {
  IntegrabilityResult out;
  out.residuals = lie_d_squared(lie_differentials);
  for (const auto& r : out.residuals) out.pass = out.pass && r.is_zero();
  return out;
}

IntegrabilityResult integrability_check(const CoframeSpec& c) {
  return integrability_check(std::span<const FormExpr>(c.lie_differentials()));
}

CoframeSpec contract_family(const FrameId& id, const Rational& eps) {
  if (eps < 0) throw BadParams("contraction parameter must be nonnegative");
  Matrix3 m;
  std::vector<int> dropped;
  switch (id.kind) {
    case FrameKind::ContractionEps6D:
      m = eps6_matrix(id, eps);
      dropped = {7};
      break;
    case FrameKind::ContractionEps5D:
      m = eps5_matrix(id, eps);
      dropped = {6, 7};
      break;
    default:
      throw BadParams("contract_family needs a contraction family id");
  }
  std::vector<Row> rows = matrix_rows(m);
  if (eps > 0) return coframe_from_rows(id.name(), rows);
  // The degenerate rows are identically zero at eps = 0; drop their legs.
  const std::size_t kept = rows.size() - dropped.size();
  for (std::size_t i = kept; i < rows.size(); ++i)
    for (const auto& x : rows[i])
      if (!x.is_zero()) throw BadParams("dropped leg carries a nonzero structure constant");
  rows.resize(kept);
  return coframe_from_rows(id.name(), rows).with_dropped_legs(dropped);
}

std::vector<std::array<CoefExpr, 3>> rows_of(const CoframeSpec& c) {
  std::vector<Row> rows;
  for (int k = 5; k <= c.dim(); ++k) {
    const FormExpr& d = c.lie_differential(k);
    Row r{d.coeff({1, 2}), d.coeff({1, 3}), d.coeff({1, 4})};
    FormExpr rebuilt(c.dim(), 2);
    for (int j = 0; j < 3; ++j) rebuilt += r[static_cast<std::size_t>(j)] * sigma_form(c.dim(), j + 1);
    if (!(rebuilt == d)) throw BadParams("coframe leg " + std::to_string(k) + " is not of K_A type");
    rows.push_back(r);
  }
  for (int k = 1; k <= 4; ++k)
    if (!c.lie_differential(k).is_zero()) throw BadParams("horizontal legs of a K_A coframe are closed");
  return rows;
}

}  // namespace het
