#include "frobmod/bimodules.hpp"

#include <utility>

namespace frobmod::bimodules {

using exactla::hstack;
using exactla::kron;
using exactla::vstack;

namespace {

// row-major vectorization; matrices over a hom space become coordinate rows
Mat vec_row(const Mat& m) {
  Mat v(1, m.rows() * m.cols(), m.modulus());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) v.at(0, i * m.cols() + j) = m.at(i, j);
  return v;
}

Mat vec_rows(const std::vector<Mat>& ms, int cells, std::uint32_t p) {
  Mat out(int(ms.size()), cells, p);
  for (std::size_t t = 0; t < ms.size(); ++t) {
    Mat v = vec_row(ms[t]);
    for (int j = 0; j < cells; ++j) out.at(int(t), j) = v.at(0, j);
  }
  return out;
}

Mat unvec(const Mat& row, int r, int c) {
  Mat m(r, c, row.modulus());
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m.at(i, j) = row.at(0, i * c + j);
  return m;
}

Mat coords_of(const Mat& basis_vecs, const Mat& v, const char* what) {
  exactla::SolveResult s = exactla::solve_left(basis_vecs, v);
  if (!s.consistent) throw BimoduleError(std::string(what) + " lies outside the computed basis");
  return s.particular;
}

// matrices of an operation on a hom space, expressed in basis coordinates
Mat transport(const Mat& basis_vecs, const std::vector<Mat>& images, int cells, std::uint32_t p) {
  Mat rows = vec_rows(images, cells, p);
  return coords_of(basis_vecs, rows, "transported operator image");
}

// common quotient machinery for tensor products over a middle algebra; rows
// for algebra generators span the whole relation space, since the relation
// block of a product is a sum of left multiples of the factor blocks
struct RawQuotient {
  Mat rel;
  Mat proj;
  Mat sect;
};

RawQuotient tensor_quotient(int dx, int dm, std::uint32_t p, const std::vector<Mat>& right_on_x,
                            const std::vector<Mat>& left_on_m) {
  const int raw = dx * dm;
  RawQuotient out{Mat(0, raw, p), Mat(raw, 0, p), Mat(0, raw, p)};
  if (raw == 0) return out;
  Mat ix = Mat::identity(dx, p);
  Mat im = Mat::identity(dm, p);
  Mat rel(0, raw, p);
  for (std::size_t g = 0; g < right_on_x.size(); ++g)
    rel = vstack(rel, kron(right_on_x[g], im) - kron(ix, left_on_m[g]));
  rel = exactla::row_basis(rel);
  Mat comp = exactla::complement_rows(rel, raw, p);
  Mat full = exactla::invert(vstack(rel, comp));
  const int q = comp.rows();
  Mat proj(raw, q, p);
  for (int i = 0; i < raw; ++i)
    for (int j = 0; j < q; ++j) proj.at(i, j) = full.at(i, rel.rows() + j);
  out.rel = rel;
  out.proj = proj;
  out.sect = comp;
  return out;
}

// descends a raw-space operator through the quotient, insisting that it
// preserves the relation subspace
Mat descend(const RawQuotient& qt, const Mat& op, const char* what) {
  if (qt.rel.rows() > 0 && !(qt.rel * op * qt.proj).is_zero())
    throw BimoduleError(std::string(what) + " does not preserve the tensor relations");
  return qt.sect * op * qt.proj;
}

void check_op_compat(const AlgebraPtr& x, const AlgebraPtr& a) {
  if (x->field.p != a->field.p || x->dim != a->dim)
    throw modules::AlgebraMismatch("opposite algebra has wrong shape");
  for (int i = 0; i < a->dim; ++i)
    for (int j = 0; j < a->dim; ++j)
      if (x->product_row(i, j) != a->product_row(j, i))
        throw modules::AlgebraMismatch("algebra is not the expected opposite");
}

}  // namespace

Mat Bimodule::lact(const Mat& elt) const {
  Mat out(dim, dim, left_alg->field.p);
  for (int i = 0; i < left_alg->dim; ++i)
    if (elt.at(0, i) != 0) out = out + left_action[i].scaled(elt.at(0, i));
  return out;
}

Mat Bimodule::ract(const Mat& elt) const {
  Mat out(dim, dim, right_alg->field.p);
  for (int j = 0; j < right_alg->dim; ++j)
    if (elt.at(0, j) != 0) out = out + right_action[j].scaled(elt.at(0, j));
  return out;
}

ValidationReport validate_bimodule(const Bimodule& m) {
  ValidationReport rep;
  auto flag = [&rep](const std::string& axiom, const std::string& witness) {
    rep.issues.push_back({axiom, witness});
  };
  const AlgebraPtr& a = m.left_alg;
  const AlgebraPtr& b = m.right_alg;
  if (!a || !b) {
    flag("algebras", "missing an algebra");
    return rep;
  }
  if (a->field.p != b->field.p) {
    flag("field", "left and right algebras live over different fields");
    return rep;
  }
  if (int(m.left_action.size()) != a->dim || int(m.right_action.size()) != b->dim) {
    flag("shape", "one action matrix per algebra basis element is required");
    return rep;
  }
  for (const Mat& l : m.left_action)
    if (l.rows() != m.dim || l.cols() != m.dim) {
      flag("shape", "left action matrices must be square of the module dimension");
      return rep;
    }
  for (const Mat& r : m.right_action)
    if (r.rows() != m.dim || r.cols() != m.dim) {
      flag("shape", "right action matrices must be square of the module dimension");
      return rep;
    }
  int bad = 0;
  for (int i = 0; i < a->dim && bad < 8; ++i)
    for (int j = 0; j < a->dim && bad < 8; ++j)
      if (m.lact(a->product_row(i, j)) != m.left_action[j] * m.left_action[i]) {
        flag("left action", "law fails at basis pair (" + std::to_string(i + 1) + "," +
                                std::to_string(j + 1) + ")");
        ++bad;
      }
  bad = 0;
  for (int i = 0; i < b->dim && bad < 8; ++i)
    for (int j = 0; j < b->dim && bad < 8; ++j)
      if (m.ract(b->product_row(i, j)) != m.right_action[i] * m.right_action[j]) {
        flag("right action", "law fails at basis pair (" + std::to_string(i + 1) + "," +
                                 std::to_string(j + 1) + ")");
        ++bad;
      }
  if (m.dim > 0) {
    if (!m.lact(a->unit).is_identity()) flag("left unit", "unit does not act as the identity");
    if (!m.ract(b->unit).is_identity()) flag("right unit", "unit does not act as the identity");
  }
  bad = 0;
  for (int i = 0; i < a->dim && bad < 8; ++i)
    for (int j = 0; j < b->dim && bad < 8; ++j)
      if (m.left_action[i] * m.right_action[j] != m.right_action[j] * m.left_action[i]) {
        flag("commuting actions", "left basis " + std::to_string(i + 1) +
                                      " does not commute with right basis " +
                                      std::to_string(j + 1));
        ++bad;
      }
  return rep;
}

Bimodule from_actions(const AlgebraPtr& a, const AlgebraPtr& b, int dim,
                      std::vector<Mat> left_action, std::vector<Mat> right_action) {
  Bimodule m{a, b, dim, std::move(left_action), std::move(right_action)};
  ValidationReport rep = validate_bimodule(m);
  if (rep.ok()) return m;
  bool only_commuting = true;
  for (const auto& issue : rep.issues)
    if (issue.axiom != "commuting actions") only_commuting = false;
  if (only_commuting) throw ActionsDoNotCommute(rep.issues.front().witness);
  throw BimoduleError(rep.issues.front().axiom + ": " + rep.issues.front().witness);
}

Bimodule zero_bimodule(const AlgebraPtr& a, const AlgebraPtr& b) {
  Bimodule m{a, b, 0, {}, {}};
  m.left_action.assign(a->dim, Mat(0, 0, a->field.p));
  m.right_action.assign(b->dim, Mat(0, 0, b->field.p));
  return m;
}

Bimodule regular_bimodule(const AlgebraPtr& a) {
  return Bimodule{a, a, a->dim, a->left_mult, a->right_mult};
}

Bimodule twist(const AlgebraPtr& a, const Mat& phi) {
  if (phi.rows() != a->dim || phi.cols() != a->dim)
    throw NotAutomorphism("twist matrix has the wrong shape");
  try {
    (void)exactla::invert(phi);
  } catch (const exactla::SingularError&) {
    throw NotAutomorphism("twist matrix is singular");
  }
  if (a->dim > 0 && a->unit * phi != a->unit) throw NotAutomorphism("twist does not fix the unit");
  for (int i = 0; i < a->dim; ++i)
    for (int j = 0; j < a->dim; ++j)
      if (a->mul(phi.row(i), phi.row(j)) != a->product_row(i, j) * phi)
        throw NotAutomorphism("twist is not multiplicative at basis pair (" +
                              std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
  Bimodule m{a, a, a->dim, a->left_mult, {}};
  m.right_action.reserve(a->dim);
  for (int j = 0; j < a->dim; ++j) m.right_action.push_back(a->rmul_matrix(phi.row(j)));
  return m;
}

Bimodule quotient_by_ideal(const AlgebraPtr& a, const Mat& ideal_rows, const AlgebraPtr& target) {
  const std::uint32_t p = a->field.p;
  if (p != target->field.p) throw modules::AlgebraMismatch("quotient over a different field");
  if (ideal_rows.rows() > 0 && ideal_rows.cols() != a->dim)
    throw BimoduleError("ideal rows have the wrong width");
  Mat w = exactla::row_basis(ideal_rows);
  for (int r = 0; r < w.rows(); ++r)
    for (const Mat& g : a->generators) {
      if (!exactla::in_row_space(w, a->mul(w.row(r), g)) ||
          !exactla::in_row_space(w, a->mul(g, w.row(r))))
        throw BimoduleError("rows do not span a two-sided ideal");
    }
  Mat comp = exactla::complement_rows(w, a->dim, p);
  const int q = comp.rows();
  if (q != target->dim) throw BimoduleError("target dimension does not match the quotient");
  Mat full = exactla::invert(vstack(w, comp));
  Mat proj(a->dim, q, p);
  for (int i = 0; i < a->dim; ++i)
    for (int j = 0; j < q; ++j) proj.at(i, j) = full.at(i, w.rows() + j);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j)
      if (a->mul(comp.row(i), comp.row(j)) * proj != target->product_row(i, j))
        throw BimoduleError("target does not match the canonical quotient presentation");
  if (q > 0 && a->unit * proj != target->unit)
    throw BimoduleError("target unit does not match the quotient unit");
  Bimodule m{a, target, q, {}, {}};
  m.left_action.reserve(a->dim);
  for (int i = 0; i < a->dim; ++i) {
    if (w.rows() > 0 && !(w * a->left_mult[i] * proj).is_zero())
      throw BimoduleError("ideal is not stable under left multiplication");
    m.left_action.push_back(comp * a->left_mult[i] * proj);
  }
  m.right_action.reserve(q);
  for (int j = 0; j < q; ++j) {
    Mat rm = a->rmul_matrix(comp.row(j));
    if (w.rows() > 0 && !(w * rm * proj).is_zero())
      throw BimoduleError("ideal is not stable under right multiplication");
    m.right_action.push_back(comp * rm * proj);
  }
  return m;
}

Bimodule corner_slice(const Bimodule& m, const algebra::CornerData& left_corner,
                      const algebra::CornerData& right_corner) {
  if (left_corner.incl.cols() != m.left_alg->dim || right_corner.incl.cols() != m.right_alg->dim)
    throw modules::AlgebraMismatch("corner data does not match the bimodule algebras");
  Mat span = m.lact(left_corner.eprime) * m.ract(right_corner.eprime);
  Mat w = exactla::row_basis(span);
  const int d = w.rows();
  Bimodule out{left_corner.alg, right_corner.alg, d, {}, {}};
  out.left_action.reserve(left_corner.alg->dim);
  for (int i = 0; i < left_corner.alg->dim; ++i) {
    Mat op = m.lact(left_corner.incl.row(i));
    out.left_action.push_back(coords_of(w, w * op, "corner slice left image"));
  }
  out.right_action.reserve(right_corner.alg->dim);
  for (int j = 0; j < right_corner.alg->dim; ++j) {
    Mat op = m.ract(right_corner.incl.row(j));
    out.right_action.push_back(coords_of(w, w * op, "corner slice right image"));
  }
  return out;
}

Bimodule external(const AlgebraPtr& a, const Representation& x, const Representation& y) {
  check_op_compat(x.alg, a);
  const std::uint32_t p = a->field.p;
  Mat ix = Mat::identity(x.dim, p);
  Mat iy = Mat::identity(y.dim, p);
  Bimodule m{a, y.alg, x.dim * y.dim, {}, {}};
  m.left_action.reserve(a->dim);
  for (int i = 0; i < a->dim; ++i) m.left_action.push_back(kron(x.action[i], iy));
  m.right_action.reserve(y.alg->dim);
  for (int j = 0; j < y.alg->dim; ++j) m.right_action.push_back(kron(ix, y.action[j]));
  return m;
}

BimoduleSum direct_sum_bimodules(const std::vector<Bimodule>& parts) {
  if (parts.empty()) throw BimoduleError("direct sum needs at least one summand");
  const AlgebraPtr& a = parts.front().left_alg;
  const AlgebraPtr& b = parts.front().right_alg;
  const std::uint32_t p = a->field.p;
  int total = 0;
  for (const Bimodule& part : parts) {
    if (!algebra::same_structure(*part.left_alg, *a) ||
        !algebra::same_structure(*part.right_alg, *b))
      throw modules::AlgebraMismatch("direct sum parts");
    total += part.dim;
  }
  BimoduleSum out;
  out.bim = Bimodule{a, b, total, {}, {}};
  out.bim.left_action.assign(a->dim, Mat(total, total, p));
  out.bim.right_action.assign(b->dim, Mat(total, total, p));
  int offset = 0;
  for (const Bimodule& part : parts) {
    Mat embed(part.dim, total, p);
    Mat project(total, part.dim, p);
    for (int i = 0; i < part.dim; ++i) {
      embed.at(i, offset + i) = 1;
      project.at(offset + i, i) = 1;
    }
    for (int g = 0; g < a->dim; ++g)
      for (int i = 0; i < part.dim; ++i)
        for (int j = 0; j < part.dim; ++j)
          out.bim.left_action[g].at(offset + i, offset + j) = part.left_action[g].at(i, j);
    for (int g = 0; g < b->dim; ++g)
      for (int i = 0; i < part.dim; ++i)
        for (int j = 0; j < part.dim; ++j)
          out.bim.right_action[g].at(offset + i, offset + j) = part.right_action[g].at(i, j);
    out.embed.push_back(embed);
    out.project.push_back(project);
    offset += part.dim;
  }
  return out;
}

Representation right_restriction(const Bimodule& m) {
  return Representation{m.right_alg, m.dim, m.right_action};
}

Representation left_restriction(const Bimodule& m, const AlgebraPtr& op) {
  check_op_compat(op, m.left_alg);
  return Representation{op, m.dim, m.left_action};
}

Representation as_module_over_enveloping(const Bimodule& m, const AlgebraPtr& env) {
  const int da = m.left_alg->dim, db = m.right_alg->dim;
  if (env->dim != da * db || env->field.p != m.left_alg->field.p)
    throw modules::AlgebraMismatch("enveloping algebra has the wrong shape");
  Representation rep{env, m.dim, {}};
  rep.action.reserve(env->dim);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < db; ++j) rep.action.push_back(m.left_action[i] * m.right_action[j]);
  return rep;
}

Bimodule from_enveloping_module(const Representation& rep, const AlgebraPtr& a,
                                const AlgebraPtr& b) {
  if (rep.alg->dim != a->dim * b->dim)
    throw modules::AlgebraMismatch("module is not over the enveloping algebra");
  Bimodule m{a, b, rep.dim, {}, {}};
  m.left_action.reserve(a->dim);
  for (int i = 0; i < a->dim; ++i) m.left_action.push_back(rep.act(kron(a->basis_vec(i), b->unit)));
  m.right_action.reserve(b->dim);
  for (int j = 0; j < b->dim; ++j)
    m.right_action.push_back(rep.act(kron(a->unit, b->basis_vec(j))));
  return m;
}

std::vector<Mat> bimodule_hom_space(const Bimodule& m, const Bimodule& n) {
  if (!algebra::same_structure(*m.left_alg, *n.left_alg) ||
      !algebra::same_structure(*m.right_alg, *n.right_alg))
    throw modules::AlgebraMismatch("bimodule hom over different algebra pairs");
  AlgebraPtr env = algebra::enveloping(m.left_alg, m.right_alg);
  return modules::hom_space(as_module_over_enveloping(m, env),
                            as_module_over_enveloping(n, env));
}

modules::IsoResult bimodule_iso_test(const Bimodule& m, const Bimodule& n, std::mt19937_64& rng) {
  if (!algebra::same_structure(*m.left_alg, *n.left_alg) ||
      !algebra::same_structure(*m.right_alg, *n.right_alg))
    throw modules::AlgebraMismatch("bimodule comparison over different algebra pairs");
  AlgebraPtr env = algebra::enveloping(m.left_alg, m.right_alg);
  return modules::iso_test(as_module_over_enveloping(m, env), as_module_over_enveloping(n, env),
                           rng);
}

TensorModule tensor(const Representation& x, const Bimodule& m) {
  if (!algebra::same_structure(*x.alg, *m.left_alg))
    throw modules::AlgebraMismatch("tensor over mismatched algebras");
  const std::uint32_t p = m.left_alg->field.p;
  std::vector<Mat> rx, lm;
  for (const Mat& g : m.left_alg->generators) {
    rx.push_back(x.act(g));
    lm.push_back(m.lact(g));
  }
  RawQuotient qt = tensor_quotient(x.dim, m.dim, p, rx, lm);
  TensorModule out;
  out.rel = qt.rel;
  out.proj = qt.proj;
  out.sect = qt.sect;
  out.rep.alg = m.right_alg;
  out.rep.dim = qt.sect.rows();
  Mat ix = Mat::identity(x.dim, p);
  out.rep.action.reserve(m.right_alg->dim);
  for (int j = 0; j < m.right_alg->dim; ++j)
    out.rep.action.push_back(descend(qt, kron(ix, m.right_action[j]), "tensor right action"));
  return out;
}

Mat tensor_hom(const Mat& f, const TensorModule& tx, const TensorModule& txp) {
  const std::uint32_t p = tx.proj.modulus();
  if (f.rows() == 0) return Mat(tx.rep.dim, txp.rep.dim, p);
  const int leg = tx.rel.cols() / f.rows();
  Mat raw_map = kron(f, Mat::identity(leg, p));
  if (tx.rel.rows() > 0 && !(tx.rel * raw_map * txp.proj).is_zero())
    throw BimoduleError("map does not descend to the tensor quotient");
  return tx.sect * raw_map * txp.proj;
}

TensorBimodule tensor_bimodule(const Bimodule& m, const Bimodule& n) {
  if (!algebra::same_structure(*m.right_alg, *n.left_alg))
    throw modules::AlgebraMismatch("tensor over mismatched middle algebras");
  const std::uint32_t p = m.left_alg->field.p;
  std::vector<Mat> rx, lm;
  for (const Mat& g : m.right_alg->generators) {
    rx.push_back(m.ract(g));
    lm.push_back(n.lact(g));
  }
  RawQuotient qt = tensor_quotient(m.dim, n.dim, p, rx, lm);
  TensorBimodule out;
  out.rel = qt.rel;
  out.proj = qt.proj;
  out.sect = qt.sect;
  out.bim = Bimodule{m.left_alg, n.right_alg, qt.sect.rows(), {}, {}};
  Mat im = Mat::identity(m.dim, p);
  Mat in = Mat::identity(n.dim, p);
  out.bim.left_action.reserve(m.left_alg->dim);
  for (int i = 0; i < m.left_alg->dim; ++i)
    out.bim.left_action.push_back(descend(qt, kron(m.left_action[i], in), "tensor left action"));
  out.bim.right_action.reserve(n.right_alg->dim);
  for (int j = 0; j < n.right_alg->dim; ++j)
    out.bim.right_action.push_back(descend(qt, kron(im, n.right_action[j]), "tensor right action"));
  return out;
}

HomModule hom_functor(const Bimodule& p_bim, const Representation& n) {
  if (!algebra::same_structure(*p_bim.right_alg, *n.alg))
    throw modules::AlgebraMismatch("hom over mismatched algebras");
  const std::uint32_t p = n.alg->field.p;
  const int dp = p_bim.dim, dn = n.dim;
  HomModule out;
  out.rep.alg = p_bim.left_alg;
  if (dp == 0 || dn == 0) {
    out.rep.dim = 0;
    out.rep.action.assign(p_bim.left_alg->dim, Mat(0, 0, p));
    return out;
  }
  // solves rho_P(g) H = H rho_N(g) over the right algebra generators
  const auto& gens = p_bim.right_alg->generators;
  Mat sys(dp * dn, int(gens.size()) * dp * dn, p);
  for (std::size_t g = 0; g < gens.size(); ++g) {
    Mat ap = p_bim.ract(gens[g]);
    Mat an = n.act(gens[g]);
    const int base = int(g) * dp * dn;
    for (int i = 0; i < dp; ++i)
      for (int j = 0; j < dn; ++j) {
        const int col = base + i * dn + j;
        for (int k = 0; k < dp; ++k)
          sys.at(k * dn + j, col) = exactla::add_mod(sys.at(k * dn + j, col), ap.at(i, k), p);
        for (int l = 0; l < dn; ++l)
          sys.at(i * dn + l, col) = exactla::sub_mod(sys.at(i * dn + l, col), an.at(l, j), p);
      }
  }
  Mat basis_rows = exactla::left_kernel(sys);
  for (int t = 0; t < basis_rows.rows(); ++t) out.basis.push_back(unvec(basis_rows.row(t), dp, dn));
  const int r = int(out.basis.size());
  out.rep.dim = r;
  if (r == 0) {
    out.rep.action.assign(p_bim.left_alg->dim, Mat(0, 0, p));
    return out;
  }
  Mat bv = vec_rows(out.basis, dp * dn, p);
  out.rep.action.reserve(p_bim.left_alg->dim);
  for (int i = 0; i < p_bim.left_alg->dim; ++i) {
    std::vector<Mat> images;
    for (const Mat& h : out.basis) images.push_back(p_bim.left_action[i] * h);
    out.rep.action.push_back(transport(bv, images, dp * dn, p));
  }
  return out;
}

DualData dual(const Bimodule& m, DualSide side) {
  const std::uint32_t p = m.left_alg->field.p;
  DualData out;
  if (side == DualSide::Right) {
    const AlgebraPtr& b = m.right_alg;
    out.basis = modules::hom_space(right_restriction(m), modules::regular_module(b));
    const int r = int(out.basis.size());
    out.bim = Bimodule{b, m.left_alg, r, {}, {}};
    if (r == 0) {
      out.bim.left_action.assign(b->dim, Mat(0, 0, p));
      out.bim.right_action.assign(m.left_alg->dim, Mat(0, 0, p));
      return out;
    }
    Mat bv = vec_rows(out.basis, m.dim * b->dim, p);
    for (int j = 0; j < b->dim; ++j) {
      std::vector<Mat> images;
      for (const Mat& h : out.basis) images.push_back(h * b->left_mult[j]);
      out.bim.left_action.push_back(transport(bv, images, m.dim * b->dim, p));
    }
    for (int i = 0; i < m.left_alg->dim; ++i) {
      std::vector<Mat> images;
      for (const Mat& h : out.basis) images.push_back(m.left_action[i] * h);
      out.bim.right_action.push_back(transport(bv, images, m.dim * b->dim, p));
    }
    return out;
  }
  const AlgebraPtr& a = m.left_alg;
  AlgebraPtr op = algebra::opposite(a);
  out.basis = modules::hom_space(left_restriction(m, op), modules::regular_module(op));
  const int r = int(out.basis.size());
  out.bim = Bimodule{m.right_alg, a, r, {}, {}};
  if (r == 0) {
    out.bim.left_action.assign(m.right_alg->dim, Mat(0, 0, p));
    out.bim.right_action.assign(a->dim, Mat(0, 0, p));
    return out;
  }
  Mat bv = vec_rows(out.basis, m.dim * a->dim, p);
  for (int j = 0; j < m.right_alg->dim; ++j) {
    std::vector<Mat> images;
    for (const Mat& h : out.basis) images.push_back(m.right_action[j] * h);
    out.bim.left_action.push_back(transport(bv, images, m.dim * a->dim, p));
  }
  for (int i = 0; i < a->dim; ++i) {
    std::vector<Mat> images;
    for (const Mat& h : out.basis) images.push_back(h * a->right_mult[i]);
    out.bim.right_action.push_back(transport(bv, images, m.dim * a->dim, p));
  }
  return out;
}

namespace {

// splitting components of a projective cover section as hom matrices
std::vector<Mat> splitting_components(const Mat& splitting, int dm, int dalg, std::uint32_t p) {
  std::vector<Mat> comps;
  comps.reserve(dm);
  for (int t = 0; t < dm; ++t) {
    Mat c(dm, dalg, p);
    for (int i = 0; i < dm; ++i)
      for (int j = 0; j < dalg; ++j) c.at(i, j) = splitting.at(i, t * dalg + j);
    comps.push_back(c);
  }
  return comps;
}

}  // namespace

void verify_zigzags(const FrobeniusCertificate& cert) {
  const Bimodule& m = cert.m;
  const std::uint32_t p = m.left_alg->field.p;
  const int dm = m.dim;
  const int r = int(cert.dual_right.basis.size());
  std::vector<Mat> fcomp, gcomp, theta_g;
  for (int t = 0; t < dm; ++t) {
    Mat f(dm, m.right_alg->dim, p);
    Mat g(dm, m.left_alg->dim, p);
    for (int s = 0; s < r; ++s) {
      if (cert.right_components.at(t, s) != 0)
        f = f + cert.dual_right.basis[s].scaled(cert.right_components.at(t, s));
      if (cert.left_components.at(t, s) != 0)
        g = g + cert.dual_left.basis[s].scaled(cert.left_components.at(t, s));
    }
    fcomp.push_back(f);
    gcomp.push_back(g);
    Mat tg(dm, m.right_alg->dim, p);
    Mat w = cert.left_components.row(t) * cert.theta;
    for (int s = 0; s < r; ++s)
      if (w.at(0, s) != 0) tg = tg + cert.dual_right.basis[s].scaled(w.at(0, s));
    theta_g.push_back(tg);
  }
  // evaluation against the right dual basis recovers every module element
  for (int j = 0; j < dm; ++j) {
    Mat sum(1, dm, p);
    for (int t = 0; t < dm; ++t) sum = sum + m.ract(fcomp[t].row(j)).row(t);
    Mat e(1, dm, p);
    e.at(0, j) = 1;
    if (sum != e) throw BimoduleError("right dual basis identity failed");
  }
  // the dual basis expansion fixes every right dual element
  for (int s = 0; s < r; ++s) {
    Mat sum(dm, m.right_alg->dim, p);
    for (int t = 0; t < dm; ++t)
      sum = sum + fcomp[t] * m.right_alg->lmul_matrix(cert.dual_right.basis[s].row(t));
    if (sum != cert.dual_right.basis[s]) throw BimoduleError("right dual expansion failed");
  }
  // the left dual pair recovers every module element
  for (int j = 0; j < dm; ++j) {
    Mat sum(1, dm, p);
    for (int u = 0; u < dm; ++u) sum = sum + m.lact(gcomp[u].row(j)).row(u);
    Mat e(1, dm, p);
    e.at(0, j) = 1;
    if (sum != e) throw BimoduleError("left dual basis identity failed");
  }
  // the transported expansion fixes every right dual element
  for (int s = 0; s < r; ++s) {
    Mat k(dm, m.left_alg->dim, p);
    Mat kc = cert.theta_inv.row(s);
    for (int t = 0; t < r; ++t)
      if (kc.at(0, t) != 0) k = k + cert.dual_left.basis[t].scaled(kc.at(0, t));
    Mat sum(dm, m.right_alg->dim, p);
    for (int u = 0; u < dm; ++u) sum = sum + m.lact(k.row(u)) * theta_g[u];
    if (sum != cert.dual_right.basis[s]) throw BimoduleError("transported dual expansion failed");
  }
}

FrobeniusResult frobenius_check(const Bimodule& m, std::mt19937_64& rng) {
  const std::uint32_t p = m.left_alg->field.p;
  FrobeniusResult out;
  AlgebraPtr op = algebra::opposite(m.left_alg);
  modules::ProjectivityResult left_pr = modules::is_projective(left_restriction(m, op));
  if (!left_pr.projective) {
    out.status = FrobeniusStatus::NotLeftProjective;
    out.detail = "the left module structure admits no splitting of its free cover";
    return out;
  }
  modules::ProjectivityResult right_pr = modules::is_projective(right_restriction(m));
  if (!right_pr.projective) {
    out.status = FrobeniusStatus::NotRightProjective;
    out.detail = "the right module structure admits no splitting of its free cover";
    return out;
  }
  DualData dl = dual(m, DualSide::Left);
  DualData dr = dual(m, DualSide::Right);
  if (dl.bim.dim != dr.bim.dim) {
    out.status = FrobeniusStatus::DualsNotIsomorphic;
    out.detail = "left dual has dimension " + std::to_string(dl.bim.dim) +
                 ", right dual has dimension " + std::to_string(dr.bim.dim);
    return out;
  }
  modules::IsoResult iso = bimodule_iso_test(dl.bim, dr.bim, rng);
  if (iso.status == modules::IsoStatus::NotIsomorphic) {
    out.status = FrobeniusStatus::DualsNotIsomorphic;
    out.detail = iso.reason;
    return out;
  }
  if (iso.status == modules::IsoStatus::Unknown) {
    out.status = FrobeniusStatus::Unknown;
    out.detail = iso.reason;
    return out;
  }

  FrobeniusCertificate cert;
  cert.m = m;
  cert.dual_left = dl;
  cert.dual_right = dr;
  const int r = dr.bim.dim;
  cert.theta = r == 0 ? Mat(0, 0, p) : iso.cert;
  cert.theta_inv = r == 0 ? Mat(0, 0, p) : exactla::invert(iso.cert);

  const int dm = m.dim;
  std::vector<Mat> right_parts = splitting_components(right_pr.splitting, dm, m.right_alg->dim, p);
  std::vector<Mat> left_parts = splitting_components(left_pr.splitting, dm, m.left_alg->dim, p);
  cert.right_components = Mat(dm, r, p);
  cert.left_components = Mat(dm, r, p);
  if (dm > 0 && r > 0) {
    Mat rv = vec_rows(dr.basis, dm * m.right_alg->dim, p);
    Mat lv = vec_rows(dl.basis, dm * m.left_alg->dim, p);
    cert.right_components =
        coords_of(rv, vec_rows(right_parts, dm * m.right_alg->dim, p), "right splitting");
    cert.left_components =
        coords_of(lv, vec_rows(left_parts, dm * m.left_alg->dim, p), "left splitting");
  }

  // the four canonical maps of the two adjunctions
  cert.adjunction.mf = tensor_bimodule(m, dr.bim);
  cert.adjunction.fm = tensor_bimodule(dr.bim, m);
  const TensorBimodule& mf = cert.adjunction.mf;
  const TensorBimodule& fm = cert.adjunction.fm;
  const int da = m.left_alg->dim, db = m.right_alg->dim;

  Mat eta1(1, dm * r, p);
  for (int t = 0; t < dm; ++t) {
    Mat e(1, dm, p);
    e.at(0, t) = 1;
    eta1 = eta1 + kron(e, cert.right_components.row(t));
  }
  eta1 = eta1 * mf.proj;
  cert.adjunction.eta = Mat(da, mf.bim.dim, p);
  for (int i = 0; i < da; ++i) {
    if (eta1 * mf.bim.left_action[i] != eta1 * mf.bim.right_action[i])
      throw BimoduleError("coevaluation is not a bimodule map");
    Mat row = eta1 * mf.bim.left_action[i];
    for (int j = 0; j < mf.bim.dim; ++j) cert.adjunction.eta.at(i, j) = row.at(0, j);
  }

  Mat eps_raw(r * dm, db, p);
  for (int t = 0; t < r; ++t)
    for (int j = 0; j < dm; ++j)
      for (int c = 0; c < db; ++c) eps_raw.at(t * dm + j, c) = dr.basis[t].at(j, c);
  if (fm.rel.rows() > 0 && !(fm.rel * eps_raw).is_zero())
    throw BimoduleError("evaluation is not well defined on the tensor quotient");
  cert.adjunction.eps = fm.sect * eps_raw;

  Mat th1(1, r * dm, p);
  for (int u = 0; u < dm; ++u) {
    Mat e(1, dm, p);
    e.at(0, u) = 1;
    th1 = th1 + kron(cert.left_components.row(u) * cert.theta, e);
  }
  th1 = th1 * fm.proj;
  cert.adjunction.theta_hat = Mat(db, fm.bim.dim, p);
  for (int j = 0; j < db; ++j) {
    if (th1 * fm.bim.left_action[j] != th1 * fm.bim.right_action[j])
      throw BimoduleError("transported coevaluation is not a bimodule map");
    Mat row = th1 * fm.bim.left_action[j];
    for (int c = 0; c < fm.bim.dim; ++c) cert.adjunction.theta_hat.at(j, c) = row.at(0, c);
  }

  Mat xi_raw(dm * r, da, p);
  for (int s = 0; s < r; ++s) {
    Mat k(dm, da, p);
    Mat kc = cert.theta_inv.row(s);
    for (int t = 0; t < r; ++t)
      if (kc.at(0, t) != 0) k = k + dl.basis[t].scaled(kc.at(0, t));
    for (int j = 0; j < dm; ++j)
      for (int c = 0; c < da; ++c) xi_raw.at(j * r + s, c) = k.at(j, c);
  }
  if (mf.rel.rows() > 0 && !(mf.rel * xi_raw).is_zero())
    throw BimoduleError("transported evaluation is not well defined on the tensor quotient");
  cert.adjunction.xi_hat = mf.sect * xi_raw;

  verify_zigzags(cert);
  out.status = FrobeniusStatus::Certified;
  out.cert = std::move(cert);
  return out;
}

TensorModule apply_functor(const FrobeniusCertificate& cert, Functor which,
                           const Representation& x) {
  if (which == Functor::F) return tensor(x, cert.m);
  return tensor(x, cert.dual_right.bim);
}

Mat apply_functor_hom(const FrobeniusCertificate& cert, Functor which, const Mat& f,
                      const TensorModule& tx, const TensorModule& txp) {
  (void)cert;
  (void)which;
  return tensor_hom(f, tx, txp);
}

EndomorphismExtension endomorphism_extension(const FrobeniusCertificate& cert,
                                             std::mt19937_64& rng) {
  const Bimodule& dr = cert.dual_right.bim;
  const AlgebraPtr& a = cert.m.left_alg;
  const AlgebraPtr& b = cert.m.right_alg;
  const std::uint32_t p = b->field.p;
  EndomorphismExtension out;

  Representation dr_right = right_restriction(dr);
  std::vector<Mat> endos = modules::hom_space(dr_right, dr_right);
  const int e = int(endos.size());
  if (dr.dim == 0) {
    // the zero dual carries only the zero endomorphism algebra over the base
    out.ext = algebra::zero_algebra(a->field);
    out.embedding = Mat(b->dim, 0, p);
    out.projective_over_base = true;
    out.hom_iso = modules::IsoStatus::Isomorphic;
    return out;
  }
  Mat ev = vec_rows(endos, dr.dim * dr.dim, p);
  Mat table(e * e, e, p);
  for (int i = 0; i < e; ++i)
    for (int j = 0; j < e; ++j) {
      Mat prod_coords = coords_of(ev, vec_row(endos[j] * endos[i]), "endomorphism product");
      for (int c = 0; c < e; ++c) table.at(i * e + j, c) = prod_coords.at(0, c);
    }
  Mat unit = coords_of(ev, vec_row(Mat::identity(dr.dim, p)), "identity endomorphism");
  std::vector<std::string> labels;
  for (int i = 0; i < e; ++i) labels.push_back("u" + std::to_string(i + 1));
  AlgebraPtr ext = algebra::assemble_algebra(a->field, labels, table, unit, {unit});
  bool primitive = false;
  try {
    algebra::CornerData cd = algebra::corner(ext, {0});
    primitive = algebra::is_local(*cd.alg, nullptr);
  } catch (const std::exception&) {
    primitive = false;
  }
  if (!primitive) {
    auto copy = std::make_shared<algebra::Algebra>(*ext);
    copy->non_primitive = true;
    ext = copy;
  }
  out.ext = ext;

  // base elements act on the dual by left multiplication
  out.embedding = Mat(b->dim, e, p);
  for (int j = 0; j < b->dim; ++j) {
    Mat c = coords_of(ev, vec_row(dr.left_action[j]), "base action endomorphism");
    for (int k = 0; k < e; ++k) out.embedding.at(j, k) = c.at(0, k);
  }
  if (b->unit * out.embedding != unit) throw BimoduleError("extension embedding is not unital");
  for (int i = 0; i < b->dim; ++i)
    for (int j = 0; j < b->dim; ++j)
      if (ext->mul(out.embedding.row(i), out.embedding.row(j)) !=
          b->product_row(i, j) * out.embedding)
        throw BimoduleError("extension embedding is not multiplicative");

  Representation ext_over_base{b, e, {}};
  for (int j = 0; j < b->dim; ++j)
    ext_over_base.action.push_back(ext->rmul_matrix(out.embedding.row(j)));
  out.projective_over_base = modules::is_projective(ext_over_base).projective;

  Bimodule ext_bim{b, ext, e, {}, {}};
  for (int j = 0; j < b->dim; ++j)
    ext_bim.left_action.push_back(ext->lmul_matrix(out.embedding.row(j)));
  ext_bim.right_action = ext->right_mult;

  std::vector<Mat> homs = modules::hom_space(ext_over_base, modules::regular_module(b));
  const int hr = int(homs.size());
  Bimodule hom_bim{b, ext, hr, {}, {}};
  if (hr == 0) {
    hom_bim.left_action.assign(b->dim, Mat(0, 0, p));
    hom_bim.right_action.assign(ext->dim, Mat(0, 0, p));
  } else {
    Mat hv = vec_rows(homs, e * b->dim, p);
    for (int j = 0; j < b->dim; ++j) {
      std::vector<Mat> images;
      for (const Mat& h : homs) images.push_back(h * b->left_mult[j]);
      hom_bim.left_action.push_back(transport(hv, images, e * b->dim, p));
    }
    for (int k = 0; k < ext->dim; ++k) {
      std::vector<Mat> images;
      for (const Mat& h : homs) images.push_back(ext->left_mult[k] * h);
      hom_bim.right_action.push_back(transport(hv, images, e * b->dim, p));
    }
  }
  modules::IsoResult iso = bimodule_iso_test(hom_bim, ext_bim, rng);
  out.hom_iso = iso.status;
  out.detail = iso.reason;
  return out;
}

}  // namespace frobmod::bimodules
