#include "frobmod/duality.hpp"

#include <utility>

#include "frobmod/spectrum.hpp"

namespace frobmod::duality {

namespace {

using algebra::AlgebraPtr;
using analysis::AnalysisError;
using bimodules::Bimodule;
using bimodules::TensorModule;
using exactla::invert;
using exactla::kron;
using exactla::left_kernel;
using exactla::Mat;
using exactla::rank_of;
using exactla::solve_left;
using modules::Representation;

Mat unit_row(std::uint32_t p, int n, int i) {
  Mat out(1, n, p);
  out.at(0, i) = 1;
  return out;
}

Mat vec_row(const Mat& m) {
  Mat out(1, m.rows() * m.cols(), m.modulus());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out.at(0, i * m.cols() + j) = m.at(i, j);
  return out;
}

Mat reshape(const Mat& row, int r, int c) {
  Mat out(r, c, row.modulus());
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) out.at(i, j) = row.at(0, i * c + j);
  return out;
}

bool is_zero(const Mat& m) { return m == Mat(m.rows(), m.cols(), m.modulus()); }

// one adjoint pair with both functors realized by tensoring; the canonical
// elements are stored at raw tensor level, evaluation rows indexed by the
// second factor inside the first
struct PairView {
  AlgebraPtr src, tgt;
  const Bimodule* mm = nullptr;  // source-to-target functor bimodule
  const Bimodule* nn = nullptr;  // target-to-source functor bimodule
  Mat coev;   // unit element of mm (x) nn, shaped mm.dim x nn.dim
  Mat ev;     // evaluation of nn (x) mm into the target, row s * mm.dim + t
  Mat coev2;  // unit element of nn (x) mm, shaped nn.dim x mm.dim
  Mat ev2;    // evaluation of mm (x) nn into the source, row t * nn.dim + s
};

PairView forward(const FrobeniusCertificate& c) {
  PairView v;
  v.src = c.m.left_alg;
  v.tgt = c.m.right_alg;
  v.mm = &c.m;
  v.nn = &c.dual_right.bim;
  const int dm = c.m.dim;
  const int dn = c.dual_right.bim.dim;
  const bimodules::AdjunctionSystem& adj = c.adjunction;
  v.coev = reshape(v.src->unit * adj.eta * adj.mf.sect, dm, dn);
  v.ev = adj.fm.proj * adj.eps;
  v.coev2 = reshape(v.tgt->unit * adj.theta_hat * adj.fm.sect, dn, dm);
  v.ev2 = adj.mf.proj * adj.xi_hat;
  return v;
}

PairView swapped(const FrobeniusCertificate& c) {
  PairView f = forward(c);
  PairView v;
  v.src = f.tgt;
  v.tgt = f.src;
  v.mm = f.nn;
  v.nn = f.mm;
  v.coev = f.coev2;
  v.ev = f.ev2;
  v.coev2 = f.coev;
  v.ev2 = f.ev;
  return v;
}

// unit at x: x -> (x (x) mm) (x) nn
Mat unit_at(const PairView& v, const Representation& x) {
  const std::uint32_t p = v.src->field.p;
  TensorModule tf = bimodules::tensor(x, *v.mm);
  TensorModule tgf = bimodules::tensor(tf.rep, *v.nn);
  Mat first = kron(Mat::identity(x.dim, p), vec_row(v.coev));
  Mat mid = kron(tf.proj, Mat::identity(v.nn->dim, p));
  return first * mid * tgf.proj;
}

// counit at y: (y (x) nn) (x) mm -> y
Mat counit_at(const PairView& v, const Representation& y) {
  const std::uint32_t p = v.src->field.p;
  const int dy = y.dim, dnn = v.nn->dim, dmm = v.mm->dim;
  TensorModule tg = bimodules::tensor(y, *v.nn);
  TensorModule tfg = bimodules::tensor(tg.rep, *v.mm);
  Mat w(dy * dnn * dmm, dy, p);
  for (int s = 0; s < dnn; ++s)
    for (int t = 0; t < dmm; ++t) {
      Mat act = y.act(v.ev.row(s * dmm + t));
      for (int j = 0; j < dy; ++j)
        for (int c = 0; c < dy; ++c) w.at((j * dnn + s) * dmm + t, c) = act.at(j, c);
    }
  return tfg.sect * kron(tg.sect, Mat::identity(dmm, p)) * w;
}

// second unit at y: y -> (y (x) nn) (x) mm
Mat theta_at(const PairView& v, const Representation& y) {
  const std::uint32_t p = v.src->field.p;
  TensorModule tg = bimodules::tensor(y, *v.nn);
  TensorModule tfg = bimodules::tensor(tg.rep, *v.mm);
  Mat first = kron(Mat::identity(y.dim, p), vec_row(v.coev2));
  Mat mid = kron(tg.proj, Mat::identity(v.mm->dim, p));
  return first * mid * tfg.proj;
}

// second counit at x: (x (x) mm) (x) nn -> x
Mat xi_at(const PairView& v, const Representation& x) {
  const std::uint32_t p = v.src->field.p;
  const int dx = x.dim, dmm = v.mm->dim, dnn = v.nn->dim;
  TensorModule tf = bimodules::tensor(x, *v.mm);
  TensorModule tgf = bimodules::tensor(tf.rep, *v.nn);
  Mat w(dx * dmm * dnn, dx, p);
  for (int t = 0; t < dmm; ++t)
    for (int s = 0; s < dnn; ++s) {
      Mat act = x.act(v.ev2.row(t * dnn + s));
      for (int i = 0; i < dx; ++i)
        for (int c = 0; c < dx; ++c) w.at((i * dmm + t) * dnn + s, c) = act.at(i, c);
    }
  return tgf.sect * kron(tf.sect, Mat::identity(dnn, p)) * w;
}

// the map y (x) pp -> y (x) qq induced by a bimodule map pp -> qq
Mat tau_at(const Representation& y, const Mat& enc, const Bimodule& pp,
           const Bimodule& qq) {
  const std::uint32_t p = y.alg->field.p;
  TensorModule tp = bimodules::tensor(y, pp);
  TensorModule tq = bimodules::tensor(y, qq);
  Mat k = kron(Mat::identity(y.dim, p), enc);
  if (tp.rel.rows() > 0 && !is_zero(tp.rel * k * tq.proj))
    throw AnalysisError("the encoded morphism does not descend to the tensor quotient");
  return tp.sect * k * tq.proj;
}

// first-dual value at x, a map from the first functor value to the second
Mat star_at(const PairView& v1, const PairView& v2, const Mat& enc,
            const Representation& x) {
  TensorModule tf2 = bimodules::tensor(x, *v2.mm);
  Mat eta2 = unit_at(v2, x);
  Mat tau = tau_at(tf2.rep, enc, *v2.nn, *v1.nn);
  Mat comp = eta2 * tau;
  TensorModule tf1 = bimodules::tensor(x, *v1.mm);
  TensorModule tg1 = bimodules::tensor(tf2.rep, *v1.nn);
  TensorModule tf1g1 = bimodules::tensor(tg1.rep, *v1.mm);
  Mat fcomp = bimodules::tensor_hom(comp, tf1, tf1g1);
  Mat eps1 = counit_at(v1, tf2.rep);
  return fcomp * eps1;
}

// second-dual value at x, same shape as the first
Mat dagger_at(const PairView& v1, const PairView& v2, const Mat& enc,
              const Representation& x) {
  TensorModule tf1 = bimodules::tensor(x, *v1.mm);
  Mat tau = tau_at(tf1.rep, enc, *v2.nn, *v1.nn);
  Mat xi1 = xi_at(v1, x);
  Mat d = tau * xi1;
  TensorModule tg2 = bimodules::tensor(tf1.rep, *v2.nn);
  TensorModule tf2g2 = bimodules::tensor(tg2.rep, *v2.mm);
  TensorModule tf2 = bimodules::tensor(x, *v2.mm);
  Mat fd = bimodules::tensor_hom(d, tf2g2, tf2);
  Mat th2 = theta_at(v2, tf1.rep);
  return th2 * fd;
}

// collapse of the tensor with the regular module onto the bimodule itself
Mat canonical_iso(const PairView& v, const TensorModule& tf) {
  const std::uint32_t p = v.src->field.p;
  const int da = v.src->dim, dm = v.mm->dim;
  Mat c(da * dm, dm, p);
  for (int i = 0; i < da; ++i) {
    Mat l = v.mm->lact(unit_row(p, da, i));
    for (int j = 0; j < dm; ++j)
      for (int cc = 0; cc < dm; ++cc) c.at(i * dm + j, cc) = l.at(j, cc);
  }
  if (tf.rel.rows() > 0 && !is_zero(tf.rel * c))
    throw AnalysisError("the regular tensor does not collapse onto the bimodule");
  Mat iso = tf.sect * c;
  if (iso.rows() != iso.cols() || rank_of(iso) != iso.rows())
    throw AnalysisError("the regular tensor collapse is not invertible");
  return iso;
}

// coordinates of the precomposition map inside the dual bases
Mat encode(const FrobeniusCertificate& ca, const FrobeniusCertificate& cb,
           const Mat& v) {
  const std::uint32_t p = ca.m.left_alg->field.p;
  const int dnb = int(cb.dual_right.basis.size());
  const int dna = int(ca.dual_right.basis.size());
  Mat out(dnb, dna, p);
  const int width = ca.m.dim * ca.m.right_alg->dim;
  Mat span(dna, width, p);
  for (int k = 0; k < dna; ++k) {
    Mat vr = vec_row(ca.dual_right.basis[k]);
    for (int c = 0; c < width; ++c) span.at(k, c) = vr.at(0, c);
  }
  for (int s = 0; s < dnb; ++s) {
    Mat target = vec_row(v * cb.dual_right.basis[s]);
    if (dna == 0) {
      if (!is_zero(target))
        throw AnalysisError("the dualized morphism leaves the dual basis span");
      continue;
    }
    exactla::SolveResult sol = solve_left(span, target);
    if (!sol.consistent)
      throw AnalysisError("the dualized morphism leaves the dual basis span");
    for (int c = 0; c < dna; ++c) out.at(s, c) = sol.particular.at(0, c);
  }
  return out;
}

std::vector<Mat> bimodule_hom_basis(const Bimodule& m, const Bimodule& n) {
  const std::uint32_t p = m.left_alg->field.p;
  const int dm = m.dim, dn = n.dim;
  if (dm == 0 || dn == 0) return {};
  const int da = m.left_alg->dim, db = m.right_alg->dim;
  Mat t(dm * dn, (da + db) * dm * dn, p);
  int base = 0;
  auto add = [&](const Mat& l, const Mat& r) {
    for (int rr = 0; rr < dm; ++rr)
      for (int cc = 0; cc < dn; ++cc) {
        const int q = base + rr * dn + cc;
        for (int k = 0; k < dm; ++k)
          t.at(k * dn + cc, q) = (t.at(k * dn + cc, q) + l.at(rr, k)) % p;
        for (int k = 0; k < dn; ++k)
          t.at(rr * dn + k, q) = (t.at(rr * dn + k, q) + p - r.at(k, cc)) % p;
      }
    base += dm * dn;
  };
  for (int i = 0; i < da; ++i)
    add(m.lact(unit_row(p, da, i)), n.lact(unit_row(p, da, i)));
  for (int j = 0; j < db; ++j)
    add(m.ract(unit_row(p, db, j)), n.ract(unit_row(p, db, j)));
  Mat ker = left_kernel(t);
  std::vector<Mat> out;
  out.reserve(ker.rows());
  for (int r = 0; r < ker.rows(); ++r) out.push_back(reshape(ker.row(r), dm, dn));
  return out;
}

std::vector<Representation> law_modules(const AlgebraPtr& alg) {
  std::vector<Representation> out;
  out.push_back(modules::regular_module(alg));
  spectrum::CatalogPtr cat = spectrum::shared_catalog(alg);
  for (int rep : cat->class_reps) {
    out.push_back(cat->entries[rep].S);
    out.push_back(cat->entries[rep].P);
    out.push_back(cat->entries[rep].E);
  }
  return out;
}

}  // namespace

DualizeResult dualize_morphism(const FrobeniusCertificate& c1,
                               const FrobeniusCertificate& c2, const BimoduleHom& u,
                               Direction dir, std::mt19937_64& rng) {
  if (!algebra::same_structure(*c1.m.left_alg, *c2.m.left_alg) ||
      !algebra::same_structure(*c1.m.right_alg, *c2.m.right_alg))
    throw AnalysisError("the certificates do not share their algebra pair");
  if (u.matrix.rows() != c1.m.dim || u.matrix.cols() != c2.m.dim)
    throw AnalysisError("the morphism has the wrong shape");
  if (!analysis::is_bimodule_map(c1.m, c2.m, u.matrix))
    throw AnalysisError("the morphism is not a map of bimodules");

  DualizeResult out;
  out.report.checked.push_back("the morphism is a map of bimodules");

  PairView v1 = forward(c1), v2 = forward(c2);
  PairView s1 = swapped(c1), s2 = swapped(c2);
  Mat enc_u = encode(c1, c2, u.matrix);

  const AlgebraPtr& a = c1.m.left_alg;
  const AlgebraPtr& b = c1.m.right_alg;
  const std::uint32_t p = a->field.p;
  Representation rega = modules::regular_module(a);

  Mat fam = dir == Direction::Star ? star_at(v1, v2, enc_u, rega)
                                   : dagger_at(v1, v2, enc_u, rega);
  TensorModule t1 = bimodules::tensor(rega, c1.m);
  TensorModule t2 = bimodules::tensor(rega, c2.m);
  Mat value = invert(canonical_iso(v1, t1)) * fam * canonical_iso(v2, t2);
  if (!analysis::is_bimodule_map(c1.m, c2.m, value))
    throw AnalysisError("the dualized value at the regular module is not a map of bimodules");
  out.report.checked.push_back("the dualized value at the regular module is a map of bimodules");

  out.hom.matrix = encode(c1, c2, value);
  if (!analysis::is_bimodule_map(c2.dual_right.bim, c1.dual_right.bim, out.hom.matrix))
    throw AnalysisError("the dualized morphism is not a map between the duals");
  out.report.checked.push_back("the dualized morphism is a map between the duals");

  // the opposite duality applied to the value must give back the original
  // family on every catalog module of the target algebra
  bool involution = true;
  int counted = 0;
  for (const Representation& z : law_modules(b)) {
    Mat lhs = dir == Direction::Star ? dagger_at(s2, s1, value, z)
                                     : star_at(s2, s1, value, z);
    Mat rhs = tau_at(z, enc_u, c2.dual_right.bim, c1.dual_right.bim);
    ++counted;
    if (!(lhs == rhs)) involution = false;
  }
  out.report.involution = involution;
  if (involution)
    out.report.checked.push_back(
        dir == Direction::Star
            ? "the second duality undoes the first at every catalog module"
            : "the first duality undoes the second at every catalog module");

  // a random composable endomorphism checks that dualizing reverses products
  std::vector<Mat> endos = bimodule_hom_basis(c2.m, c2.m);
  Mat sigma(c2.m.dim, c2.m.dim, p);
  for (const Mat& h : endos) sigma = sigma + h.scaled(std::uint32_t(rng() % p));
  Mat comp = u.matrix * sigma;
  Mat enc_sigma = encode(c2, c2, sigma);
  Mat enc_comp = encode(c1, c2, comp);
  bool contravariant = true;
  for (const Representation& x : law_modules(a)) {
    Mat lhs, rhs;
    if (dir == Direction::Star) {
      lhs = star_at(v1, v2, enc_comp, x);
      rhs = star_at(v1, v2, enc_u, x) * star_at(v2, v2, enc_sigma, x);
    } else {
      lhs = dagger_at(v1, v2, enc_comp, x);
      rhs = dagger_at(v1, v2, enc_u, x) * dagger_at(v2, v2, enc_sigma, x);
    }
    ++counted;
    if (!(lhs == rhs)) contravariant = false;
  }
  out.report.contravariant = contravariant;
  if (contravariant)
    out.report.checked.push_back("dualizing a composite reverses the factors");
  out.report.modules_checked = counted;
  out.report.detail = involution && contravariant ? "duality laws verified"
                                                  : "a duality law failed";
  return out;
}

}  // namespace frobmod::duality
