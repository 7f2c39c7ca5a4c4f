#include "frobmod/glue.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace frobmod::glue {

namespace {

using bimodules::Bimodule;
using bimodules::HomModule;
using bimodules::TensorModule;
using exactla::hstack;
using exactla::invert;
using exactla::kron;
using exactla::left_kernel;
using exactla::rank_of;
using exactla::row_basis;
using exactla::solve_left;
using exactla::vstack;
using modules::IsoStatus;
using spectrum::Compression;
using spectrum::LocalizingSubcat;
using spectrum::WeaklyOpenSubspace;

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

// coordinates of f inside the span of the hom basis
Mat hom_coords(const std::vector<Mat>& basis, const Mat& f, const char* what) {
  const std::uint32_t p = f.modulus();
  Mat out(1, int(basis.size()), p);
  if (basis.empty()) {
    if (!(f == Mat(f.rows(), f.cols(), p)))
      throw AnalysisError(std::string(what) + " misses the empty hom space");
    return out;
  }
  Mat span(0, f.rows() * f.cols(), p);
  for (const Mat& h : basis) span = vstack(span, vec_row(h));
  exactla::SolveResult s = solve_left(span, vec_row(f));
  if (!s.consistent)
    throw AnalysisError(std::string(what) + " is not a hom combination");
  return s.particular;
}

void place(Mat& out, int r, int c, const Mat& block) {
  for (int i = 0; i < block.rows(); ++i)
    for (int j = 0; j < block.cols(); ++j) out.at(r + i, c + j) = block.at(i, j);
}

Mat slice(const Mat& m, int r, int nr, int c, int nc) {
  Mat out(nr, nc, m.modulus());
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j) out.at(i, j) = m.at(r + i, c + j);
  return out;
}

bool is_zero(const Mat& m) { return m == Mat(m.rows(), m.cols(), m.modulus()); }

// ambient class position -> corner class position, -1 on killed classes
std::vector<int> corner_class_map(const WeaklyOpenSubspace& u) {
  std::vector<int> map(u.cat->class_reps.size(), -1);
  if (!u.corner_cat) return map;
  for (std::size_t c = 0; c < u.cat->class_reps.size(); ++c) {
    const Representation& s = u.cat->entries[u.cat->class_reps[c]].S;
    Compression cs = spectrum::compress(u, s);
    if (cs.rep.dim == 0) continue;
    std::vector<int> factors = modules::composition_factors(*u.corner_cat, cs.rep);
    for (std::size_t d = 0; d < factors.size(); ++d)
      if (factors[d] > 0) map[c] = int(d);
  }
  return map;
}

std::vector<int> inverse_class_map(const std::vector<int>& map, int corner_classes) {
  std::vector<int> inv(corner_classes, -1);
  for (std::size_t c = 0; c < map.size(); ++c)
    if (map[c] >= 0) inv[map[c]] = int(c);
  return inv;
}

// one side of the construction: the pieces it transports through and the
// conversion data toward the shared overlap
struct PathSide {
  const WeaklyOpenSubspace* w = nullptr;  // source piece
  const WeaklyOpenSubspace* z = nullptr;  // target piece
  Bimodule m;                             // local bimodule over the corners
  Bimodule overlap;                       // slice of m at the overlap corners
  Mat slice_rows;                         // overlap basis inside m coordinates
  // overlap of the target corner, with its basis written in the coordinates
  // of the directly built overlap corner
  WeaklyOpenSubspace inner;
  Mat basis_change;
  Mat up_rows_piece;    // basis rows of the target transfer ideal
  Mat up_rows_inner;    // basis rows of the corner transfer ideal
  Mat piece_from_full;  // full overlap ideal rows inside the piece ideal rows
  Mat inner_idem;       // overlap idempotent in inner transfer coordinates
};

struct PathPipe {
  Compression comp;
  TensorModule ten;
  HomModule hom;
  int dim = 0;
};

PathPipe make_pipe(const PathSide& s, const Representation& part) {
  PathPipe out;
  out.comp = spectrum::compress(*s.w, part);
  out.ten = bimodules::tensor(out.comp.rep, s.m);
  out.hom = spectrum::coextend(*s.z, out.ten.rep);
  out.dim = out.hom.rep.dim;
  return out;
}

Mat pipe_hom(const PathSide& s, const PathPipe& src, const PathPipe& tgt, const Mat& g) {
  Mat c = spectrum::compress_hom(*s.w, src.comp, tgt.comp, g);
  Mat t = bimodules::tensor_hom(c, src.ten, tgt.ten);
  return spectrum::coextend_hom(*s.z, src.hom, tgt.hom, t);
}

struct Pieces {
  LocalizingSubcat t1, t2, t12;
  WeaklyOpenSubspace u1, u2, u12;
  std::vector<int> map1, map2, map12;
};

Pieces build_pieces(const AlgebraPtr& a, const std::vector<int>& k1,
                    const std::vector<int>& k2, const char* side) {
  spectrum::CatalogPtr cat = spectrum::shared_catalog(a);
  const int n = int(cat->class_reps.size());
  for (int c : k1)
    if (c < 0 || c >= n)
      throw AnalysisError(std::string(side) + " killed class out of range");
  for (int c : k2)
    if (c < 0 || c >= n)
      throw AnalysisError(std::string(side) + " killed class out of range");
  Pieces out;
  out.t1 = spectrum::localizing_from_killed(a, k1, cat);
  out.t2 = spectrum::localizing_from_killed(a, k2, cat);
  std::vector<int> both = out.t1.killed;
  both.insert(both.end(), out.t2.killed.begin(), out.t2.killed.end());
  std::sort(both.begin(), both.end());
  out.t12 = spectrum::localizing_from_killed(a, both, cat);
  out.u1 = spectrum::weakly_open(out.t1);
  out.u2 = spectrum::weakly_open(out.t2);
  out.u12 = spectrum::weakly_open(out.t12);
  out.map1 = corner_class_map(out.u1);
  out.map2 = corner_class_map(out.u2);
  out.map12 = corner_class_map(out.u12);
  return out;
}

// the slice e' m e'' at the overlap idempotents, as a bimodule over the
// directly built overlap corner algebras
std::pair<Bimodule, Mat> overlap_slice(const Bimodule& m, const WeaklyOpenSubspace& w,
                                       const WeaklyOpenSubspace& z,
                                       const WeaklyOpenSubspace& w12,
                                       const WeaklyOpenSubspace& z12, const char* which) {
  Mat eleft = w12.corner.eprime * w.corner.compress;
  Mat eright = z12.corner.eprime * z.corner.compress;
  Mat rows = row_basis(m.lact(eleft) * m.ract(eright));
  const int d = rows.rows();
  std::vector<Mat> la, ra;
  for (int i = 0; i < w12.corner.alg->dim; ++i) {
    Mat g = w12.corner.incl.row(i) * w.corner.compress;
    exactla::SolveResult s = solve_left(rows, rows * m.lact(g));
    if (!s.consistent)
      throw AnalysisError(std::string(which) + " overlap slice is not stable on the left");
    la.push_back(s.particular);
  }
  for (int j = 0; j < z12.corner.alg->dim; ++j) {
    Mat g = z12.corner.incl.row(j) * z.corner.compress;
    exactla::SolveResult s = solve_left(rows, rows * m.ract(g));
    if (!s.consistent)
      throw AnalysisError(std::string(which) + " overlap slice is not stable on the right");
    ra.push_back(s.particular);
  }
  return {bimodules::from_actions(w12.corner.alg, z12.corner.alg, d, la, ra), rows};
}

// overlap corner of the target piece together with the change of basis onto
// the directly built overlap corner
void build_overlap_leg(PathSide& s, const Pieces& target, int which_piece) {
  const AlgebraPtr& bp = s.z->corner.alg;
  const std::vector<int>& map = which_piece == 1 ? target.map1 : target.map2;
  const LocalizingSubcat& other = which_piece == 1 ? target.t2 : target.t1;
  std::vector<int> killed;
  for (std::size_t c = 0; c < map.size(); ++c)
    if (map[c] >= 0 && other.kills(int(c))) killed.push_back(map[c]);
  std::sort(killed.begin(), killed.end());
  LocalizingSubcat inner_t =
      spectrum::localizing_from_killed(bp, killed, s.z->corner_cat);
  s.inner = spectrum::weakly_open(inner_t);
  Mat inner_ambient = s.inner.corner.incl * s.z->corner.incl;
  Mat full_rows = target.u12.corner.incl;
  if (inner_ambient.rows() != full_rows.rows())
    throw AnalysisError("overlap corners have mismatched dimensions");
  exactla::SolveResult g = solve_left(full_rows, inner_ambient);
  if (!g.consistent) throw AnalysisError("overlap corners span different subspaces");
  s.basis_change = g.particular;
  if (rank_of(s.basis_change) != s.basis_change.rows())
    throw AnalysisError("overlap corner change of basis is singular");
  // the change of basis must carry products to products
  for (int i = 0; i < s.inner.corner.alg->dim; ++i)
    for (int j = 0; j < s.inner.corner.alg->dim; ++j) {
      Mat lhs = s.inner.corner.alg->product_row(i, j) * s.basis_change;
      Mat rhs = target.u12.corner.alg->mul(s.basis_change.row(i), s.basis_change.row(j));
      if (!(lhs == rhs)) throw AnalysisError("overlap corner change of basis breaks products");
    }
  const AlgebraPtr& b = s.z->alg;
  s.up_rows_piece = row_basis(b->rmul_matrix(s.z->corner.eprime));
  s.up_rows_inner = row_basis(bp->rmul_matrix(s.inner.corner.eprime));
  Mat up12 = row_basis(b->rmul_matrix(target.u12.corner.eprime));
  exactla::SolveResult pf = solve_left(s.up_rows_piece, up12);
  if (!pf.consistent) throw AnalysisError("overlap transfer ideal escapes the piece ideal");
  s.piece_from_full = pf.particular;
  Mat e12_corner = target.u12.corner.eprime * s.z->corner.compress;
  exactla::SolveResult bi = solve_left(s.up_rows_inner, e12_corner);
  if (!bi.consistent) throw AnalysisError("overlap idempotent escapes the corner ideal");
  s.inner_idem = bi.particular;
}

// pull a module over the inner overlap corner back to the directly built one
Representation transport_rep(const Representation& rep, const Mat& basis_change,
                             const AlgebraPtr& target) {
  Mat back = invert(basis_change);
  Representation out;
  out.alg = target;
  out.dim = rep.dim;
  const std::uint32_t p = target->field.p;
  for (int j = 0; j < target->dim; ++j) {
    Mat act(rep.dim, rep.dim, p);
    for (int k = 0; k < int(rep.action.size()); ++k)
      if (back.at(j, k) != 0) act = act + rep.action[k].scaled(back.at(j, k));
    out.action.push_back(act);
  }
  return out;
}

// the unit of the compression adjunction at the inner overlap corner;
// invertible whenever every socle class of the module survives the overlap
Mat inner_unit(const PathSide& s, const Representation& n, const Compression& cn,
               const HomModule& target) {
  const std::uint32_t p = n.alg->field.p;
  const int updim = s.up_rows_inner.rows();
  std::vector<Mat> acts;
  for (int k = 0; k < updim; ++k) acts.push_back(n.act(s.up_rows_inner.row(k)));
  Mat out(n.dim, target.rep.dim, p);
  for (int i = 0; i < n.dim; ++i) {
    Mat phi(updim, cn.rep.dim, p);
    for (int k = 0; k < updim; ++k) place(phi, k, 0, acts[k].row(i) * cn.project);
    place(out, i, 0, hom_coords(target.basis, phi, "compression unit"));
  }
  return out;
}

// coextension from the piece of a coextension from the inner overlap corner,
// flattened onto the coextension from the overlap of the full algebra
Mat flatten_coextension(const PathSide& s, const HomModule& outer,
                        const HomModule& inner_hom, const Representation& crep,
                        const HomModule& target) {
  const std::uint32_t p = crep.alg->field.p;
  Mat out(outer.rep.dim, target.rep.dim, p);
  for (int j = 0; j < outer.rep.dim; ++j) {
    const Mat& h = outer.basis[j];
    Mat flat(s.piece_from_full.rows(), crep.dim, p);
    for (int l = 0; l < flat.rows(); ++l) {
      Mat gamma = s.piece_from_full.row(l) * h;
      Mat psi(s.up_rows_inner.rows(), crep.dim, p);
      for (int t = 0; t < gamma.cols(); ++t)
        if (gamma.at(0, t) != 0) psi = psi + inner_hom.basis[t].scaled(gamma.at(0, t));
      place(flat, l, 0, s.inner_idem * psi);
    }
    place(out, j, 0, hom_coords(target.basis, flat, "coextension flattening"));
  }
  return out;
}

struct OverlapLeg {
  Representation cprime;  // overlap compression of the value, transported
  Compression comp;       // compression onto the inner overlap corner
  HomModule target;       // coextension of cprime from the full overlap
  Mat chi;                // piece value onto that coextension
};

OverlapLeg make_leg(const PathSide& s, const WeaklyOpenSubspace& z12, const PathPipe& q) {
  OverlapLeg leg;
  leg.comp = spectrum::compress(s.inner, q.ten.rep);
  HomModule inner_hom = spectrum::coextend(s.inner, leg.comp.rep);
  Mat unit = inner_unit(s, q.ten.rep, leg.comp, inner_hom);
  if (unit.rows() != unit.cols() || rank_of(unit) != unit.rows())
    throw AnalysisError("compression unit at the overlap is not invertible");
  HomModule outer = spectrum::coextend(*s.z, inner_hom.rep);
  Mat lifted = spectrum::coextend_hom(*s.z, q.hom, outer, unit);
  leg.cprime = transport_rep(leg.comp.rep, s.basis_change, z12.corner.alg);
  leg.target = spectrum::coextend(z12, leg.cprime);
  Mat theta = flatten_coextension(s, outer, inner_hom, leg.comp.rep, leg.target);
  leg.chi = lifted * theta;
  if (leg.chi.rows() != leg.chi.cols() || rank_of(leg.chi) != leg.chi.rows())
    throw AnalysisError("piece value does not coextend from the overlap");
  return leg;
}

// projection formula map from the overlap tensor slice onto the transported
// compression of the piece value
Mat projection_formula(const PathSide& s, const Compression& ce, const PathPipe& q,
                       const OverlapLeg& leg, const TensorModule& tslice) {
  const std::uint32_t p = s.m.left_alg->field.p;
  const int dcap = s.slice_rows.rows();
  Mat raw(ce.rep.dim * dcap, leg.cprime.dim, p);
  for (int i = 0; i < ce.rep.dim; ++i) {
    Mat xrow = ce.basis.row(i) * q.comp.project;
    for (int j = 0; j < dcap; ++j) {
      Mat image = kron(xrow, s.slice_rows.row(j)) * q.ten.proj * leg.comp.project;
      place(raw, i * dcap + j, 0, image);
    }
  }
  if (!is_zero(tslice.rel * raw))
    throw AnalysisError("projection formula map does not respect the tensor relations");
  Mat out = tslice.sect * raw;
  for (int k = 0; k < int(leg.cprime.action.size()); ++k)
    if (!(tslice.rep.action[k] * out == out * leg.cprime.action[k]))
      throw AnalysisError("projection formula map is not equivariant");
  if (out.rows() != out.cols() || rank_of(out) != out.rows())
    throw AnalysisError("projection formula map is not invertible");
  return out;
}

struct GlueContext {
  AlgebraPtr a, b;
  spectrum::CatalogPtr cat_a, cat_b;
  Pieces src, tgt;
  PathSide side1, side2;
  Mat theta;  // iso from the first overlap slice onto the second
  bool has_overlap = false;
};

// a catalog injective split along the tripartition, with the value of each
// block and the conversion between the two paths on the shared block
struct ValueObject {
  Mat to_blocks, from_blocks;
  int d0 = 0, d1 = 0, dq = 0;
  PathPipe p_e1, p_e2, p_q1, p_q2;
  Mat psi, psi_inv;  // first path value of the shared block onto the second
  Representation value;
  int v0 = 0, v1 = 0, vq = 0;
  int vdim() const { return v0 + v1 + vq; }
};

ValueObject make_object(const GlueContext& ctx, const Representation& e) {
  analysis::Tripartition tp =
      analysis::injective_tripartition(e, ctx.src.t1, ctx.src.t2);
  ValueObject obj;
  obj.to_blocks = tp.iso;
  obj.from_blocks = invert(tp.iso);
  obj.d0 = tp.e1.dim;
  obj.d1 = tp.e2.dim;
  obj.dq = tp.q.dim;
  obj.p_e1 = make_pipe(ctx.side1, tp.e1);
  obj.p_e2 = make_pipe(ctx.side2, tp.e2);
  obj.p_q1 = make_pipe(ctx.side1, tp.q);
  obj.v0 = obj.p_e1.dim;
  obj.v1 = obj.p_e2.dim;
  obj.vq = obj.p_q1.dim;
  if (obj.dq > 0) {
    if (!ctx.has_overlap)
      throw AnalysisError("a shared block appeared over an empty overlap");
    obj.p_q2 = make_pipe(ctx.side2, tp.q);
    if (obj.p_q2.dim != obj.vq)
      throw AnalysisError("the two path values of the shared block disagree in dimension");
    OverlapLeg leg1 = make_leg(ctx.side1, ctx.tgt.u12, obj.p_q1);
    OverlapLeg leg2 = make_leg(ctx.side2, ctx.tgt.u12, obj.p_q2);
    Compression ce = spectrum::compress(ctx.src.u12, tp.q);
    TensorModule t1 = bimodules::tensor(ce.rep, ctx.side1.overlap);
    TensorModule t2 = bimodules::tensor(ce.rep, ctx.side2.overlap);
    Mat pi1 = projection_formula(ctx.side1, ce, obj.p_q1, leg1, t1);
    Mat pi2 = projection_formula(ctx.side2, ce, obj.p_q2, leg2, t2);
    Mat raw_theta = kron(Mat::identity(ce.rep.dim, ctx.a->field.p), ctx.theta);
    if (!is_zero(t1.rel * raw_theta * t2.proj))
      throw AnalysisError("overlap witness does not respect the tensor relations");
    Mat tau = t1.sect * raw_theta * t2.proj;
    Mat delta = invert(pi2) * invert(tau) * pi1;
    Mat hdelta = spectrum::coextend_hom(ctx.tgt.u12, leg2.target, leg1.target, delta);
    obj.psi = leg1.chi * invert(hdelta) * invert(leg2.chi);
    obj.psi_inv = invert(obj.psi);
  } else {
    obj.p_q2 = obj.p_q1;
    obj.psi = Mat(0, 0, ctx.a->field.p);
    obj.psi_inv = obj.psi;
  }
  obj.value =
      modules::direct_sum({obj.p_e1.hom.rep, obj.p_e2.hom.rep, obj.p_q1.hom.rep}).rep;
  return obj;
}

// value of a map between catalog injectives, block by block; blocks between
// the two opposite torsion parts must vanish
Mat value_hom(const GlueContext& ctx, const ValueObject& s, const ValueObject& t,
              const Mat& g) {
  const std::uint32_t p = ctx.a->field.p;
  Mat gb = s.from_blocks * g * t.to_blocks;
  const int sq = s.d0 + s.d1, tq = t.d0 + t.d1;
  Mat g00 = slice(gb, 0, s.d0, 0, t.d0);
  Mat g01 = slice(gb, 0, s.d0, t.d0, t.d1);
  Mat g0q = slice(gb, 0, s.d0, tq, t.dq);
  Mat g10 = slice(gb, s.d0, s.d1, 0, t.d0);
  Mat g11 = slice(gb, s.d0, s.d1, t.d0, t.d1);
  Mat g1q = slice(gb, s.d0, s.d1, tq, t.dq);
  Mat gq0 = slice(gb, sq, s.dq, 0, t.d0);
  Mat gq1 = slice(gb, sq, s.dq, t.d0, t.d1);
  Mat gqq = slice(gb, sq, s.dq, tq, t.dq);
  if (!is_zero(g01) || !is_zero(g10))
    throw AnalysisError("a map between opposite torsion blocks is nonzero");
  Mat out(s.vdim(), t.vdim(), p);
  place(out, 0, 0, pipe_hom(ctx.side1, s.p_e1, t.p_e1, g00));
  place(out, 0, t.v0 + t.v1, pipe_hom(ctx.side1, s.p_e1, t.p_q1, g0q));
  place(out, s.v0 + s.v1, 0, pipe_hom(ctx.side1, s.p_q1, t.p_e1, gq0));
  place(out, s.v0 + s.v1, t.v0 + t.v1, pipe_hom(ctx.side1, s.p_q1, t.p_q1, gqq));
  place(out, s.v0, t.v0, pipe_hom(ctx.side2, s.p_e2, t.p_e2, g11));
  if (s.dq > 0 && t.d1 > 0)
    place(out, s.v0 + s.v1, t.v0, s.psi * pipe_hom(ctx.side2, s.p_q2, t.p_e2, gq1));
  if (s.d1 > 0 && t.dq > 0)
    place(out, s.v0, t.v0 + t.v1, pipe_hom(ctx.side2, s.p_e2, t.p_q2, g1q) * t.psi_inv);
  return out;
}

std::string class_list(const std::vector<int>& classes) {
  std::string out = "{";
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(classes[i] + 1);
  }
  return out + "}";
}

void check_disjoint(const std::vector<int>& k1, const std::vector<int>& k2,
                    const char* side) {
  for (int c : k1)
    if (std::find(k2.begin(), k2.end(), c) != k2.end())
      throw HypothesisFailure(std::string(side) + " class " + std::to_string(c + 1) +
                              " is killed on both sides, so the pieces do not cover");
}

void check_closure(const LocalizingSubcat& t, const char* label) {
  spectrum::EnvelopeClosure cl = spectrum::closed_under_envelopes(t);
  if (!cl.closed)
    throw HypothesisFailure(std::string(label) +
                            " is not closed under injective envelopes: the hull of class " +
                            std::to_string(cl.witness_class + 1) + " contains class " +
                            std::to_string(cl.witness_factor + 1));
}

Bimodule rewrap_local(const Bimodule& m, const WeaklyOpenSubspace& w,
                      const WeaklyOpenSubspace& z, const char* which) {
  if (!algebra::same_structure(*m.left_alg, *w.corner.alg) ||
      !algebra::same_structure(*m.right_alg, *z.corner.alg))
    throw HypothesisFailure(std::string(which) +
                            " local bimodule is not over the corner algebras of its pieces");
  try {
    return bimodules::from_actions(w.corner.alg, z.corner.alg, m.dim, m.left_action,
                                   m.right_action);
  } catch (const bimodules::BimoduleError& err) {
    throw HypothesisFailure(std::string(which) + " local bimodule rejects the corner laws: " +
                            err.what());
  }
}

// killed classes of the overlap inside the corner catalog of one piece
std::vector<int> overlap_killed_inside(const std::vector<int>& map,
                                       const LocalizingSubcat& other) {
  std::vector<int> out;
  for (std::size_t c = 0; c < map.size(); ++c)
    if (map[c] >= 0 && other.kills(int(c))) out.push_back(map[c]);
  std::sort(out.begin(), out.end());
  return out;
}

void check_preimage(const PathSide& s, const Pieces& src, const Pieces& tgt,
                    int which_piece, const char* which) {
  if (!s.w->corner_cat) return;
  const std::vector<int>& smap = which_piece == 1 ? src.map1 : src.map2;
  const LocalizingSubcat& s_other = which_piece == 1 ? src.t2 : src.t1;
  const std::vector<int>& tmap = which_piece == 1 ? tgt.map1 : tgt.map2;
  const LocalizingSubcat& t_other = which_piece == 1 ? tgt.t2 : tgt.t1;
  std::vector<int> killed_inside = overlap_killed_inside(tmap, t_other);
  std::vector<int> expected;
  std::vector<int> inv = inverse_class_map(smap, int(s.w->corner_cat->class_reps.size()));
  for (std::size_t x = 0; x < inv.size(); ++x)
    if (s_other.kills(inv[x])) expected.push_back(int(x));
  std::vector<int> computed;
  for (std::size_t x = 0; x < s.w->corner_cat->class_reps.size(); ++x) {
    const Representation& sx =
        s.w->corner_cat->entries[s.w->corner_cat->class_reps[x]].S;
    Representation value = bimodules::tensor(sx, s.m).rep;
    std::vector<int> supp;
    if (s.z->corner_cat) supp = spectrum::factor_support(*s.z->corner_cat, value);
    bool inside = true;
    for (int f : supp)
      if (!std::binary_search(killed_inside.begin(), killed_inside.end(), f)) inside = false;
    if (inside) computed.push_back(int(x));
  }
  if (computed != expected)
    throw HypothesisFailure(
        std::string(which) +
        " local bimodule does not pull the overlap back to the source overlap: preimage " +
        class_list(computed) + " against " + class_list(expected));
}

}  // namespace

GlueResult glue(const GlueTask& task) {
  const AlgebraPtr& a = task.source_alg;
  const AlgebraPtr& b = task.target_alg;
  if (!a || !b) throw AnalysisError("gluing requires both algebras");
  if (a->field.p != b->field.p)
    throw modules::AlgebraMismatch("gluing requires a shared coefficient field");
  std::mt19937_64 rng(task.seed);
  GlueReport report;

  check_disjoint(task.target_killed_1, task.target_killed_2, "target");
  check_disjoint(task.source_killed_1, task.source_killed_2, "source");
  report.checked.push_back("covers are disjoint on both sides");

  GlueContext ctx;
  ctx.a = a;
  ctx.b = b;
  ctx.src = build_pieces(a, task.source_killed_1, task.source_killed_2, "source");
  ctx.tgt = build_pieces(b, task.target_killed_1, task.target_killed_2, "target");
  ctx.cat_a = ctx.src.t1.cat;
  ctx.cat_b = ctx.tgt.t1.cat;
  check_closure(ctx.tgt.t1, "T1");
  check_closure(ctx.tgt.t2, "T2");
  check_closure(ctx.src.t1, "S1");
  check_closure(ctx.src.t2, "S2");
  report.checked.push_back("all four torsion classes are closed under injective envelopes");

  ctx.side1.w = &ctx.src.u1;
  ctx.side1.z = &ctx.tgt.u1;
  ctx.side2.w = &ctx.src.u2;
  ctx.side2.z = &ctx.tgt.u2;
  ctx.side1.m = rewrap_local(task.local_1, ctx.src.u1, ctx.tgt.u1, "the first");
  ctx.side2.m = rewrap_local(task.local_2, ctx.src.u2, ctx.tgt.u2, "the second");
  report.checked.push_back("local bimodules live over the prescribed corners");

  auto certify = [&](const Bimodule& m, const char* which) {
    bimodules::FrobeniusResult fr = bimodules::frobenius_check(m, rng);
    if (fr.status == bimodules::FrobeniusStatus::Unknown)
      throw AnalysisError(std::string(which) + " local bimodule could not be certified: " +
                          fr.detail);
    if (fr.status != bimodules::FrobeniusStatus::Certified)
      throw HypothesisFailure(std::string(which) + " local bimodule is not Frobenius: " +
                              fr.detail);
    return std::move(*fr.cert);
  };
  bimodules::FrobeniusCertificate cert1 = certify(ctx.side1.m, "the first");
  bimodules::FrobeniusCertificate cert2 = certify(ctx.side2.m, "the second");
  report.checked.push_back("local bimodules are Frobenius");

  auto localizing = [&](const bimodules::FrobeniusCertificate& cert, const char* which) {
    analysis::ClassificationReport cls = analysis::classify(cert, false);
    if (!cls.right_localizing.holds)
      throw HypothesisFailure(std::string(which) + " local bimodule is not right localizing: " +
                              cls.right_localizing.witness);
  };
  localizing(cert1, "the first");
  localizing(cert2, "the second");
  report.checked.push_back("local bimodules are right localizing");

  check_preimage(ctx.side1, ctx.src, ctx.tgt, 1, "the first");
  check_preimage(ctx.side2, ctx.src, ctx.tgt, 2, "the second");
  report.checked.push_back("overlap preimages agree");

  auto sliced1 = overlap_slice(ctx.side1.m, ctx.src.u1, ctx.tgt.u1, ctx.src.u12,
                               ctx.tgt.u12, "the first");
  auto sliced2 = overlap_slice(ctx.side2.m, ctx.src.u2, ctx.tgt.u2, ctx.src.u12,
                               ctx.tgt.u12, "the second");
  ctx.side1.overlap = sliced1.first;
  ctx.side1.slice_rows = sliced1.second;
  ctx.side2.overlap = sliced2.first;
  ctx.side2.slice_rows = sliced2.second;
  if (ctx.side1.overlap.dim != ctx.side2.overlap.dim)
    throw HypothesisFailure("the local bimodules disagree on the overlap slice: dimensions " +
                            std::to_string(ctx.side1.overlap.dim) + " and " +
                            std::to_string(ctx.side2.overlap.dim));
  report.overlap_dim = ctx.side1.overlap.dim;
  if (ctx.side1.overlap.dim == 0) {
    ctx.theta = Mat(0, 0, a->field.p);
  } else if (task.overlap_witness) {
    const Mat& w = *task.overlap_witness;
    if (w.rows() != ctx.side1.overlap.dim || w.cols() != ctx.side2.overlap.dim ||
        rank_of(w) != w.rows() ||
        !analysis::is_bimodule_map(ctx.side1.overlap, ctx.side2.overlap, w))
      throw HypothesisFailure(
          "the provided overlap witness is not an isomorphism of the slices");
    ctx.theta = w;
  } else {
    modules::IsoResult iso =
        bimodules::bimodule_iso_test(ctx.side1.overlap, ctx.side2.overlap, rng);
    if (iso.status == IsoStatus::NotIsomorphic)
      throw HypothesisFailure("the local bimodules disagree on the overlap slice: " +
                              iso.reason);
    if (iso.status == IsoStatus::Unknown)
      throw AnalysisError("the overlap comparison is inconclusive: " + iso.reason);
    ctx.theta = iso.cert;
  }
  report.checked.push_back("overlap slices agree");
  ctx.has_overlap = ctx.tgt.u12.corner.alg->dim > 0;
  if (ctx.has_overlap) {
    build_overlap_leg(ctx.side1, ctx.tgt, 1);
    build_overlap_leg(ctx.side2, ctx.tgt, 2);
  }

  // the value of each catalog injective, blockwise along the tripartition
  auto group_of = [&](int c) {
    if (ctx.src.t2.kills(c)) return 0;
    if (ctx.src.t1.kills(c)) return 1;
    return 2;
  };
  for (std::size_t c = 0; c < ctx.cat_a->class_reps.size(); ++c) {
    const Representation& e = ctx.cat_a->entries[ctx.cat_a->class_reps[c]].E;
    ValueObject obj = make_object(ctx, e);
    ClassValue cv;
    cv.cls = int(c);
    cv.group = group_of(int(c));
    cv.path = cv.group == 1 ? 2 : 1;
    cv.value_dim = obj.vdim();
    report.values.push_back(cv);
  }

  // evaluation on the regular module through an injective copresentation
  Representation ra = modules::regular_module(a);
  modules::InjectiveHull ih0 = modules::injective_hull(*ctx.cat_a, ra);
  modules::Quotient q0 = modules::quotient_by_rows(ih0.hull, ih0.embed);
  modules::InjectiveHull ih1 = modules::injective_hull(*ctx.cat_a, q0.rep);
  Mat phi = q0.projection * ih1.embed;
  ValueObject obj0 = make_object(ctx, ih0.hull);
  ValueObject obj1 = make_object(ctx, ih1.hull);
  Mat fphi = value_hom(ctx, obj0, obj1, phi);
  Mat kernel_rows = left_kernel(fphi);
  modules::Submodule glued = modules::submodule_from_rows(obj0.value, kernel_rows);

  // left action transported through the functor: each left multiplication
  // lifts to the hull, its value preserves the kernel
  std::vector<Mat> hulls = modules::hom_space(ih0.hull, ih0.hull);
  const std::uint32_t p = a->field.p;
  Mat span(0, ra.dim * ih0.hull.dim, p);
  for (const Mat& h : hulls) span = vstack(span, vec_row(ih0.embed * h));
  std::vector<Mat> left_action;
  for (int i = 0; i < a->dim; ++i) {
    Mat li = a->lmul_matrix(unit_row(p, a->dim, i));
    exactla::SolveResult s = solve_left(span, vec_row(li * ih0.embed));
    if (!s.consistent)
      throw AnalysisError("left multiplication does not extend to the hull");
    Mat lift(ih0.hull.dim, ih0.hull.dim, p);
    for (int k = 0; k < int(hulls.size()); ++k)
      if (s.particular.at(0, k) != 0) lift = lift + hulls[k].scaled(s.particular.at(0, k));
    Mat flift = value_hom(ctx, obj0, obj0, lift);
    exactla::SolveResult act = solve_left(glued.inclusion, glued.inclusion * flift);
    if (!act.consistent)
      throw AnalysisError("the glued kernel is not stable under the transported left action");
    left_action.push_back(act.particular);
  }
  Bimodule glued_bim;
  try {
    glued_bim = bimodules::from_actions(a, b, glued.rep.dim, left_action, glued.rep.action);
  } catch (const bimodules::BimoduleError& err) {
    throw AnalysisError(std::string("the glued actions fail validation: ") + err.what());
  }

  bimodules::FrobeniusResult fr = bimodules::frobenius_check(glued_bim, rng);
  if (fr.status == bimodules::FrobeniusStatus::Unknown)
    throw AnalysisError("the glued bimodule could not be certified: " + fr.detail);
  if (fr.status != bimodules::FrobeniusStatus::Certified)
    throw AnalysisError("the glued bimodule is not Frobenius: " + fr.detail);

  auto restriction = [&](const PathSide& s, const char* which) {
    Bimodule cut = bimodules::corner_slice(glued_bim, s.w->corner, s.z->corner);
    modules::IsoResult iso = bimodules::bimodule_iso_test(cut, s.m, rng);
    if (iso.status == IsoStatus::NotIsomorphic)
      throw AnalysisError(std::string("the glued bimodule does not restrict to ") + which +
                          " local bimodule: " + iso.reason);
    if (iso.status == IsoStatus::Unknown)
      throw AnalysisError(std::string("the restriction comparison with ") + which +
                          " local bimodule is inconclusive: " + iso.reason);
    return iso.status;
  };
  report.restriction_1 = restriction(ctx.side1, "the first");
  report.restriction_2 = restriction(ctx.side2, "the second");
  report.restrictions_agree = true;
  report.checked.push_back("glued bimodule restricts to the local ones");

  analysis::ClassificationReport cls = analysis::classify(*fr.cert, false);
  report.right_localizing = cls.right_localizing;
  if (!cls.right_localizing.holds)
    throw AnalysisError("the glued bimodule is not right localizing: " +
                        cls.right_localizing.witness);
  report.detail = "glued certificate verified";
  return {std::move(*fr.cert), std::move(report)};
}

}  // namespace frobmod::glue
