#include "frobmod/modules.hpp"

#include <algorithm>
#include <set>

namespace frobmod::modules {

using exactla::complement_rows;
using exactla::hstack;
using exactla::left_kernel;
using exactla::rank_of;
using exactla::row_basis;
using exactla::vstack;

Mat Representation::act(const Mat& elt) const {
  const std::uint32_t p = alg->field.p;
  Mat acc(dim, dim, p);
  for (int k = 0; k < alg->dim; ++k) {
    const std::uint32_t c = elt.at(0, k);
    if (c == 0) continue;
    acc = acc + action[k].scaled(c);
  }
  return acc;
}

ValidationReport validate_representation(const Representation& m) {
  ValidationReport rep;
  const auto& a = *m.alg;
  if (int(m.action.size()) != a.dim) {
    rep.issues.push_back({"shape", "one action matrix per algebra basis element required"});
    return rep;
  }
  for (int k = 0; k < a.dim; ++k)
    if (m.action[k].rows() != m.dim || m.action[k].cols() != m.dim) {
      rep.issues.push_back({"shape", "action matrix " + std::to_string(k + 1)});
      return rep;
    }
  if (!m.act(a.unit).is_identity()) rep.issues.push_back({"unit action", "unit"});
  for (int i = 0; i < a.dim && rep.issues.size() < 8; ++i)
    for (int j = 0; j < a.dim && rep.issues.size() < 8; ++j) {
      Mat lhs = m.action[i] * m.action[j];
      Mat rhs = m.act(a.product_row(i, j));
      if (lhs != rhs)
        rep.issues.push_back(
            {"structure constants", "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")"});
    }
  return rep;
}

Representation zero_module(const AlgebraPtr& a) {
  Representation m;
  m.alg = a;
  m.dim = 0;
  m.action.assign(a->dim, Mat(0, 0, a->field.p));
  return m;
}

Representation regular_module(const AlgebraPtr& a) {
  Representation m;
  m.alg = a;
  m.dim = a->dim;
  m.action = a->right_mult;
  return m;
}

DirectSum direct_sum(const std::vector<Representation>& parts) {
  if (parts.empty()) throw ModuleError("direct sum needs at least one part");
  const AlgebraPtr& a = parts[0].alg;
  const std::uint32_t p = a->field.p;
  for (const auto& part : parts)
    if (!algebra::same_structure(*part.alg, *a)) throw AlgebraMismatch("direct sum parts");
  int total = 0;
  for (const auto& part : parts) total += part.dim;
  DirectSum ds;
  ds.rep.alg = a;
  ds.rep.dim = total;
  ds.rep.action.assign(a->dim, Mat(total, total, p));
  int off = 0;
  for (const auto& part : parts) {
    for (int k = 0; k < a->dim; ++k)
      for (int i = 0; i < part.dim; ++i)
        for (int j = 0; j < part.dim; ++j)
          ds.rep.action[k].at(off + i, off + j) = part.action[k].at(i, j);
    Mat emb(part.dim, total, p);
    Mat prj(total, part.dim, p);
    for (int i = 0; i < part.dim; ++i) {
      emb.at(i, off + i) = 1;
      prj.at(off + i, i) = 1;
    }
    ds.embed.push_back(std::move(emb));
    ds.project.push_back(std::move(prj));
    off += part.dim;
  }
  return ds;
}

Submodule submodule_from_rows(const Representation& m, const Mat& rows) {
  Mat w = row_basis(rows);
  Submodule sub;
  sub.rep.alg = m.alg;
  sub.rep.dim = w.rows();
  sub.inclusion = w;
  for (int k = 0; k < m.alg->dim; ++k) {
    exactla::SolveResult s = exactla::solve_left(w, w * m.action[k]);
    if (!s.consistent) throw ModuleError("row span is not action stable");
    sub.rep.action.push_back(s.particular);
  }
  return sub;
}

Quotient quotient_by_rows(const Representation& m, const Mat& rows) {
  const std::uint32_t p = m.alg->field.p;
  Mat w = row_basis(rows);
  Mat c = complement_rows(w, m.dim, p);
  const int q = c.rows();
  Mat proj(m.dim, q, p);
  if (m.dim > 0) {
    Mat full = vstack(w, c);
    Mat finv = exactla::invert(full);
    for (int i = 0; i < m.dim; ++i)
      for (int j = 0; j < q; ++j) proj.at(i, j) = finv.at(i, w.rows() + j);
  }
  Quotient out;
  out.rep.alg = m.alg;
  out.rep.dim = q;
  out.projection = proj;
  out.section = c;
  for (int k = 0; k < m.alg->dim; ++k) {
    if (!(w * m.action[k] * proj).is_zero()) throw ModuleError("row span is not action stable");
    out.rep.action.push_back(c * m.action[k] * proj);
  }
  return out;
}

std::vector<Mat> hom_space(const Representation& m, const Representation& n) {
  if (!algebra::same_structure(*m.alg, *n.alg)) throw AlgebraMismatch("hom over different algebras");
  const std::uint32_t p = m.alg->field.p;
  const int dm = m.dim, dn = n.dim;
  if (dm == 0 || dn == 0) return {};
  const auto& gens = m.alg->generators;
  Mat sys(dm * dn, int(gens.size()) * dm * dn, p);
  for (std::size_t g = 0; g < gens.size(); ++g) {
    Mat am = m.act(gens[g]);
    Mat an = n.act(gens[g]);
    const int base = int(g) * dm * dn;
    for (int i = 0; i < dm; ++i)
      for (int j = 0; j < dn; ++j) {
        const int col = base + i * dn + j;
        for (int k = 0; k < dm; ++k)
          sys.at(k * dn + j, col) = exactla::add_mod(sys.at(k * dn + j, col), am.at(i, k), p);
        for (int l = 0; l < dn; ++l)
          sys.at(i * dn + l, col) = exactla::sub_mod(sys.at(i * dn + l, col), an.at(l, j), p);
      }
  }
  Mat ker = left_kernel(sys);
  std::vector<Mat> out;
  for (int r = 0; r < ker.rows(); ++r) {
    Mat h(dm, dn, p);
    for (int i = 0; i < dm; ++i)
      for (int j = 0; j < dn; ++j) h.at(i, j) = ker.at(r, i * dn + j);
    out.push_back(std::move(h));
  }
  return out;
}

namespace {

// solve for an intertwiner H: m -> n with cl * H = cr
std::optional<Mat> constrained_hom(const Representation& m, const Representation& n, const Mat& cl,
                                   const Mat& cr) {
  const std::uint32_t p = m.alg->field.p;
  const int dm = m.dim, dn = n.dim;
  if (dm == 0) return Mat(0, dn, p);
  const auto& gens = m.alg->generators;
  const int hom_cols = int(gens.size()) * dm * dn;
  const int aff_cols = cl.rows() * dn;
  Mat sys(dm * dn, hom_cols + aff_cols, p);
  Mat rhs(1, hom_cols + aff_cols, p);
  for (std::size_t g = 0; g < gens.size(); ++g) {
    Mat am = m.act(gens[g]);
    Mat an = n.act(gens[g]);
    const int base = int(g) * dm * dn;
    for (int i = 0; i < dm; ++i)
      for (int j = 0; j < dn; ++j) {
        const int col = base + i * dn + j;
        for (int k = 0; k < dm; ++k)
          sys.at(k * dn + j, col) = exactla::add_mod(sys.at(k * dn + j, col), am.at(i, k), p);
        for (int l = 0; l < dn; ++l)
          sys.at(i * dn + l, col) = exactla::sub_mod(sys.at(i * dn + l, col), an.at(l, j), p);
      }
  }
  for (int t = 0; t < cl.rows(); ++t)
    for (int j = 0; j < dn; ++j) {
      const int col = hom_cols + t * dn + j;
      for (int k = 0; k < dm; ++k) sys.at(k * dn + j, col) = cl.at(t, k);
      rhs.at(0, col) = cr.at(t, j);
    }
  exactla::SolveResult s = exactla::solve_left(sys, rhs);
  if (!s.consistent) return std::nullopt;
  Mat h(dm, dn, p);
  for (int i = 0; i < dm; ++i)
    for (int j = 0; j < dn; ++j) h.at(i, j) = s.particular.at(0, i * dn + j);
  return h;
}

}  // namespace

int StandardCatalog::class_position(int rep_index) const {
  for (std::size_t i = 0; i < class_reps.size(); ++i)
    if (class_reps[i] == rep_index) return int(i);
  throw ModuleError("index is not a class representative");
}

StandardCatalog standard_catalog(const AlgebraPtr& a) {
  if (a->non_primitive)
    throw NonPrimitiveIdempotents("catalog requires primitive idempotents");
  StandardCatalog cat;
  cat.alg = a;
  cat.radical_rows = algebra::radical(*a);
  const std::uint32_t p = a->field.p;
  const int n = int(a->idempotents.size());

  int sum_p = 0, sum_e = 0;
  for (int i = 0; i < n; ++i) {
    CatalogEntry entry;
    const Mat& e = a->idempotents[i];

    Mat pw = row_basis(a->lmul_matrix(e));
    entry.P.alg = a;
    entry.P.dim = pw.rows();
    for (int k = 0; k < a->dim; ++k) {
      exactla::SolveResult s = exactla::solve_left(pw, pw * a->right_mult[k]);
      if (!s.consistent) throw ModuleError("projective rows not stable");
      entry.P.action.push_back(s.particular);
    }

    Mat rad_in_p(0, entry.P.dim, p);
    for (int r = 0; r < cat.radical_rows.rows(); ++r)
      rad_in_p = vstack(rad_in_p, entry.P.act(cat.radical_rows.row(r)));
    Quotient top = quotient_by_rows(entry.P, rad_in_p);
    entry.S = top.rep;
    entry.top_projection = top.projection;

    Mat vw = row_basis(a->rmul_matrix(e));
    entry.E.alg = a;
    entry.E.dim = vw.rows();
    for (int k = 0; k < a->dim; ++k) {
      exactla::SolveResult s = exactla::solve_left(vw, vw * a->left_mult[k]);
      if (!s.consistent) throw ModuleError("injective rows not stable");
      entry.E.action.push_back(s.particular.transpose());
    }

    if (!validate_representation(entry.P).ok() || !validate_representation(entry.S).ok() ||
        !validate_representation(entry.E).ok())
      throw ModuleError("catalog entry fails representation validation");

    cat.entries.push_back(std::move(entry));
    sum_p += cat.entries.back().P.dim;
    sum_e += cat.entries.back().E.dim;
  }
  if (sum_p != a->dim || sum_e != a->dim)
    throw ModuleError("catalog dimensions do not add up to the algebra dimension");

  for (int i = 0; i < n; ++i) {
    CatalogEntry& entry = cat.entries[i];
    entry.iso_class = i;
    for (int j = 0; j < i; ++j)
      if (cat.entries[j].iso_class == j &&
          !hom_space(cat.entries[j].S, entry.S).empty()) {
        entry.iso_class = j;
        break;
      }
    entry.end_dim = int(hom_space(entry.S, entry.S).size());
    if (entry.end_dim == 0) throw ModuleError("simple module with no endomorphisms");

    // the socle of E_i is simple and matches S_i
    Mat soc(0, entry.E.dim, p);
    if (cat.radical_rows.rows() == 0) {
      soc = Mat::identity(entry.E.dim, p);
    } else {
      Mat stacked(entry.E.dim, 0, p);
      for (int r = 0; r < cat.radical_rows.rows(); ++r)
        stacked = hstack(stacked, entry.E.act(cat.radical_rows.row(r)));
      soc = left_kernel(stacked);
    }
    if (soc.rows() != entry.S.dim) throw ModuleError("injective socle has unexpected dimension");
    std::vector<Mat> inc = hom_space(entry.S, entry.E);
    bool found = false;
    for (const Mat& h : inc)
      if (rank_of(h) == entry.S.dim) {
        entry.socle_inclusion = h;
        found = true;
        break;
      }
    if (!found) throw ModuleError("no monic map from the simple into its injective");
  }

  for (int i = 0; i < n; ++i)
    if (cat.entries[i].iso_class == i) cat.class_reps.push_back(i);
  return cat;
}

Mat socle_rows(const StandardCatalog& cat, const Representation& m) {
  const std::uint32_t p = m.alg->field.p;
  if (m.dim == 0) return Mat(0, 0, p);
  if (cat.radical_rows.rows() == 0) return Mat::identity(m.dim, p);
  Mat stacked(m.dim, 0, p);
  for (int r = 0; r < cat.radical_rows.rows(); ++r)
    stacked = hstack(stacked, m.act(cat.radical_rows.row(r)));
  return left_kernel(stacked);
}

SocleDecomposition socle_decomposition(const StandardCatalog& cat, const Representation& m) {
  const std::uint32_t p = m.alg->field.p;
  SocleDecomposition sd;
  sd.socle = socle_rows(cat, m);
  sd.mult.assign(cat.class_reps.size(), 0);
  if (sd.socle.rows() == 0) return sd;
  Submodule soc = submodule_from_rows(m, sd.socle);
  Mat acc(0, m.dim, p);
  for (std::size_t pos = 0; pos < cat.class_reps.size(); ++pos) {
    const int rep = cat.class_reps[pos];
    const Representation& s = cat.entries[rep].S;
    for (const Mat& h : hom_space(s, soc.rep)) {
      Mat image = h * soc.inclusion;
      if (rank_of(vstack(acc, image)) == acc.rows() + s.dim) {
        acc = row_basis(vstack(acc, image));
        sd.pieces.push_back({rep, image});
        ++sd.mult[pos];
      }
    }
  }
  if (acc.rows() != sd.socle.rows()) throw ModuleError("socle decomposition incomplete");
  return sd;
}

StructureSeries structure_series(const StandardCatalog& cat, const Representation& m) {
  const std::uint32_t p = m.alg->field.p;
  StructureSeries ss;
  ss.factors.assign(cat.class_reps.size(), 0);

  Mat t(0, m.dim, p);
  while (t.rows() < m.dim) {
    Quotient q = quotient_by_rows(m, t);
    Mat soc = socle_rows(cat, q.rep);
    if (soc.rows() == 0) throw ModuleError("socle series stalled");
    Submodule layer = submodule_from_rows(q.rep, soc);
    for (std::size_t pos = 0; pos < cat.class_reps.size(); ++pos) {
      const CatalogEntry& entry = cat.entries[cat.class_reps[pos]];
      const int homs = int(hom_space(entry.S, layer.rep).size());
      if (homs % entry.end_dim != 0) throw ModuleError("multiplicity is not integral");
      ss.factors[pos] += homs / entry.end_dim;
    }
    t = row_basis(vstack(t, soc * q.section));
    ss.socle_series.push_back(t);
    ++ss.length;
  }

  Mat r = Mat::identity(m.dim, p);
  ss.radical_series.push_back(r);
  while (r.rows() > 0 && cat.radical_rows.rows() > 0) {
    Mat next(0, m.dim, p);
    for (int k = 0; k < cat.radical_rows.rows(); ++k)
      next = vstack(next, r * m.act(cat.radical_rows.row(k)));
    next = row_basis(next);
    if (next.rows() == r.rows()) throw ModuleError("radical series stalled");
    ss.radical_series.push_back(next);
    r = next;
    if (next.rows() == 0) break;
  }
  return ss;
}

std::vector<int> composition_factors(const StandardCatalog& cat, const Representation& m) {
  return structure_series(cat, m).factors;
}

InjectiveHull injective_hull(const StandardCatalog& cat, const Representation& m) {
  const std::uint32_t p = m.alg->field.p;
  InjectiveHull ih;
  if (m.dim == 0) {
    ih.hull = zero_module(cat.alg);
    ih.embed = Mat(0, 0, p);
    ih.mult.assign(cat.class_reps.size(), 0);
    return ih;
  }
  SocleDecomposition sd = socle_decomposition(cat, m);
  ih.mult = sd.mult;
  std::vector<Representation> blocks;
  for (const auto& [rep, piece] : sd.pieces) blocks.push_back(cat.entries[rep].E);
  DirectSum hull = direct_sum(blocks);
  ih.hull = hull.rep;

  Mat cl(0, m.dim, p);
  Mat cr(0, hull.rep.dim, p);
  for (std::size_t t = 0; t < sd.pieces.size(); ++t) {
    const auto& [rep, piece] = sd.pieces[t];
    cl = vstack(cl, piece);
    cr = vstack(cr, cat.entries[rep].socle_inclusion * hull.embed[t]);
  }
  std::optional<Mat> h = constrained_hom(m, hull.rep, cl, cr);
  if (!h) throw ExtensionFailure("no extension of the socle inclusion to the hull");
  if (rank_of(*h) != m.dim) throw ExtensionFailure("socle extension is not injective");
  ih.embed = *h;
  return ih;
}

InjectiveDecomposition injective_decompose(const StandardCatalog& cat, const Representation& m) {
  InjectiveHull ih = injective_hull(cat, m);
  if (ih.hull.dim != m.dim)
    throw NotInjective("module is a proper essential submodule of its hull");
  InjectiveDecomposition d;
  d.mult = ih.mult;
  d.iso = ih.embed;
  d.standard_form = ih.hull;
  return d;
}

IsoResult iso_test(const Representation& m, const Representation& n, std::mt19937_64& rng,
                   const StandardCatalog* cat) {
  if (!algebra::same_structure(*m.alg, *n.alg))
    throw AlgebraMismatch("isomorphism test over different algebras");
  const std::uint32_t p = m.alg->field.p;
  IsoResult res;
  if (m.dim != n.dim) {
    res.status = IsoStatus::NotIsomorphic;
    res.reason = "dimension mismatch";
    return res;
  }
  if (m.dim == 0) {
    res.status = IsoStatus::Isomorphic;
    res.cert = Mat(0, 0, p);
    return res;
  }
  if (cat != nullptr) {
    if (composition_factors(*cat, m) != composition_factors(*cat, n)) {
      res.status = IsoStatus::NotIsomorphic;
      res.reason = "composition factors differ";
      return res;
    }
    if (socle_decomposition(*cat, m).mult != socle_decomposition(*cat, n).mult) {
      res.status = IsoStatus::NotIsomorphic;
      res.reason = "socle multiplicities differ";
      return res;
    }
  }
  std::vector<Mat> homs = hom_space(m, n);
  if (homs.empty()) {
    res.status = IsoStatus::NotIsomorphic;
    res.reason = "no homomorphisms";
    return res;
  }
  if (hom_space(m, m).size() != hom_space(n, n).size()) {
    res.status = IsoStatus::NotIsomorphic;
    res.reason = "endomorphism dimensions differ";
    return res;
  }

  const int h = int(homs.size());
  auto try_combo = [&](const std::vector<std::uint32_t>& coeffs) -> bool {
    Mat cand(m.dim, n.dim, p);
    for (int t = 0; t < h; ++t)
      if (coeffs[t] != 0) cand = cand + homs[t].scaled(coeffs[t]);
    if (rank_of(cand) != m.dim) return false;
    res.status = IsoStatus::Isomorphic;
    res.cert = cand;
    return true;
  };

  double space = 1;
  for (int t = 0; t < h; ++t) space *= p;
  if (space <= 3125.0) {
    std::vector<std::uint32_t> coeffs(h, 0);
    for (;;) {
      int pos = 0;
      while (pos < h) {
        coeffs[pos] = (coeffs[pos] + 1) % p;
        if (coeffs[pos] != 0) break;
        ++pos;
      }
      if (pos == h) break;
      if (try_combo(coeffs)) return res;
    }
    res.status = IsoStatus::NotIsomorphic;
    res.reason = "hom space contains no invertible element";
    return res;
  }
  for (int trial = 0; trial < 64; ++trial) {
    Mat c = exactla::random_matrix(1, h, p, rng);
    std::vector<std::uint32_t> coeffs(h);
    for (int t = 0; t < h; ++t) coeffs[t] = c.at(0, t);
    if (try_combo(coeffs)) return res;
  }
  res.status = IsoStatus::Unknown;
  res.reason = "randomized search budget exhausted";
  return res;
}

ProjectivityResult is_projective(const Representation& m) {
  const std::uint32_t p = m.alg->field.p;
  const int dm = m.dim, da = m.alg->dim;
  ProjectivityResult out;
  if (dm == 0) {
    out.projective = true;
    out.splitting = Mat(0, 0, p);
    return out;
  }
  Representation reg = regular_module(m.alg);
  std::vector<Mat> homs = hom_space(m, reg);
  const int h = int(homs.size());
  // cover component i sends the regular module onto v_i A; row k of p_i is row i of action[k]
  std::vector<Mat> cover(dm, Mat(da, dm, p));
  for (int i = 0; i < dm; ++i)
    for (int k = 0; k < da; ++k)
      for (int j = 0; j < dm; ++j) cover[i].at(k, j) = m.action[k].at(i, j);
  if (h == 0) return out;
  Mat sys(dm * h, dm * dm, p);
  for (int i = 0; i < dm; ++i)
    for (int t = 0; t < h; ++t) {
      Mat block = homs[t] * cover[i];
      for (int r = 0; r < dm; ++r)
        for (int s = 0; s < dm; ++s) sys.at(i * h + t, r * dm + s) = block.at(r, s);
    }
  Mat rhs(1, dm * dm, p);
  for (int r = 0; r < dm; ++r) rhs.at(0, r * dm + r) = 1;
  exactla::SolveResult sol = exactla::solve_left(sys, rhs);
  if (!sol.consistent) return out;
  out.projective = true;
  out.splitting = Mat(dm, dm * da, p);
  for (int i = 0; i < dm; ++i) {
    Mat comp(dm, da, p);
    for (int t = 0; t < h; ++t) {
      const std::uint32_t c = sol.particular.at(0, i * h + t);
      if (c != 0) comp = comp + homs[t].scaled(c);
    }
    for (int r = 0; r < dm; ++r)
      for (int s = 0; s < da; ++s) out.splitting.at(r, i * da + s) = comp.at(r, s);
  }
  return out;
}

Submodule torsion_submodule(const StandardCatalog& cat, const Representation& m,
                            const std::vector<int>& killed_classes) {
  const std::uint32_t p = m.alg->field.p;
  std::set<int> killed;
  for (int i : killed_classes) {
    if (i < 0 || i >= cat.n()) throw ModuleError("killed index out of range");
    killed.insert(cat.entries[i].iso_class);
  }
  Mat t(0, m.dim, p);
  for (;;) {
    Quotient q = quotient_by_rows(m, t);
    if (q.rep.dim == 0) break;
    SocleDecomposition sd = socle_decomposition(cat, q.rep);
    Mat fresh(0, q.rep.dim, p);
    for (const auto& [rep, piece] : sd.pieces)
      if (killed.count(rep)) fresh = vstack(fresh, piece);
    if (fresh.rows() == 0) break;
    Mat lifted = fresh * q.section;
    Mat merged = row_basis(vstack(t, lifted));
    if (merged.rows() == t.rows()) break;
    t = merged;
  }
  return submodule_from_rows(m, t);
}

}  // namespace frobmod::modules
