#include "frobmod/spectrum.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace frobmod::spectrum {

namespace {

Mat basis_row(std::uint32_t p, int n, int i) {
  Mat r(1, n, p);
  r.at(0, i) = 1;
  return r;
}

// operator restricted to the row space of w, with a stability guard
Mat act_in_basis(const Mat& w, const Mat& op, const char* what) {
  exactla::SolveResult s = exactla::solve_left(w, w * op);
  if (!s.consistent) throw SpectrumError(std::string(what) + " leaves its spanning rows");
  return s.particular;
}

Mat vec_row(const Mat& m) {
  Mat v(1, m.rows() * m.cols(), m.modulus());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) v.at(0, i * m.cols() + j) = m.at(i, j);
  return v;
}

void check_algebra(const AlgebraPtr& a, const AlgebraPtr& b, const char* what) {
  if (!algebra::same_structure(*a, *b))
    throw AlgebraMismatch(std::string(what) + " over mismatched algebras");
}

CatalogPtr catalog_or(const AlgebraPtr& a, CatalogPtr cat) {
  if (cat) {
    if (!algebra::same_structure(*cat->alg, *a))
      throw AlgebraMismatch("catalog belongs to a different algebra");
    return cat;
  }
  return shared_catalog(a);
}

std::vector<int> normalize_classes(const StandardCatalog& cat, std::vector<int> classes) {
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  for (int c : classes)
    if (c < 0 || c >= int(cat.class_reps.size()))
      throw SpectrumError("simple class index out of range");
  return classes;
}

Representation direct_sum_reps(const AlgebraPtr& a, const std::vector<Representation>& parts) {
  int total = 0;
  for (const Representation& r : parts) total += r.dim;
  const std::uint32_t p = a->field.p;
  Representation out{a, total, {}};
  for (int g = 0; g < a->dim; ++g) {
    Mat block(total, total, p);
    int off = 0;
    for (const Representation& r : parts) {
      for (int i = 0; i < r.dim; ++i)
        for (int j = 0; j < r.dim; ++j) block.at(off + i, off + j) = r.action[g].at(i, j);
      off += r.dim;
    }
    out.action.push_back(block);
  }
  return out;
}

}  // namespace

CatalogPtr shared_catalog(const AlgebraPtr& a) {
  return std::make_shared<const StandardCatalog>(modules::standard_catalog(a));
}

bool LocalizingSubcat::kills(int class_pos) const {
  return std::binary_search(killed.begin(), killed.end(), class_pos);
}

std::vector<int> LocalizingSubcat::surviving() const {
  std::vector<int> out;
  for (int c = 0; c < int(cat->class_reps.size()); ++c)
    if (!kills(c)) out.push_back(c);
  return out;
}

LocalizingSubcat localizing_from_killed(const AlgebraPtr& a, const std::vector<int>& killed,
                                        CatalogPtr cat) {
  LocalizingSubcat t;
  t.alg = a;
  t.cat = catalog_or(a, std::move(cat));
  t.killed = normalize_classes(*t.cat, killed);
  return t;
}

LocalizingSubcat localizing_from_modules(const AlgebraPtr& a,
                                         const std::vector<Representation>& sigma,
                                         CatalogPtr cat) {
  LocalizingSubcat t;
  t.alg = a;
  t.cat = catalog_or(a, std::move(cat));
  std::vector<Representation> hulls;
  for (const Representation& x : sigma) {
    check_algebra(x.alg, a, "cogenerating family");
    hulls.push_back(modules::injective_hull(*t.cat, x).hull);
  }
  for (std::size_t c = 0; c < t.cat->class_reps.size(); ++c) {
    const Representation& s = t.cat->entries[t.cat->class_reps[c]].S;
    bool dies = true;
    for (const Representation& h : hulls)
      if (!modules::hom_space(s, h).empty()) {
        dies = false;
        break;
      }
    if (dies) t.killed.push_back(int(c));
  }
  return t;
}

LocalizingSubcat localizing_from_kernel(const bimodules::Bimodule& m, CatalogPtr cat) {
  LocalizingSubcat t;
  t.alg = m.left_alg;
  t.cat = catalog_or(m.left_alg, std::move(cat));
  for (std::size_t c = 0; c < t.cat->class_reps.size(); ++c) {
    const Representation& s = t.cat->entries[t.cat->class_reps[c]].S;
    if (bimodules::tensor(s, m).rep.dim == 0) t.killed.push_back(int(c));
  }
  return t;
}

bool is_member(const LocalizingSubcat& t, const Representation& m) {
  check_algebra(m.alg, t.alg, "membership test");
  std::vector<int> mult = modules::composition_factors(*t.cat, m);
  for (std::size_t c = 0; c < mult.size(); ++c)
    if (mult[c] > 0 && !t.kills(int(c))) return false;
  return true;
}

modules::Submodule torsion_part(const LocalizingSubcat& t, const Representation& m) {
  check_algebra(m.alg, t.alg, "torsion part");
  std::vector<int> reps;
  for (int c : t.killed) reps.push_back(t.cat->class_reps[c]);
  return modules::torsion_submodule(*t.cat, m, reps);
}

EnvelopeClosure closed_under_envelopes(const LocalizingSubcat& t) {
  EnvelopeClosure out;
  for (int c : t.killed) {
    const Representation& hull = t.cat->entries[t.cat->class_reps[c]].E;
    for (int f : factor_support(*t.cat, hull))
      if (!t.kills(f)) {
        out.closed = false;
        out.witness_class = c;
        out.witness_factor = f;
        return out;
      }
  }
  return out;
}

LatticeReport lattice(const LocalizingSubcat& t1, const LocalizingSubcat& t2) {
  check_algebra(t1.alg, t2.alg, "lattice");
  LatticeReport out;
  std::vector<int> both, either;
  std::set_union(t1.killed.begin(), t1.killed.end(), t2.killed.begin(), t2.killed.end(),
                 std::back_inserter(either));
  std::set_intersection(t1.killed.begin(), t1.killed.end(), t2.killed.begin(), t2.killed.end(),
                        std::back_inserter(both));
  out.gabriel_product = localizing_from_killed(t1.alg, either, t1.cat);
  out.open_intersection = out.gabriel_product;
  out.open_union = localizing_from_killed(t1.alg, both, t1.cat);
  out.is_cover = both.empty();
  out.is_disjoint = either.size() == t1.cat->class_reps.size();
  return out;
}

WeaklyOpenSubspace weakly_open(const LocalizingSubcat& t) {
  const AlgebraPtr& a = t.alg;
  const std::uint32_t p = a->field.p;
  WeaklyOpenSubspace u;
  u.alg = a;
  u.cat = t.cat;
  u.killed = t.killed;
  u.surviving = t.surviving();
  for (int i = 0; i < t.cat->n(); ++i)
    if (!t.kills(t.cat->class_position(t.cat->entries[i].iso_class)))
      u.surviving_idems.push_back(i);
  u.corner = algebra::corner(a, u.surviving_idems);

  // the modules killed by e' must be exactly those with killed support
  for (std::size_t c = 0; c < t.cat->class_reps.size(); ++c) {
    const Representation& s = t.cat->entries[t.cat->class_reps[c]].S;
    Mat acted = s.act(u.corner.eprime);
    if ((acted == Mat(s.dim, s.dim, p)) != t.kills(int(c)))
      throw SpectrumError("corner idempotent separates the wrong simples");
  }
  for (int i = 0; i < t.cat->n(); ++i) {
    const Representation& e = t.cat->entries[i].E;
    bool supported_in_killed = true;
    for (int f : factor_support(*t.cat, e))
      if (!t.kills(f)) supported_in_killed = false;
    Mat acted = e.act(u.corner.eprime);
    if ((acted == Mat(e.dim, e.dim, p)) != supported_in_killed)
      throw SpectrumError("corner idempotent separates the wrong hulls");
  }

  if (u.corner.alg->dim == 0) {
    u.transfer_up = bimodules::zero_bimodule(a, u.corner.alg);
    u.transfer_down = bimodules::zero_bimodule(u.corner.alg, a);
    u.pushforward_exact = true;
    return u;
  }

  Mat up_rows = exactla::row_basis(a->rmul_matrix(u.corner.eprime));
  std::vector<Mat> up_l, up_r;
  for (int i = 0; i < a->dim; ++i)
    up_l.push_back(act_in_basis(up_rows, a->lmul_matrix(basis_row(p, a->dim, i)),
                                "left multiplication on Ae'"));
  for (int j = 0; j < u.corner.alg->dim; ++j)
    up_r.push_back(act_in_basis(up_rows, a->rmul_matrix(u.corner.incl.row(j)),
                                "right corner multiplication on Ae'"));
  u.transfer_up = bimodules::from_actions(a, u.corner.alg, up_rows.rows(), up_l, up_r);

  Mat down_rows = exactla::row_basis(a->lmul_matrix(u.corner.eprime));
  std::vector<Mat> down_l, down_r;
  for (int i = 0; i < u.corner.alg->dim; ++i)
    down_l.push_back(act_in_basis(down_rows, a->lmul_matrix(u.corner.incl.row(i)),
                                  "left corner multiplication on e'A"));
  for (int j = 0; j < a->dim; ++j)
    down_r.push_back(act_in_basis(down_rows, a->rmul_matrix(basis_row(p, a->dim, j)),
                                  "right multiplication on e'A"));
  u.transfer_down = bimodules::from_actions(u.corner.alg, a, down_rows.rows(), down_l, down_r);

  u.pushforward_exact = modules::is_projective(bimodules::right_restriction(u.transfer_up)).projective;

  // compression must invert both transfers on every corner simple
  u.corner_cat = shared_catalog(u.corner.alg);
  std::mt19937_64 rng(0x5eedu);
  for (int rep_index : u.corner_cat->class_reps) {
    const Representation& s = u.corner_cat->entries[rep_index].S;
    Compression via_hom = compress(u, coextend(u, s).rep);
    if (modules::iso_test(via_hom.rep, s, rng, u.corner_cat.get()).status !=
        modules::IsoStatus::Isomorphic)
      throw SpectrumError("compression does not invert the hom transfer");
    Compression via_tensor = compress(u, extend(u, s).rep);
    if (modules::iso_test(via_tensor.rep, s, rng, u.corner_cat.get()).status !=
        modules::IsoStatus::Isomorphic)
      throw SpectrumError("compression does not invert the tensor transfer");
  }
  return u;
}

Compression compress(const WeaklyOpenSubspace& u, const Representation& m) {
  check_algebra(m.alg, u.alg, "compression");
  Compression out;
  Mat image = m.act(u.corner.eprime);
  out.basis = exactla::row_basis(image);
  exactla::SolveResult pr = exactla::solve_left(out.basis, image);
  if (!pr.consistent) throw SpectrumError("compression image escapes its basis");
  out.project = pr.particular;
  out.rep.alg = u.corner.alg;
  out.rep.dim = out.basis.rows();
  for (int j = 0; j < u.corner.alg->dim; ++j)
    out.rep.action.push_back(
        act_in_basis(out.basis, m.act(u.corner.incl.row(j)), "corner action on the compression"));
  return out;
}

Mat compress_hom(const WeaklyOpenSubspace&, const Compression& cm, const Compression& cn,
                 const Mat& f) {
  exactla::SolveResult s = exactla::solve_left(cn.basis, cm.basis * f);
  if (!s.consistent) throw SpectrumError("map does not respect the corner images");
  return s.particular;
}

bimodules::TensorModule extend(const WeaklyOpenSubspace& u, const Representation& n) {
  check_algebra(n.alg, u.corner.alg, "extension");
  return bimodules::tensor(n, u.transfer_down);
}

bimodules::HomModule coextend(const WeaklyOpenSubspace& u, const Representation& n) {
  check_algebra(n.alg, u.corner.alg, "coextension");
  return bimodules::hom_functor(u.transfer_up, n);
}

Mat coextend_hom(const WeaklyOpenSubspace& u, const bimodules::HomModule& hm,
                 const bimodules::HomModule& hn, const Mat& f) {
  const std::uint32_t p = u.alg->field.p;
  const int up_dim = u.transfer_up.dim;
  Mat out(int(hm.basis.size()), int(hn.basis.size()), p);
  if (hn.basis.empty()) {
    if (!hm.basis.empty() && !(hm.basis[0] * f == Mat(up_dim, f.cols(), p)))
      throw SpectrumError("transferred map misses the empty hom space");
    return out;
  }
  Mat span(0, up_dim * f.cols(), p);
  for (const Mat& h : hn.basis) span = exactla::vstack(span, vec_row(h));
  for (std::size_t i = 0; i < hm.basis.size(); ++i) {
    exactla::SolveResult s = exactla::solve_left(span, vec_row(hm.basis[i] * f));
    if (!s.consistent) throw SpectrumError("transferred map is not a hom combination");
    for (std::size_t j = 0; j < hn.basis.size(); ++j) out.at(int(i), int(j)) = s.particular.at(0, int(j));
  }
  return out;
}

std::vector<int> factor_support(const StandardCatalog& cat, const Representation& m) {
  std::vector<int> mult = modules::composition_factors(cat, m);
  std::vector<int> out;
  for (std::size_t c = 0; c < mult.size(); ++c)
    if (mult[c] > 0) out.push_back(int(c));
  return out;
}

TopologyReport gabriel_topology(const AlgebraPtr& a, CatalogPtr cat) {
  CatalogPtr c = catalog_or(a, std::move(cat));
  TopologyReport out;
  out.points = int(c->class_reps.size());
  out.discrete = true;
  for (std::size_t pos = 0; pos < c->class_reps.size(); ++pos) {
    std::vector<int> supp = factor_support(*c, c->entries[c->class_reps[pos]].S);
    if (supp != std::vector<int>{int(pos)}) out.discrete = false;
    out.simple_supports.push_back(std::move(supp));
  }
  for (int i = 0; i < c->n(); ++i) {
    out.projective_supports.push_back(factor_support(*c, c->entries[i].P));
    out.injective_supports.push_back(factor_support(*c, c->entries[i].E));
  }
  if (out.points > 12) return out;
  if (out.discrete) {
    // singleton closed sets generate the full power set under union
    for (int mask = 0; mask < (1 << out.points); ++mask) {
      std::vector<int> s;
      for (int b = 0; b < out.points; ++b)
        if (mask & (1 << b)) s.push_back(b);
      out.closed_sets.push_back(std::move(s));
    }
    return out;
  }
  std::set<std::vector<int>> family;
  family.insert({});
  std::vector<int> full;
  for (int b = 0; b < out.points; ++b) full.push_back(b);
  family.insert(full);
  for (const auto& s : out.simple_supports) family.insert(s);
  for (const auto& s : out.projective_supports) family.insert(s);
  for (const auto& s : out.injective_supports) family.insert(s);
  for (bool grew = true; grew;) {
    grew = false;
    std::vector<std::vector<int>> current(family.begin(), family.end());
    for (std::size_t i = 0; i < current.size(); ++i)
      for (std::size_t j = i + 1; j < current.size(); ++j) {
        std::vector<int> uni, inter;
        std::set_union(current[i].begin(), current[i].end(), current[j].begin(), current[j].end(),
                       std::back_inserter(uni));
        std::set_intersection(current[i].begin(), current[i].end(), current[j].begin(),
                              current[j].end(), std::back_inserter(inter));
        grew |= family.insert(uni).second;
        grew |= family.insert(inter).second;
      }
  }
  out.closed_sets.assign(family.begin(), family.end());
  return out;
}

LocalityReport locality_report(const AlgebraPtr& a, CatalogPtr cat) {
  CatalogPtr c = catalog_or(a, std::move(cat));
  LocalityReport out;
  out.is_local = c->class_reps.size() == 1;
  out.is_semilocal = true;
  std::vector<Representation> hulls;
  for (int rep_index : c->class_reps) hulls.push_back(c->entries[rep_index].E);
  out.cogenerator = direct_sum_reps(a, hulls);
  out.cogenerates = true;
  for (int rep_index : c->class_reps)
    if (modules::hom_space(c->entries[rep_index].S, out.cogenerator).empty())
      out.cogenerates = false;
  return out;
}

}  // namespace frobmod::spectrum
