#include "frobmod/analysis.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace frobmod::analysis {

namespace {

using exactla::hstack;
using exactla::rank_of;
using exactla::row_basis;
using exactla::solve_left;
using modules::IsoStatus;
using modules::StandardCatalog;
using spectrum::factor_support;

const Representation& simple_at(const StandardCatalog& cat, int pos) {
  return cat.entries[cat.class_reps[pos]].S;
}

const Representation& hull_at(const StandardCatalog& cat, int pos) {
  return cat.entries[cat.class_reps[pos]].E;
}

std::string class_set(const std::vector<int>& v) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ",";
    os << v[i] + 1;
  }
  os << "}";
  return os.str();
}

bool subset_of(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// factor supports of S_c (x) m for every class c of the source catalog
std::vector<std::vector<int>> simple_supports(const StandardCatalog& src,
                                              const StandardCatalog& dst, const Bimodule& m) {
  std::vector<std::vector<int>> out;
  for (std::size_t c = 0; c < src.class_reps.size(); ++c)
    out.push_back(factor_support(dst, bimodules::tensor(simple_at(src, int(c)), m).rep));
  return out;
}

// coordinates of the rows of map relative to basis; inconsistency means the
// image leaves the claimed subspace and is an internal defect
Mat coords_or_throw(const Mat& basis, const Mat& map, const char* what) {
  auto s = solve_left(basis, map);
  if (!s.consistent) throw AnalysisError(std::string(what) + " leaves its subspace");
  return s.particular;
}

// supports of the round trips through both functors; fg sends B-simples
// through the dual then the bimodule, the other order probes A-simples
std::vector<std::vector<int>> composite_supports(const Bimodule& m, const Bimodule& dual,
                                                 const StandardCatalog& cat, bool fg) {
  std::vector<std::vector<int>> out;
  for (std::size_t c = 0; c < cat.class_reps.size(); ++c) {
    const Representation& s = simple_at(cat, int(c));
    Representation mid =
        fg ? bimodules::tensor(s, dual).rep : bimodules::tensor(s, m).rep;
    Representation back =
        fg ? bimodules::tensor(mid, m).rep : bimodules::tensor(mid, dual).rep;
    out.push_back(factor_support(cat, back));
  }
  return out;
}

PredicateVerdict per_point_verdict(const std::vector<std::vector<int>>& supports,
                                   const char* functor_pair) {
  PredicateVerdict v;
  v.holds = true;
  for (std::size_t c = 0; c < supports.size(); ++c) {
    for (int d : supports[c]) {
      if (d != int(c)) {
        v.holds = false;
        std::ostringstream os;
        os << functor_pair << "(S_" << c + 1 << ") has a composition factor in class "
           << d + 1;
        v.witness = os.str();
        return v;
      }
    }
  }
  return v;
}

// exhaustive sweep over killed sets; the image of every set must stay inside
// the set exactly when the per point test says so
void cross_validate(const std::vector<std::vector<int>>& supports, bool per_point) {
  const int n = int(supports.size());
  if (n > 10) return;
  bool brute = true;
  for (std::uint32_t mask = 0; mask < (1u << n) && brute; ++mask) {
    for (int c = 0; c < n && brute; ++c) {
      if (!(mask >> c & 1)) continue;
      for (int d : supports[c])
        if (!(mask >> d & 1)) brute = false;
    }
  }
  if (brute != per_point)
    throw AnalysisError("killed-set sweep disagrees with the one-point absorption test");
}

struct SquareLocalizing {
  PredicateVerdict with_zero;
  PredicateVerdict without_zero;
};

// stability of every killed set under both preimage operators reduces to a
// membership test: each simple must appear inside its own image
SquareLocalizing square_localizing(const std::vector<std::vector<int>>& supp_f,
                                   const std::vector<std::vector<int>>& supp_g) {
  const int n = int(supp_f.size());
  SquareLocalizing out;
  out.with_zero.holds = true;
  out.without_zero.holds = true;
  auto note = [](PredicateVerdict& v, const std::string& w) {
    if (v.holds) {
      v.holds = false;
      v.witness = w;
    }
  };
  for (int side = 0; side < 2; ++side) {
    const auto& supp = side == 0 ? supp_f : supp_g;
    const char* name = side == 0 ? "F" : "G";
    for (int i = 0; i < n; ++i) {
      const bool own = std::binary_search(supp[i].begin(), supp[i].end(), i);
      std::ostringstream os;
      if (supp[i].empty()) {
        os << name << " kills the simple of class " << i + 1;
        note(out.with_zero, os.str());
        if (n > 1) note(out.without_zero, os.str());
      } else if (!own) {
        os << "class " << i + 1 << " is not a factor of " << name << "(S_" << i + 1
           << "), which is supported on " << class_set(supp[i]);
        note(out.with_zero, os.str());
        note(out.without_zero, os.str());
      }
    }
  }
  return out;
}

void cross_validate_square(const std::vector<std::vector<int>>& supp_f,
                           const std::vector<std::vector<int>>& supp_g,
                           const SquareLocalizing& reduced) {
  const int n = int(supp_f.size());
  if (n > 12) return;
  for (int reading = 0; reading < 2; ++reading) {
    bool brute = true;
    for (std::uint32_t mask = 0; mask < (1u << n) && brute; ++mask) {
      if (reading == 1 && mask == 0) continue;
      for (const auto* supp : {&supp_f, &supp_g}) {
        for (int i = 0; i < n; ++i) {
          bool inside = true;
          for (int d : (*supp)[i])
            if (!(mask >> d & 1)) inside = false;
          if (inside && !(mask >> i & 1)) brute = false;
        }
      }
    }
    const bool claimed = reading == 0 ? reduced.with_zero.holds : reduced.without_zero.holds;
    if (brute != claimed)
      throw AnalysisError("killed-set sweep disagrees with the membership reduction");
  }
}

std::vector<int> idems_of_classes(const StandardCatalog& cat, const std::vector<int>& classes) {
  std::vector<int> out;
  for (int i = 0; i < cat.n(); ++i) {
    const int pos = cat.class_position(cat.entries[i].iso_class);
    if (std::binary_search(classes.begin(), classes.end(), pos)) out.push_back(i);
  }
  return out;
}

}  // namespace

Mat center_rows(const AlgebraPtr& a) { return algebra::center(*a); }

bool is_bimodule_map(const Bimodule& m, const Bimodule& n, const Mat& f) {
  if (!algebra::same_structure(*m.left_alg, *n.left_alg)) return false;
  if (!algebra::same_structure(*m.right_alg, *n.right_alg)) return false;
  if (f.rows() != m.dim || f.cols() != n.dim) return false;
  for (int i = 0; i < m.left_alg->dim; ++i)
    if (m.left_action[i] * f != f * n.left_action[i]) return false;
  for (int j = 0; j < m.right_alg->dim; ++j)
    if (m.right_action[j] * f != f * n.right_action[j]) return false;
  return true;
}

namespace {

RankReport rank_pair(const Bimodule& m, const Bimodule& dual) {
  RankReport r;
  r.left_alg = m.left_alg;
  r.right_alg = m.right_alg;
  r.left_cat = spectrum::shared_catalog(r.left_alg);
  r.right_cat = spectrum::shared_catalog(r.right_alg);
  const int na = int(r.left_cat->class_reps.size());
  const int nb = int(r.right_cat->class_reps.size());

  for (int x = 0; x < na; ++x)
    if (bimodules::tensor(simple_at(*r.left_cat, x), m).rep.dim > 0) r.supp_F.push_back(x);
  for (int y = 0; y < nb; ++y)
    if (bimodules::tensor(simple_at(*r.right_cat, y), dual).rep.dim > 0) r.supp_G.push_back(y);

  r.rrk.assign(na, std::vector<int>(nb, 0));
  r.lrk.assign(nb, std::vector<int>(na, 0));
  r.rho.assign(na, 0);
  r.lambda.assign(nb, 0);
  r.f.assign(na, -1);
  r.n_y.assign(nb, -1);

  for (int x = 0; x < na; ++x) {
    InjectiveImage im;
    im.value = bimodules::tensor(hull_at(*r.left_cat, x), m);
    im.dec = modules::injective_decompose(*r.right_cat, im.value.rep);
    r.rrk[x] = im.dec.mult;
    for (int y = 0; y < nb; ++y) r.rho[x] += r.rrk[x][y];
    int cls = -1, spread = 0;
    for (int y = 0; y < nb; ++y)
      if (r.rrk[x][y] > 0) {
        cls = y;
        ++spread;
      }
    if (spread == 1) r.f[x] = cls;
    r.images_F.push_back(std::move(im));
  }
  for (int y = 0; y < nb; ++y) {
    InjectiveImage im;
    im.value = bimodules::tensor(hull_at(*r.right_cat, y), dual);
    im.dec = modules::injective_decompose(*r.left_cat, im.value.rep);
    r.lrk[y] = im.dec.mult;
    for (int x = 0; x < na; ++x) r.lambda[y] += r.lrk[y][x];
    r.images_G.push_back(std::move(im));
  }

  // the class map is only reported on the support
  r.f_single_valued_on_supp = true;
  for (int x : r.supp_F)
    if (r.f[x] < 0) r.f_single_valued_on_supp = false;
  for (int x = 0; x < na; ++x)
    if (!std::binary_search(r.supp_F.begin(), r.supp_F.end(), x)) r.f[x] = -1;

  r.additivity_checked = r.f_single_valued_on_supp;
  r.additivity_holds = r.f_single_valued_on_supp;
  for (int y = 0; y < nb; ++y) {
    Representation fg = bimodules::tensor(r.images_G[y].value.rep, m).rep;
    auto dec = modules::injective_decompose(*r.right_cat, fg);
    int total = 0, off = 0;
    for (int z = 0; z < nb; ++z) {
      total += dec.mult[z];
      if (z != y && dec.mult[z] > 0) ++off;
    }
    if (off == 0) r.n_y[y] = dec.mult[y];
    if (r.f_single_valued_on_supp) {
      int expected = 0;
      for (int x : r.supp_F)
        if (r.f[x] == y) expected += r.lrk[y][x] * r.rrk[x][y];
      if (expected != total) r.additivity_holds = false;
    }
  }

  r.reciprocity_holds = true;
  for (int x = 0; x < na; ++x)
    for (int y = 0; y < nb; ++y)
      if (r.rrk[x][y] > 0 && r.lrk[y][x] == 0) r.reciprocity_holds = false;
  return r;
}

ClassificationReport classify_pair(const Bimodule& m, const Bimodule& dual,
                                   bool include_zero_subcategory) {
  ClassificationReport rep;
  auto cat_a = spectrum::shared_catalog(m.left_alg);
  auto cat_b = spectrum::shared_catalog(m.right_alg);

  auto supp_f = simple_supports(*cat_a, *cat_b, m);
  auto supp_g = simple_supports(*cat_b, *cat_a, dual);

  rep.faithful_F.holds = true;
  for (std::size_t x = 0; x < supp_f.size(); ++x)
    if (supp_f[x].empty()) {
      rep.faithful_F.holds = false;
      rep.faithful_F.witness = "S_" + std::to_string(x + 1) + " tensors to zero";
      break;
    }
  rep.faithful_G.holds = true;
  for (std::size_t y = 0; y < supp_g.size(); ++y)
    if (supp_g[y].empty()) {
      rep.faithful_G.holds = false;
      rep.faithful_G.witness = "S_" + std::to_string(y + 1) + " tensors to zero under the dual";
      break;
    }

  auto fg = composite_supports(m, dual, *cat_b, true);
  auto gf = composite_supports(m, dual, *cat_a, false);
  rep.right_localizing = per_point_verdict(fg, "FG");
  rep.left_localizing = per_point_verdict(gf, "GF");
  cross_validate(fg, rep.right_localizing.holds);
  cross_validate(gf, rep.left_localizing.holds);
  rep.brute_force_checked = supp_f.size() <= 10 && supp_g.size() <= 10;

  rep.square = algebra::same_structure(*m.left_alg, *m.right_alg);
  if (!rep.square) {
    rep.localizing.applicable = false;
    rep.localizing_with_zero.applicable = false;
    rep.localizing_without_zero.applicable = false;
    rep.centralizing.applicable = false;
    rep.locally_centralizing.applicable = false;
    return rep;
  }

  SquareLocalizing loc = square_localizing(supp_f, supp_g);
  cross_validate_square(supp_f, supp_g, loc);
  rep.localizing_with_zero = loc.with_zero;
  rep.localizing_without_zero = loc.without_zero;
  rep.localizing = include_zero_subcategory ? loc.with_zero : loc.without_zero;

  Mat z = center_rows(m.left_alg);
  rep.centralizing.holds = true;
  for (int k = 0; k < z.rows(); ++k)
    if (m.lact(z.row(k)) != m.ract(z.row(k))) {
      rep.centralizing.holds = false;
      rep.centralizing.witness =
          "center basis element " + std::to_string(k + 1) + " acts differently on the two sides";
      break;
    }

  rep.locally_centralizing.holds = true;
  const int n = int(cat_a->class_reps.size());
  for (std::uint64_t mask = 1; mask < (1ull << n) && rep.locally_centralizing.holds; ++mask) {
    std::vector<int> surviving;
    for (int c = 0; c < n; ++c)
      if (mask >> c & 1) surviving.push_back(c);
    auto cd = algebra::corner(m.left_alg, idems_of_classes(*cat_a, surviving));
    Bimodule slice = bimodules::corner_slice(m, cd, cd);
    Mat zc = center_rows(cd.alg);
    for (int k = 0; k < zc.rows(); ++k)
      if (slice.lact(zc.row(k)) != slice.ract(zc.row(k))) {
        rep.locally_centralizing.holds = false;
        rep.locally_centralizing.witness = "corner at surviving classes " + class_set(surviving) +
                                           " with corner center element " + std::to_string(k + 1);
        break;
      }
  }
  return rep;
}

SupportMap support_pair(const Bimodule& m, const Bimodule& dual) {
  auto cat_b = spectrum::shared_catalog(m.right_alg);
  auto fg = composite_supports(m, dual, *cat_b, true);
  PredicateVerdict rl = per_point_verdict(fg, "FG");
  if (!rl.holds) throw NotRightLocalizing(rl.witness);

  RankReport r = rank_pair(m, dual);
  SupportMap sm;
  sm.supp_F = r.supp_F;
  sm.supp_G = r.supp_G;
  sm.f = r.f;
  for (int x : r.supp_F)
    if (r.f[x] < 0)
      throw NotRightLocalizing("the image of the hull of class " + std::to_string(x + 1) +
                               " spreads over several classes");

  std::set<int> image;
  for (int x : r.supp_F) image.insert(r.f[x]);
  sm.surjective = image == std::set<int>(r.supp_G.begin(), r.supp_G.end());
  sm.injective = image.size() == r.supp_F.size();
  sm.homeomorphism = sm.surjective && sm.injective;

  auto cat_a = spectrum::shared_catalog(m.left_alg);
  auto gf = composite_supports(m, dual, *cat_a, false);
  sm.left_localizing_agrees = per_point_verdict(gf, "GF").holds == sm.injective;
  return sm;
}

EquivalenceReport equivalence_pair(const Bimodule& m, const Bimodule& dual,
                                   std::mt19937_64& rng) {
  RankReport r = rank_pair(m, dual);
  EquivalenceReport eq;
  eq.faithful_F = int(r.supp_F.size()) == int(r.rrk.size());
  eq.faithful_G = int(r.supp_G.size()) == int(r.lrk.size());
  eq.rho_all_one = true;
  for (int v : r.rho)
    if (v != 1) eq.rho_all_one = false;
  eq.lambda_all_one = true;
  for (int v : r.lambda)
    if (v != 1) eq.lambda_all_one = false;
  eq.equivalence = eq.faithful_F && eq.faithful_G && eq.rho_all_one && eq.lambda_all_one;
  if (!eq.equivalence) return eq;

  auto cat_a = spectrum::shared_catalog(m.left_alg);
  std::vector<Representation> probes;
  for (int c : cat_a->class_reps) {
    probes.push_back(cat_a->entries[c].P);
    probes.push_back(cat_a->entries[c].E);
  }
  probes.push_back(modules::regular_module(m.left_alg));
  for (const Representation& x : probes) {
    Representation gf = bimodules::tensor(bimodules::tensor(x, m).rep, dual).rep;
    auto iso = modules::iso_test(gf, x, rng, cat_a.get());
    if (iso.status == modules::IsoStatus::NotIsomorphic)
      throw AnalysisError("rank criterion held but a round trip failed to be an isomorphism");
    eq.round_trip.push_back(std::move(iso));
  }
  return eq;
}

}  // namespace

RankReport rank_report(const FrobeniusCertificate& cert) {
  return rank_pair(cert.m, cert.dual_right.bim);
}

RankReport rank_report(const Bimodule& m) {
  return rank_pair(m, bimodules::dual(m, bimodules::DualSide::Right).bim);
}

ClassificationReport classify(const FrobeniusCertificate& cert, bool include_zero_subcategory) {
  return classify_pair(cert.m, cert.dual_right.bim, include_zero_subcategory);
}

ClassificationReport classify(const Bimodule& m, bool include_zero_subcategory) {
  return classify_pair(m, bimodules::dual(m, bimodules::DualSide::Right).bim,
                       include_zero_subcategory);
}

SupportMap support_map(const FrobeniusCertificate& cert) {
  return support_pair(cert.m, cert.dual_right.bim);
}

SupportMap support_map(const Bimodule& m) {
  return support_pair(m, bimodules::dual(m, bimodules::DualSide::Right).bim);
}

EquivalenceReport equivalence_test(const FrobeniusCertificate& cert, std::mt19937_64& rng) {
  return equivalence_pair(cert.m, cert.dual_right.bim, rng);
}

EquivalenceReport equivalence_test(const Bimodule& m, std::mt19937_64& rng) {
  return equivalence_pair(m, bimodules::dual(m, bimodules::DualSide::Right).bim, rng);
}

RestrictionReport restrict_certificate(const FrobeniusCertificate& cert,
                                       const spectrum::WeaklyOpenSubspace& u,
                                       std::mt19937_64& rng) {
  if (!algebra::same_structure(*u.alg, *cert.m.right_alg))
    throw modules::AlgebraMismatch("subspace is not on the target side of the bimodule");
  RestrictionReport rr;
  auto cat_a = spectrum::shared_catalog(cert.m.left_alg);
  auto cat_b = spectrum::shared_catalog(cert.m.right_alg);

  auto supp_f = simple_supports(*cat_a, *cat_b, cert.m);
  std::vector<int> killed;
  for (std::size_t x = 0; x < supp_f.size(); ++x)
    if (subset_of(supp_f[x], u.killed)) killed.push_back(int(x));
  rr.preimage = spectrum::localizing_from_killed(cert.m.left_alg, killed, cat_a);
  rr.v = spectrum::weakly_open(rr.preimage);

  rr.restricted = bimodules::corner_slice(cert.m, rr.v.corner, u.corner);
  rr.restricted_dual = bimodules::corner_slice(cert.dual_right.bim, u.corner, rr.v.corner);

  auto fg = composite_supports(cert.m, cert.dual_right.bim, *cat_b, true);
  rr.sufficient_condition = true;
  for (int c : u.killed)
    if (!subset_of(fg[c], u.killed)) rr.sufficient_condition = false;

  rr.recheck = bimodules::frobenius_check(rr.restricted, rng);
  if (rr.recheck.status != bimodules::FrobeniusStatus::Certified) {
    std::ostringstream detail;
    detail << "restriction is not Frobenius: " << rr.recheck.detail;
    if (rr.sufficient_condition)
      detail << "; the absorbed killed set contradicts the failed recheck";
    rr.detail = detail.str();
    return rr;
  }

  auto check_formula = [&](bool f_side) {
    const StandardCatalog& cat = f_side ? *cat_a : *cat_b;
    std::vector<Representation> probes;
    for (int c : cat.class_reps) {
      probes.push_back(cat.entries[c].P);
      probes.push_back(cat.entries[c].E);
    }
    probes.push_back(modules::regular_module(cat.alg));
    for (const Representation& x : probes) {
      Representation lhs, rhs;
      const StandardCatalog* corner_cat = nullptr;
      if (f_side) {
        lhs = spectrum::compress(u, bimodules::tensor(x, cert.m).rep).rep;
        rhs = bimodules::tensor(spectrum::compress(rr.v, x).rep, rr.restricted).rep;
        corner_cat = u.corner_cat.get();
      } else {
        lhs = spectrum::compress(rr.v, bimodules::tensor(x, cert.dual_right.bim).rep).rep;
        rhs = bimodules::tensor(spectrum::compress(u, x).rep, rr.restricted_dual).rep;
        corner_cat = rr.v.corner_cat.get();
      }
      if (lhs.dim == 0 && rhs.dim == 0) continue;
      auto iso = modules::iso_test(lhs, rhs, rng, corner_cat);
      if (iso.status != IsoStatus::Isomorphic) return false;
    }
    return true;
  };
  rr.projection_formula_F = check_formula(true);
  rr.projection_formula_G = check_formula(false);
  rr.detail = "restriction certified";
  return rr;
}

PartitionReport constant_rank_partition(const FrobeniusCertificate& cert, std::mt19937_64& rng) {
  auto cat_b = spectrum::shared_catalog(cert.m.right_alg);
  auto fg = composite_supports(cert.m, cert.dual_right.bim, *cat_b, true);
  PredicateVerdict rl = per_point_verdict(fg, "FG");
  if (!rl.holds) throw NotRightLocalizing(rl.witness);

  RankReport r = rank_report(cert);
  const int na = int(r.rrk.size());
  const int nb = int(r.lrk.size());
  if (int(r.supp_F.size()) != na) throw NotFaithful("F kills a simple class");
  if (int(r.supp_G.size()) != nb) throw NotFaithful("G kills a simple class");

  PartitionReport pr;
  std::set<int> values(r.lambda.begin(), r.lambda.end());
  pr.rank_values.assign(values.begin(), values.end());

  std::vector<spectrum::WeaklyOpenSubspace> opens;
  for (int v : pr.rank_values) {
    PartitionBlock blk;
    blk.rank_value = v;
    std::vector<int> killed;
    for (int y = 0; y < nb; ++y)
      if (r.lambda[y] != v) killed.push_back(y);
    blk.t = spectrum::localizing_from_killed(cert.m.right_alg, killed, cat_b);
    blk.envelope_closed = spectrum::closed_under_envelopes(blk.t).closed;
    opens.push_back(spectrum::weakly_open(blk.t));
    blk.restriction = restrict_certificate(cert, opens.back(), rng);
    blk.constant_rank_verified = false;
    if (blk.restriction.recheck.status == bimodules::FrobeniusStatus::Certified) {
      RankReport sub = rank_report(*blk.restriction.recheck.cert);
      blk.constant_rank_verified = true;
      for (int lam : sub.lambda)
        if (lam != v) blk.constant_rank_verified = false;
    }
    pr.blocks.push_back(std::move(blk));
  }

  pr.disjoint = true;
  for (std::size_t i = 0; i < pr.blocks.size(); ++i)
    for (std::size_t j = i + 1; j < pr.blocks.size(); ++j)
      if (!spectrum::lattice(pr.blocks[i].t, pr.blocks[j].t).is_disjoint) pr.disjoint = false;
  std::set<int> covered;
  for (const auto& blk : pr.blocks)
    for (int y : blk.t.surviving()) covered.insert(y);
  pr.cover = int(covered.size()) == nb;

  pr.all_closed = true;
  for (const auto& blk : pr.blocks)
    if (!blk.envelope_closed) pr.all_closed = false;

  if (pr.all_closed && pr.disjoint && pr.cover) {
    const Bimodule& m = cert.m;
    bool split = true;
    for (std::size_t i = 0; i < pr.blocks.size(); ++i) {
      const Mat& ea = pr.blocks[i].restriction.v.corner.eprime;
      const Mat& eb = opens[i].corner.eprime;
      if (m.left_alg->lmul_matrix(ea) != m.left_alg->rmul_matrix(ea)) split = false;
      if (m.right_alg->lmul_matrix(eb) != m.right_alg->rmul_matrix(eb)) split = false;
    }
    for (std::size_t i = 0; i < pr.blocks.size() && split; ++i)
      for (std::size_t j = 0; j < pr.blocks.size(); ++j) {
        if (i == j) continue;
        Mat cross = m.lact(pr.blocks[i].restriction.v.corner.eprime) *
                    m.ract(opens[j].corner.eprime);
        if (rank_of(cross) != 0) split = false;
      }
    if (split) {
      std::vector<Bimodule> parts;
      for (std::size_t i = 0; i < pr.blocks.size(); ++i) {
        Mat rows = row_basis(m.lact(pr.blocks[i].restriction.v.corner.eprime) *
                             m.ract(opens[i].corner.eprime));
        std::vector<Mat> la, ra;
        for (int k = 0; k < m.left_alg->dim; ++k)
          la.push_back(coords_or_throw(rows, rows * m.left_action[k], "block left action"));
        for (int k = 0; k < m.right_alg->dim; ++k)
          ra.push_back(coords_or_throw(rows, rows * m.right_action[k], "block right action"));
        parts.push_back(bimodules::from_actions(m.left_alg, m.right_alg, rows.rows(),
                                                std::move(la), std::move(ra)));
      }
      auto ds = bimodules::direct_sum_bimodules(parts);
      auto iso = bimodules::bimodule_iso_test(ds.bim, m, rng);
      pr.decomposition_status = iso.status;
      pr.decomposition_built = iso.status == IsoStatus::Isomorphic;
    }
  }
  return pr;
}

DecompositionCheck category_decomposition_check(
    const AlgebraPtr& a, const std::vector<spectrum::LocalizingSubcat>& parts) {
  auto cat = spectrum::shared_catalog(a);
  const int n = int(cat->class_reps.size());
  std::vector<int> owner(n, -1);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (!algebra::same_structure(*parts[i].alg, *a))
      throw modules::AlgebraMismatch("partition piece over a different algebra");
    for (int c : parts[i].surviving()) {
      if (owner[c] >= 0)
        throw NotDisjoint("class " + std::to_string(c + 1) + " survives in two pieces");
      owner[c] = int(i);
    }
  }
  for (int c = 0; c < n; ++c)
    if (owner[c] < 0) throw NotCover("class " + std::to_string(c + 1) + " is killed everywhere");
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (std::size_t j = i + 1; j < parts.size(); ++j)
      if (!spectrum::lattice(parts[i], parts[j]).is_disjoint)
        throw NotDisjoint("lattice reports overlapping pieces");

  DecompositionCheck dc;
  dc.all_closed = true;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    dc.closures.push_back(spectrum::closed_under_envelopes(parts[i]));
    if (!dc.closures.back().closed) {
      dc.all_closed = false;
      if (dc.witness_part < 0) dc.witness_part = int(i);
    }
  }

  const std::uint32_t p = a->field.p;
  if (dc.all_closed) {
    std::vector<algebra::CornerData> corners;
    int total = 0;
    for (const auto& part : parts) {
      corners.push_back(algebra::corner(a, idems_of_classes(*cat, part.surviving())));
      total += corners.back().alg->dim;
    }
    Mat map(a->dim, 0, p);
    for (const auto& cd : corners) map = hstack(map, cd.compress);
    bool ok = total == a->dim && rank_of(map) == a->dim;
    if (ok) {
      Mat unit_row = a->unit * map;
      int off = 0;
      for (const auto& cd : corners) {
        for (int j = 0; j < cd.alg->dim; ++j)
          if (unit_row.at(0, off + j) != cd.alg->unit.at(0, j)) ok = false;
        off += cd.alg->dim;
      }
    }
    for (int i = 0; i < a->dim && ok; ++i)
      for (int j = 0; j < a->dim && ok; ++j) {
        Mat ei(1, a->dim, p), ej(1, a->dim, p);
        ei.at(0, i) = 1;
        ej.at(0, j) = 1;
        Mat prod = (ei * a->rmul_matrix(ej)) * map;
        Mat im_i = ei * map;
        Mat im_j = ej * map;
        int off = 0;
        for (const auto& cd : corners) {
          const int d = cd.alg->dim;
          Mat ui(1, d, p), uj(1, d, p);
          for (int k = 0; k < d; ++k) {
            ui.at(0, k) = im_i.at(0, off + k);
            uj.at(0, k) = im_j.at(0, off + k);
          }
          Mat expect = ui * cd.alg->rmul_matrix(uj);
          for (int k = 0; k < d; ++k)
            if (expect.at(0, k) != prod.at(0, off + k)) ok = false;
          off += d;
        }
      }
    dc.decomposed = ok;
    dc.to_product = map;
    return dc;
  }

  const auto& cl = dc.closures[dc.witness_part];
  dc.nonsplit_witness = hull_at(*cat, cl.witness_class);
  dc.witness_part_a = owner[cl.witness_class];
  dc.witness_part_b = owner[cl.witness_factor];
  return dc;
}

Tripartition injective_tripartition(const Representation& e,
                                    const spectrum::LocalizingSubcat& t1,
                                    const spectrum::LocalizingSubcat& t2) {
  if (!algebra::same_structure(*t1.alg, *t2.alg) || !algebra::same_structure(*t1.alg, *e.alg))
    throw modules::AlgebraMismatch("tripartition pieces over mismatched algebras");
  for (int c : t1.killed)
    if (t2.kills(c))
      throw HypothesisFailure("class " + std::to_string(c + 1) +
                              " is killed on both sides, so the subspaces do not cover");
  auto closure = [&](const spectrum::LocalizingSubcat& t, const char* which) {
    auto cl = spectrum::closed_under_envelopes(t);
    if (!cl.closed)
      throw HypothesisFailure(std::string(which) +
                              " is not closed under injective envelopes: the hull of class " +
                              std::to_string(cl.witness_class + 1) + " contains class " +
                              std::to_string(cl.witness_factor + 1));
  };
  closure(t1, "the first subcategory");
  closure(t2, "the second subcategory");
  std::vector<int> both = t1.killed;
  both.insert(both.end(), t2.killed.begin(), t2.killed.end());
  std::sort(both.begin(), both.end());
  spectrum::LocalizingSubcat t12 = spectrum::localizing_from_killed(t1.alg, both, t1.cat);
  closure(t12, "the union subcategory");

  const StandardCatalog& cat = *t1.cat;
  auto dec = modules::injective_decompose(cat, e);
  const int n = int(cat.class_reps.size());

  // the standard form lists hull blocks by ascending class with copies adjacent
  std::vector<int> offsets(n + 1, 0);
  for (int c = 0; c < n; ++c)
    offsets[c + 1] = offsets[c] + dec.mult[c] * hull_at(cat, c).dim;

  auto group_of = [&](int c) {
    if (t2.kills(c)) return 0;
    if (t1.kills(c)) return 1;
    return 2;
  };

  const std::uint32_t pmod = e.alg->field.p;
  std::vector<Representation> grouped(3, modules::zero_module(e.alg));
  Mat perm(e.dim, e.dim, pmod);
  int new_off = 0;
  for (int g = 0; g < 3; ++g) {
    std::vector<Representation> blocks;
    for (int c = 0; c < n; ++c) {
      if (group_of(c) != g) continue;
      for (int k = 0; k < dec.mult[c]; ++k) blocks.push_back(hull_at(cat, c));
      const int w = dec.mult[c] * hull_at(cat, c).dim;
      for (int t = 0; t < w; ++t) perm.at(offsets[c] + t, new_off + t) = 1;
      new_off += w;
    }
    if (!blocks.empty()) grouped[g] = modules::direct_sum(blocks).rep;
  }

  Tripartition tp;
  tp.e1 = grouped[0];
  tp.e2 = grouped[1];
  tp.q = grouped[2];
  tp.iso = dec.iso * perm;

  auto target = modules::direct_sum({tp.e1, tp.e2, tp.q}).rep;
  bool ok = rank_of(tp.iso) == e.dim;
  for (int i = 0; i < e.alg->dim && ok; ++i)
    if (e.action[i] * tp.iso != tp.iso * target.action[i]) ok = false;
  if (ok) {
    ok = spectrum::torsion_part(t1, tp.e1).rep.dim == 0 &&
         spectrum::torsion_part(t2, tp.e1).rep.dim == tp.e1.dim &&
         spectrum::torsion_part(t2, tp.e2).rep.dim == 0 &&
         spectrum::torsion_part(t1, tp.e2).rep.dim == tp.e2.dim &&
         spectrum::torsion_part(t12, tp.q).rep.dim == 0;
  }
  if (ok) {
    auto redec = modules::injective_decompose(cat, target);
    ok = redec.mult == dec.mult;
  }
  tp.verified = ok;
  if (!ok) throw AnalysisError("tripartition verification failed");
  return tp;
}

}  // namespace frobmod::analysis
