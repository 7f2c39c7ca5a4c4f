#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "frobmod/spectrum.hpp"

using namespace frobmod;
using algebra::AlgebraPtr;
using algebra::FieldSpec;
using exactla::Mat;
using modules::Representation;
using namespace frobmod::spectrum;

namespace {

AlgebraPtr lt2() { return algebra::lower_triangular(FieldSpec(5), 2); }

AlgebraPtr f25() { return algebra::field_extension(FieldSpec(5), 2, {3, 0, 1}); }

// a -> b -> a composite vanishes, b -> a -> b survives; the corner at the
// second vertex is a nontrivial local algebra
AlgebraPtr two_cycle() {
  algebra::Quiver q;
  q.vertices = 2;
  q.arrows.push_back({0, 1, "a"});
  q.arrows.push_back({1, 0, "b"});
  q.relations.push_back({{1, {0, 1}}});
  return algebra::path_algebra(FieldSpec(7), q);
}

// quotient of the lower triangular algebra by its corner column, as a bimodule
bimodules::Bimodule triangular_bimodule() {
  AlgebraPtr r = lt2();
  Mat ideal(2, 3, 5);
  ideal.at(0, 0) = 1;
  ideal.at(1, 1) = 1;
  return bimodules::quotient_by_ideal(r, ideal, algebra::prime_field(FieldSpec(5)));
}

// expected corner class position for an ambient surviving class
int corner_class_of(const WeaklyOpenSubspace& u, int ambient_class) {
  int rep_entry = u.cat->class_reps[ambient_class];
  for (std::size_t k = 0; k < u.surviving_idems.size(); ++k)
    if (u.surviving_idems[k] == rep_entry)
      return u.corner_cat->class_position(u.corner_cat->entries[int(k)].iso_class);
  return -1;
}

}  // namespace

TEST_CASE("killed sets build localizing subcategories") {
  AlgebraPtr a = lt2();
  LocalizingSubcat t = localizing_from_killed(a, {0});
  CHECK(t.kills(0));
  CHECK_FALSE(t.kills(1));
  CHECK(t.surviving() == std::vector<int>{1});

  LocalizingSubcat dup = localizing_from_killed(a, {1, 0, 1}, t.cat);
  CHECK(dup.killed == std::vector<int>{0, 1});
  CHECK_THROWS_AS(localizing_from_killed(a, {2}), SpectrumError);

  const auto& cat = *t.cat;
  CHECK(is_member(t, cat.entries[0].S));
  CHECK_FALSE(is_member(t, cat.entries[1].S));
  CHECK_FALSE(is_member(t, cat.entries[0].E));  // hull adds a surviving factor
  LocalizingSubcat all = localizing_from_killed(a, {0, 1}, t.cat);
  CHECK(is_member(all, cat.entries[0].E));
  LocalizingSubcat none = localizing_from_killed(a, {}, t.cat);
  CHECK(is_member(none, Representation{a, 0, std::vector<Mat>(a->dim, Mat(0, 0, 5))}));
  CHECK_FALSE(is_member(none, cat.entries[0].S));
}

TEST_CASE("cogenerating families determine the killed classes") {
  AlgebraPtr a = lt2();
  CatalogPtr cat = shared_catalog(a);
  const Representation& s1 = cat->entries[0].S;
  const Representation& s2 = cat->entries[cat->class_reps[1]].S;

  CHECK(localizing_from_modules(a, {s2}, cat).killed == std::vector<int>{0});
  // the hull of the projective simple already contains the other class
  CHECK(localizing_from_modules(a, {s1}, cat).killed == std::vector<int>{1});
  CHECK(localizing_from_modules(a, {s1, s2}, cat).killed.empty());
  CHECK(localizing_from_modules(a, {}, cat).killed == std::vector<int>{0, 1});

  Representation stray{f25(), 0, {}};
  stray.action.assign(2, Mat(0, 0, 5));
  CHECK_THROWS_AS(localizing_from_modules(a, {stray}, cat), AlgebraMismatch);
}

TEST_CASE("tensor kernels determine the killed classes") {
  bimodules::Bimodule m = triangular_bimodule();
  LocalizingSubcat t = localizing_from_kernel(m);
  CHECK(t.killed == std::vector<int>{0});

  AlgebraPtr a = lt2();
  LocalizingSubcat id = localizing_from_kernel(bimodules::regular_bimodule(a));
  CHECK(id.killed.empty());
}

TEST_CASE("torsion parts are the largest members") {
  AlgebraPtr a = lt2();
  LocalizingSubcat t = localizing_from_killed(a, {0});
  const auto& cat = *t.cat;

  modules::Submodule tor = torsion_part(t, cat.entries[0].E);
  CHECK(tor.rep.dim == 1);
  CHECK(is_member(t, tor.rep));
  CHECK(torsion_part(t, cat.entries[1].S).rep.dim == 0);
  CHECK(torsion_part(t, cat.entries[0].S).rep.dim == 1);

  // killing the torsion part leaves a torsion free quotient
  modules::Quotient q = modules::quotient_by_rows(cat.entries[0].E, tor.inclusion);
  CHECK(torsion_part(t, q.rep).rep.dim == 0);
}

TEST_CASE("envelope closure reports a leaking factor") {
  AlgebraPtr a = lt2();
  CatalogPtr cat = shared_catalog(a);

  CHECK(closed_under_envelopes(localizing_from_killed(a, {1}, cat)).closed);
  CHECK(closed_under_envelopes(localizing_from_killed(a, {}, cat)).closed);
  CHECK(closed_under_envelopes(localizing_from_killed(a, {0, 1}, cat)).closed);

  EnvelopeClosure leak = closed_under_envelopes(localizing_from_killed(a, {0}, cat));
  CHECK_FALSE(leak.closed);
  CHECK(leak.witness_class == 0);
  CHECK(leak.witness_factor == 1);
}

TEST_CASE("lattice combines open subspaces") {
  AlgebraPtr a = lt2();
  CatalogPtr cat = shared_catalog(a);
  LocalizingSubcat t1 = localizing_from_killed(a, {0}, cat);
  LocalizingSubcat t2 = localizing_from_killed(a, {1}, cat);

  LatticeReport complementary = lattice(t1, t2);
  CHECK(complementary.is_cover);
  CHECK(complementary.is_disjoint);
  CHECK(complementary.gabriel_product.killed == std::vector<int>{0, 1});
  CHECK(complementary.open_intersection.killed == std::vector<int>{0, 1});
  CHECK(complementary.open_union.killed.empty());

  LatticeReport self = lattice(t1, t1);
  CHECK_FALSE(self.is_cover);
  CHECK_FALSE(self.is_disjoint);
  CHECK(self.gabriel_product.killed == t1.killed);
  CHECK(self.open_union.killed == t1.killed);

  LocalizingSubcat big = localizing_from_killed(a, {0, 1}, cat);
  LatticeReport nested = lattice(t1, big);
  CHECK_FALSE(nested.is_cover);
  CHECK(nested.is_disjoint);

  LocalizingSubcat other = localizing_from_killed(f25(), {0});
  CHECK_THROWS_AS(lattice(t1, other), AlgebraMismatch);
}

TEST_CASE("weakly open subspaces compress to corners") {
  AlgebraPtr a = lt2();
  CatalogPtr cat = shared_catalog(a);
  AlgebraPtr f5 = algebra::prime_field(FieldSpec(5));

  WeaklyOpenSubspace keep_first = weakly_open(localizing_from_killed(a, {1}, cat));
  CHECK(keep_first.surviving_idems == std::vector<int>{0});
  CHECK(keep_first.corner.alg->dim == 1);
  CHECK(algebra::same_structure(*keep_first.corner.alg, *f5));
  CHECK(keep_first.transfer_up.dim == 2);
  CHECK(keep_first.transfer_down.dim == 1);
  CHECK(keep_first.pushforward_exact);

  WeaklyOpenSubspace keep_second = weakly_open(localizing_from_killed(a, {0}, cat));
  CHECK(keep_second.surviving_idems == std::vector<int>{1});
  CHECK(keep_second.corner.alg->dim == 1);
  CHECK(keep_second.transfer_up.dim == 1);
  CHECK(keep_second.transfer_down.dim == 2);
  CHECK(keep_second.pushforward_exact);

  WeaklyOpenSubspace everything = weakly_open(localizing_from_killed(a, {}, cat));
  CHECK(everything.corner.alg->dim == a->dim);
  CHECK(algebra::same_structure(*everything.corner.alg, *a));
  CHECK(everything.transfer_up.dim == a->dim);
  CHECK(everything.pushforward_exact);

  WeaklyOpenSubspace nothing = weakly_open(localizing_from_killed(a, {0, 1}, cat));
  CHECK(nothing.corner.alg->dim == 0);
  CHECK(nothing.transfer_up.dim == 0);
  CHECK(nothing.transfer_down.dim == 0);
  CHECK(nothing.pushforward_exact);
  CHECK(compress(nothing, cat->entries[0].E).rep.dim == 0);

  Compression reg = compress(keep_first, modules::regular_module(a));
  CHECK(reg.rep.dim == 2);
  CHECK(reg.rep.alg->dim == 1);
}

TEST_CASE("surviving hulls compress to corner injectives") {
  AlgebraPtr a = lt2();
  CatalogPtr cat = shared_catalog(a);
  for (std::vector<int> killed : {std::vector<int>{0}, std::vector<int>{1}}) {
    WeaklyOpenSubspace u = weakly_open(localizing_from_killed(a, killed, cat));
    for (int c : u.surviving) {
      Compression cp = compress(u, cat->entries[cat->class_reps[c]].E);
      modules::InjectiveDecomposition dec = modules::injective_decompose(*u.corner_cat, cp.rep);
      std::vector<int> expected(u.corner_cat->class_reps.size(), 0);
      expected[corner_class_of(u, c)] = 1;
      CHECK(dec.mult == expected);
    }
  }

  AlgebraPtr q = two_cycle();
  WeaklyOpenSubspace u = weakly_open(localizing_from_killed(q, {0}));
  Compression cp = compress(u, u.cat->entries[1].E);
  CHECK(cp.rep.dim == 2);
  modules::InjectiveDecomposition dec = modules::injective_decompose(*u.corner_cat, cp.rep);
  CHECK(dec.mult == std::vector<int>{1});
}

TEST_CASE("transfer functors satisfy the recollement identities") {
  AlgebraPtr q = two_cycle();
  WeaklyOpenSubspace u = weakly_open(localizing_from_killed(q, {0}));
  CHECK(u.corner.alg->dim == 2);
  CHECK(algebra::is_local(*u.corner.alg));
  // the transfer source splits off a non projective corner summand
  CHECK_FALSE(u.pushforward_exact);
  CHECK(u.transfer_up.dim == 3);
  CHECK(u.transfer_down.dim == 3);

  Representation corner_reg = modules::regular_module(u.corner.alg);
  Representation ambient_reg = modules::regular_module(q);
  Representation extended = extend(u, corner_reg).rep;
  Representation coextended = coextend(u, corner_reg).rep;
  Representation compressed = compress(u, ambient_reg).rep;

  CHECK(modules::hom_space(extended, ambient_reg).size() ==
        modules::hom_space(corner_reg, compressed).size());
  CHECK(modules::hom_space(ambient_reg, coextended).size() ==
        modules::hom_space(compressed, corner_reg).size());
}

TEST_CASE("functor transfers act on homs") {
  AlgebraPtr a = lt2();
  CatalogPtr cat = shared_catalog(a);
  WeaklyOpenSubspace u = weakly_open(localizing_from_killed(a, {0}, cat));

  const Representation& p2 = cat->entries[1].P;
  const Representation& e1 = cat->entries[0].E;
  std::vector<Mat> homs = modules::hom_space(p2, e1);
  REQUIRE(homs.size() == 1);
  Compression cm = compress(u, p2);
  Compression cn = compress(u, e1);
  CHECK(cm.rep.dim == 1);
  CHECK(cn.rep.dim == 1);
  Mat cf = compress_hom(u, cm, cn, homs[0]);
  CHECK(cf * cn.basis == cm.basis * homs[0]);

  AlgebraPtr q = two_cycle();
  WeaklyOpenSubspace uq = weakly_open(localizing_from_killed(q, {0}));
  Representation creg = modules::regular_module(uq.corner.alg);
  bimodules::HomModule hm = coextend(uq, creg);
  CHECK(hm.rep.dim == 3);
  Mat identity_transfer = coextend_hom(uq, hm, hm, Mat::identity(2, 7));
  CHECK(identity_transfer == Mat::identity(3, 7));

  // the nilpotent corner endomorphism transfers to a nilpotent module hom
  Mat s_action = creg.action[1];
  Mat transferred = coextend_hom(uq, hm, hm, s_action);
  CHECK(transferred * transferred == coextend_hom(uq, hm, hm, s_action * s_action));
  CHECK(transferred * transferred == Mat(3, 3, 7));
  for (int g = 0; g < q->dim; ++g)
    CHECK(transferred * hm.rep.action[g] == hm.rep.action[g] * transferred);
}

TEST_CASE("factor supports generate a discrete topology") {
  AlgebraPtr a = lt2();
  TopologyReport top = gabriel_topology(a);
  CHECK(top.points == 2);
  CHECK(top.discrete);
  CHECK(top.simple_supports == std::vector<std::vector<int>>{{0}, {1}});
  CHECK(top.injective_supports[0] == std::vector<int>{0, 1});
  CHECK(top.injective_supports[1] == std::vector<int>{1});
  CHECK(top.projective_supports[0] == std::vector<int>{0});
  CHECK(top.projective_supports[1] == std::vector<int>{0, 1});
  CHECK(top.closed_sets.size() == 4);

  TopologyReport tiny = gabriel_topology(algebra::prime_field(FieldSpec(5)));
  CHECK(tiny.points == 1);
  CHECK(tiny.discrete);
  CHECK(tiny.closed_sets.size() == 2);

  TopologyReport pair =
      gabriel_topology(algebra::product(algebra::prime_field(FieldSpec(5)),
                                        algebra::prime_field(FieldSpec(5))));
  CHECK(pair.points == 2);
  CHECK(pair.discrete);
}

TEST_CASE("locality reports a single point with a cogenerator") {
  LocalityReport ext = locality_report(f25());
  CHECK(ext.is_local);
  CHECK(ext.is_semilocal);
  CHECK(ext.cogenerates);
  CHECK(ext.cogenerator.dim == 2);

  // one simple class even though the ring itself is far from local
  LocalityReport mat = locality_report(algebra::matrix_over(algebra::prime_field(FieldSpec(7)), 2));
  CHECK(mat.is_local);
  CHECK(mat.cogenerates);

  LocalityReport tri = locality_report(lt2());
  CHECK_FALSE(tri.is_local);
  CHECK(tri.is_semilocal);
  CHECK(tri.cogenerates);
  CHECK(tri.cogenerator.dim == 3);

  LocalityReport split = locality_report(
      algebra::product(algebra::prime_field(FieldSpec(5)), algebra::prime_field(FieldSpec(5))));
  CHECK_FALSE(split.is_local);
  CHECK(split.cogenerates);
}

TEST_CASE("torsion parts are idempotent across the catalog") {
  for (const AlgebraPtr& a : {lt2(), two_cycle()}) {
    CatalogPtr cat = shared_catalog(a);
    for (std::vector<int> killed : {std::vector<int>{0}, std::vector<int>{1}}) {
      LocalizingSubcat t = localizing_from_killed(a, killed, cat);
      for (int i = 0; i < cat->n(); ++i) {
        for (const Representation* m :
             {&cat->entries[i].P, &cat->entries[i].S, &cat->entries[i].E}) {
          modules::Submodule tor = torsion_part(t, *m);
          CHECK(is_member(t, tor.rep));
          modules::Quotient q = modules::quotient_by_rows(*m, tor.inclusion);
          CHECK(torsion_part(t, q.rep).rep.dim == 0);
        }
      }
    }
  }
}
