#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "frobmod/analysis.hpp"

using namespace frobmod;
using namespace frobmod::analysis;
using algebra::AlgebraPtr;
using algebra::FieldSpec;
using bimodules::Bimodule;
using bimodules::FrobeniusCertificate;
using bimodules::FrobeniusResult;
using bimodules::FrobeniusStatus;
using exactla::Mat;
using modules::IsoStatus;
using modules::Representation;
using spectrum::LocalizingSubcat;
using spectrum::WeaklyOpenSubspace;

namespace {

AlgebraPtr f5() { return algebra::prime_field(FieldSpec(5)); }

AlgebraPtr lt2() { return algebra::lower_triangular(FieldSpec(5), 2); }

AlgebraPtr split2() { return algebra::product(f5(), f5()); }

// one arrow between two vertices; the hull of the sink class has length two
AlgebraPtr arrow5() {
  algebra::Quiver q;
  q.vertices = 2;
  q.arrows.push_back({0, 1, "a"});
  return algebra::path_algebra(FieldSpec(5), q);
}

// a -> b -> a composite vanishes; the corner at the second vertex is local
// of dimension two
AlgebraPtr two_cycle7() {
  algebra::Quiver q;
  q.vertices = 2;
  q.arrows.push_back({0, 1, "a"});
  q.arrows.push_back({1, 0, "b"});
  q.relations.push_back({{1, {0, 1}}});
  return algebra::path_algebra(FieldSpec(7), q);
}

// scalars in the corner, the quadratic extension of F_7 on the diagonal and
// in the radical; basis (e, u, ut, v, vt) with v the extension unit, t^2 = 3
AlgebraPtr field_mix() {
  const int d = 5;
  Mat table(d * d, d, 7);
  auto set = [&](int i, int j, int k, std::uint32_t c) { table.at(i * d + j, k) = c; };
  set(0, 0, 0, 1);
  set(1, 0, 1, 1);
  set(2, 0, 2, 1);
  set(3, 1, 1, 1);
  set(3, 2, 2, 1);
  set(4, 1, 2, 1);
  set(4, 2, 1, 3);
  set(3, 3, 3, 1);
  set(3, 4, 4, 1);
  set(4, 3, 4, 1);
  set(4, 4, 3, 3);
  Mat unit(1, d, 7);
  unit.at(0, 0) = 1;
  unit.at(0, 3) = 1;
  Mat e(1, d, 7), v(1, d, 7);
  e.at(0, 0) = 1;
  v.at(0, 3) = 1;
  return algebra::build_raw(FieldSpec(7), {"e", "u", "ut", "v", "vt"}, std::move(table), unit,
                            {e, v});
}

// the p-th power map on the extension part fixes the prime field corner
Mat mix_twist() {
  Mat phi(5, 5, 7);
  phi.at(0, 0) = 1;
  phi.at(1, 1) = 1;
  phi.at(2, 2) = 6;
  phi.at(3, 3) = 1;
  phi.at(4, 4) = 6;
  return phi;
}

Bimodule triangular_quotient() {
  Mat ideal(2, 3, 5);
  ideal.at(0, 0) = 1;
  ideal.at(1, 1) = 1;
  return bimodules::quotient_by_ideal(lt2(), ideal, f5());
}

// row space of scalars on the left and a product of two fields on the right
Bimodule delta_bimodule() {
  auto a = f5();
  auto b = split2();
  return bimodules::external(a, modules::regular_module(a), modules::regular_module(b));
}

// scalar rows against the two by two matrix algebra
Bimodule row_space_bimodule() {
  auto a = f5();
  auto b = algebra::matrix_over(f5(), 2);
  modules::StandardCatalog cat = modules::standard_catalog(b);
  return bimodules::external(a, modules::regular_module(a), cat.entries[0].S);
}

// one copy of the algebra per factor of the doubled target, with the left
// action shared; realizes restriction along the diagonal embedding
Bimodule doubling_bimodule(const AlgebraPtr& a, const AlgebraPtr& b) {
  const int d = a->dim;
  std::vector<Bimodule> copies;
  for (int copy = 0; copy < 2; ++copy) {
    std::vector<Mat> la, ra;
    for (int i = 0; i < d; ++i) la.push_back(a->lmul_matrix(a->basis_vec(i)));
    for (int j = 0; j < 2 * d; ++j) {
      if (j / d == copy)
        ra.push_back(a->rmul_matrix(a->basis_vec(j % d)));
      else
        ra.push_back(Mat(d, d, a->field.p));
    }
    copies.push_back(bimodules::from_actions(a, b, d, std::move(la), std::move(ra)));
  }
  return bimodules::direct_sum_bimodules(copies).bim;
}

// one line over the first factor and a plane over the second, glued into a
// single bimodule over the split pair
Bimodule two_block() {
  auto ab = split2();
  Mat e1(3, 3, 5), e2(3, 3, 5);
  e1.at(0, 0) = 1;
  e2.at(1, 1) = 1;
  e2.at(2, 2) = 1;
  std::vector<Mat> la{e1, e2};
  return bimodules::from_actions(ab, ab, 3, la, la);
}

FrobeniusCertificate certified(const Bimodule& m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  FrobeniusResult fr = bimodules::frobenius_check(m, rng);
  REQUIRE(fr.status == FrobeniusStatus::Certified);
  return *fr.cert;
}

}  // namespace

TEST_CASE("ranks of the regular bimodule are the identity tables") {
  auto a = lt2();
  FrobeniusCertificate cert = certified(bimodules::regular_bimodule(a), 7);
  RankReport r = rank_report(cert);
  CHECK(r.supp_F == std::vector<int>{0, 1});
  CHECK(r.supp_G == std::vector<int>{0, 1});
  CHECK(r.rrk == std::vector<std::vector<int>>{{1, 0}, {0, 1}});
  CHECK(r.lrk == std::vector<std::vector<int>>{{1, 0}, {0, 1}});
  CHECK(r.rho == std::vector<int>{1, 1});
  CHECK(r.lambda == std::vector<int>{1, 1});
  CHECK(r.f == std::vector<int>{0, 1});
  CHECK(r.f_single_valued_on_supp);
  CHECK(r.n_y == std::vector<int>{1, 1});
  CHECK(r.additivity_checked);
  CHECK(r.additivity_holds);
  CHECK(r.reciprocity_holds);
}

TEST_CASE("ranks of the triangular quotient break dual summand symmetry") {
  Bimodule m = triangular_quotient();
  RankReport r = rank_report(m);
  CHECK(r.supp_F == std::vector<int>{1});
  CHECK(r.supp_G == std::vector<int>{0});
  CHECK(r.rrk == std::vector<std::vector<int>>{{1}, {1}});
  CHECK(r.lrk == std::vector<std::vector<int>>{{0, 1}});
  CHECK(r.rho == std::vector<int>{1, 1});
  CHECK(r.lambda == std::vector<int>{1});
  CHECK(r.f == std::vector<int>{-1, 0});
  CHECK(r.f_single_valued_on_supp);
  CHECK(r.n_y == std::vector<int>{1});
  CHECK(r.additivity_checked);
  CHECK(r.additivity_holds);
  // both hulls map onto the same target hull while only the small one returns
  CHECK_FALSE(r.reciprocity_holds);
}

TEST_CASE("ranks of the diagonal pair spread over both factors") {
  FrobeniusCertificate cert = certified(delta_bimodule(), 23);
  RankReport r = rank_report(cert);
  CHECK(r.supp_F == std::vector<int>{0});
  CHECK(r.supp_G == std::vector<int>{0, 1});
  CHECK(r.rrk == std::vector<std::vector<int>>{{1, 1}});
  CHECK(r.lrk == std::vector<std::vector<int>>{{1}, {1}});
  CHECK(r.rho == std::vector<int>{2});
  CHECK(r.lambda == std::vector<int>{1, 1});
  CHECK(r.f == std::vector<int>{-1});
  CHECK_FALSE(r.f_single_valued_on_supp);
  CHECK_FALSE(r.additivity_checked);
  CHECK(r.n_y == std::vector<int>{-1, -1});
  CHECK(r.reciprocity_holds);
}

TEST_CASE("ranks of the twisted mixed algebra stay constant at one") {
  FrobeniusCertificate cert = certified(bimodules::twist(field_mix(), mix_twist()), 5);
  RankReport r = rank_report(cert);
  CHECK(r.rrk == std::vector<std::vector<int>>{{1, 0}, {0, 1}});
  CHECK(r.lrk == std::vector<std::vector<int>>{{1, 0}, {0, 1}});
  CHECK(r.lambda == std::vector<int>{1, 1});
  CHECK(r.f == std::vector<int>{0, 1});
  CHECK(r.additivity_holds);
  CHECK(r.reciprocity_holds);
}

TEST_CASE("classification of the regular bimodule holds every predicate") {
  auto a = lt2();
  FrobeniusCertificate cert = certified(bimodules::regular_bimodule(a), 7);
  for (bool flag : {true, false}) {
    ClassificationReport c = classify(cert, flag);
    CHECK(c.faithful_F.holds);
    CHECK(c.faithful_G.holds);
    CHECK(c.right_localizing.holds);
    CHECK(c.left_localizing.holds);
    CHECK(c.square);
    CHECK(c.localizing.holds);
    CHECK(c.localizing_with_zero.holds);
    CHECK(c.localizing_without_zero.holds);
    CHECK(c.centralizing.holds);
    CHECK(c.locally_centralizing.holds);
    CHECK(c.brute_force_checked);
  }
}

TEST_CASE("classification of the triangular quotient sees the dead simple") {
  Bimodule m = triangular_quotient();
  ClassificationReport c = classify(m, true);
  CHECK_FALSE(c.faithful_F.holds);
  CHECK(c.faithful_F.witness == "S_1 tensors to zero");
  CHECK(c.faithful_G.holds);
  CHECK(c.right_localizing.holds);
  CHECK(c.left_localizing.holds);
  CHECK_FALSE(c.square);
  CHECK_FALSE(c.localizing.applicable);
  CHECK_FALSE(c.centralizing.applicable);
  CHECK_FALSE(c.locally_centralizing.applicable);
}

TEST_CASE("classification of the diagonal pair fails one sided localization") {
  FrobeniusCertificate cert = certified(delta_bimodule(), 23);
  ClassificationReport c = classify(cert, true);
  CHECK(c.faithful_F.holds);
  CHECK(c.faithful_G.holds);
  CHECK_FALSE(c.right_localizing.holds);
  CHECK(c.right_localizing.witness == "FG(S_1) has a composition factor in class 2");
  CHECK(c.left_localizing.holds);
  CHECK_FALSE(c.square);
  CHECK(c.brute_force_checked);
}

TEST_CASE("classification of the twisted mixed algebra splits at the corner") {
  FrobeniusCertificate cert = certified(bimodules::twist(field_mix(), mix_twist()), 5);
  ClassificationReport c = classify(cert, false);
  CHECK(c.faithful_F.holds);
  CHECK(c.faithful_G.holds);
  CHECK(c.right_localizing.holds);
  CHECK(c.left_localizing.holds);
  CHECK(c.square);
  CHECK(c.localizing.holds);
  CHECK(c.localizing_with_zero.holds);
  CHECK(c.localizing_without_zero.holds);
  // the center of the whole algebra is scalar, but the extension corner has
  // central elements moved by the twist
  CHECK(c.centralizing.holds);
  CHECK_FALSE(c.locally_centralizing.holds);
  CHECK(c.locally_centralizing.witness.find("{2}") != std::string::npos);
}

TEST_CASE("support maps on the localizing fixtures") {
  Bimodule tri = triangular_quotient();
  SupportMap sm = support_map(tri);
  CHECK(sm.f == std::vector<int>{-1, 0});
  CHECK(sm.supp_F == std::vector<int>{1});
  CHECK(sm.supp_G == std::vector<int>{0});
  CHECK(sm.surjective);
  CHECK(sm.injective);
  CHECK(sm.homeomorphism);
  CHECK(sm.left_localizing_agrees);

  FrobeniusCertificate morita = certified(row_space_bimodule(), 13);
  SupportMap rm = support_map(morita);
  CHECK(rm.f == std::vector<int>{0});
  CHECK(rm.homeomorphism);
  CHECK(rm.left_localizing_agrees);

  FrobeniusCertificate delta = certified(delta_bimodule(), 23);
  CHECK_THROWS_AS(support_map(delta), NotRightLocalizing);
}

TEST_CASE("equivalence test accepts exactly the invertible pairs") {
  std::mt19937_64 rng(41);

  FrobeniusCertificate reg = certified(bimodules::regular_bimodule(lt2()), 7);
  EquivalenceReport er = equivalence_test(reg, rng);
  CHECK(er.equivalence);
  CHECK(er.round_trip.size() == 5);
  for (const auto& iso : er.round_trip) CHECK(iso.status == IsoStatus::Isomorphic);

  FrobeniusCertificate morita = certified(row_space_bimodule(), 13);
  EquivalenceReport em = equivalence_test(morita, rng);
  CHECK(em.equivalence);
  CHECK(em.rho_all_one);
  CHECK(em.lambda_all_one);

  EquivalenceReport et = equivalence_test(triangular_quotient(), rng);
  CHECK_FALSE(et.equivalence);
  CHECK_FALSE(et.faithful_F);
  CHECK(et.faithful_G);
  CHECK(et.rho_all_one);
  CHECK(et.lambda_all_one);
  CHECK(et.round_trip.empty());

  FrobeniusCertificate delta = certified(delta_bimodule(), 23);
  EquivalenceReport ed = equivalence_test(delta, rng);
  CHECK_FALSE(ed.equivalence);
  CHECK(ed.faithful_F);
  CHECK(ed.faithful_G);
  CHECK_FALSE(ed.rho_all_one);
}

TEST_CASE("restriction of the regular certificate stays regular") {
  auto a = lt2();
  FrobeniusCertificate cert = certified(bimodules::regular_bimodule(a), 7);
  WeaklyOpenSubspace u = spectrum::weakly_open(spectrum::localizing_from_killed(a, {0}));
  std::mt19937_64 rng(17);
  RestrictionReport rr = restrict_certificate(cert, u, rng);
  CHECK(rr.preimage.killed == std::vector<int>{0});
  CHECK(rr.restricted.dim == 1);
  CHECK(rr.restricted_dual.dim == 1);
  CHECK(rr.sufficient_condition);
  CHECK(rr.recheck.status == FrobeniusStatus::Certified);
  CHECK(rr.projection_formula_F);
  CHECK(rr.projection_formula_G);
  CHECK(rr.detail == "restriction certified");
}

TEST_CASE("restriction of the doubling certificate loses projectivity") {
  auto a = two_cycle7();
  auto b = algebra::product(a, a);
  Bimodule m = doubling_bimodule(a, b);
  CHECK(bimodules::validate_bimodule(m).ok());
  FrobeniusCertificate cert = certified(m, 29);
  WeaklyOpenSubspace u = spectrum::weakly_open(spectrum::localizing_from_killed(b, {0}));
  std::mt19937_64 rng(31);
  RestrictionReport rr = restrict_certificate(cert, u, rng);
  // each source simple spreads over both copies, so nothing is absorbed
  CHECK(rr.preimage.killed.empty());
  CHECK_FALSE(rr.sufficient_condition);
  CHECK(rr.restricted.dim == 8);
  CHECK(rr.recheck.status == FrobeniusStatus::NotRightProjective);
  CHECK(rr.detail.find("restriction is not Frobenius") == 0);
}

TEST_CASE("restriction of the twisted certificate keeps the twist") {
  auto r = field_mix();
  FrobeniusCertificate cert = certified(bimodules::twist(r, mix_twist()), 5);
  WeaklyOpenSubspace u = spectrum::weakly_open(spectrum::localizing_from_killed(r, {0}));
  std::mt19937_64 rng(19);
  RestrictionReport rr = restrict_certificate(cert, u, rng);
  CHECK(rr.preimage.killed == std::vector<int>{0});
  CHECK(rr.restricted.dim == 2);
  CHECK(rr.sufficient_condition);
  REQUIRE(rr.recheck.status == FrobeniusStatus::Certified);
  CHECK(rr.projection_formula_F);
  CHECK(rr.projection_formula_G);
  ClassificationReport c = classify(*rr.recheck.cert, false);
  CHECK(c.square);
  CHECK_FALSE(c.centralizing.holds);
}

TEST_CASE("restriction rejects a subspace over the wrong algebra") {
  FrobeniusCertificate cert = certified(bimodules::regular_bimodule(lt2()), 7);
  WeaklyOpenSubspace u = spectrum::weakly_open(spectrum::localizing_from_killed(split2(), {0}));
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(restrict_certificate(cert, u, rng), modules::AlgebraMismatch);
}

TEST_CASE("constant rank partition of the twisted algebra is one block") {
  FrobeniusCertificate cert = certified(bimodules::twist(field_mix(), mix_twist()), 5);
  std::mt19937_64 rng(37);
  PartitionReport pr = constant_rank_partition(cert, rng);
  CHECK(pr.rank_values == std::vector<int>{1});
  REQUIRE(pr.blocks.size() == 1);
  CHECK(pr.blocks[0].t.killed.empty());
  CHECK(pr.blocks[0].envelope_closed);
  CHECK(pr.blocks[0].constant_rank_verified);
  CHECK(pr.disjoint);
  CHECK(pr.cover);
  CHECK(pr.all_closed);
  CHECK(pr.decomposition_built);
  CHECK(pr.decomposition_status == IsoStatus::Isomorphic);
}

TEST_CASE("constant rank partition separates the two block sizes") {
  FrobeniusCertificate cert = certified(two_block(), 43);
  std::mt19937_64 rng(47);
  PartitionReport pr = constant_rank_partition(cert, rng);
  CHECK(pr.rank_values == std::vector<int>{1, 2});
  REQUIRE(pr.blocks.size() == 2);
  CHECK(pr.blocks[0].rank_value == 1);
  CHECK(pr.blocks[0].t.killed == std::vector<int>{1});
  CHECK(pr.blocks[1].rank_value == 2);
  CHECK(pr.blocks[1].t.killed == std::vector<int>{0});
  for (const auto& blk : pr.blocks) {
    CHECK(blk.envelope_closed);
    CHECK(blk.restriction.recheck.status == FrobeniusStatus::Certified);
    CHECK(blk.constant_rank_verified);
  }
  CHECK(pr.disjoint);
  CHECK(pr.cover);
  CHECK(pr.all_closed);
  CHECK(pr.decomposition_built);
  CHECK(pr.decomposition_status == IsoStatus::Isomorphic);
}

TEST_CASE("constant rank partition enforces its hypotheses") {
  std::mt19937_64 rng(53);
  FrobeniusCertificate delta = certified(delta_bimodule(), 23);
  CHECK_THROWS_AS(constant_rank_partition(delta, rng), NotRightLocalizing);

  // a line over one factor of the split pair kills the other simple
  auto ab = split2();
  modules::StandardCatalog cat = modules::standard_catalog(ab);
  Bimodule line = bimodules::external(
      ab, cat.entries[cat.class_reps[0]].S, modules::regular_module(f5()));
  FrobeniusCertificate cert = certified(line, 59);
  CHECK_THROWS_AS(constant_rank_partition(cert, rng), NotFaithful);
}

TEST_CASE("category decomposition verifies genuine product splittings") {
  auto ab = split2();
  DecompositionCheck dc = category_decomposition_check(
      ab, {spectrum::localizing_from_killed(ab, {1}), spectrum::localizing_from_killed(ab, {0})});
  CHECK(dc.all_closed);
  CHECK(dc.decomposed);
  CHECK(dc.to_product.rows() == 2);
  CHECK(exactla::rank_of(dc.to_product) == 2);

  auto triple = algebra::product(split2(), f5());
  DecompositionCheck d3 = category_decomposition_check(
      triple, {spectrum::localizing_from_killed(triple, {1, 2}),
               spectrum::localizing_from_killed(triple, {0, 2}),
               spectrum::localizing_from_killed(triple, {0, 1})});
  CHECK(d3.all_closed);
  CHECK(d3.decomposed);
  CHECK(exactla::rank_of(d3.to_product) == 3);

  // the arrow component and the loose vertex split off each other
  auto mixed = algebra::product(arrow5(), f5());
  DecompositionCheck dm = category_decomposition_check(
      mixed, {spectrum::localizing_from_killed(mixed, {2}),
              spectrum::localizing_from_killed(mixed, {0, 1})});
  CHECK(dm.all_closed);
  CHECK(dm.decomposed);
  CHECK(exactla::rank_of(dm.to_product) == 4);
}

TEST_CASE("category decomposition reports the crossing injective") {
  auto a = lt2();
  DecompositionCheck dc = category_decomposition_check(
      a, {spectrum::localizing_from_killed(a, {0}), spectrum::localizing_from_killed(a, {1})});
  CHECK_FALSE(dc.all_closed);
  CHECK_FALSE(dc.decomposed);
  CHECK(dc.witness_part == 0);
  CHECK(dc.nonsplit_witness.dim == 2);
  CHECK(dc.witness_part_a == 1);
  CHECK(dc.witness_part_b == 0);

  // splitting the arrow component itself is blocked by the long hull
  auto mixed = algebra::product(arrow5(), f5());
  DecompositionCheck dm = category_decomposition_check(
      mixed, {spectrum::localizing_from_killed(mixed, {1, 2}),
              spectrum::localizing_from_killed(mixed, {0, 2}),
              spectrum::localizing_from_killed(mixed, {0, 1})});
  CHECK_FALSE(dm.all_closed);
  CHECK(dm.witness_part == 0);
  CHECK(dm.nonsplit_witness.dim == 2);
  CHECK(dm.witness_part_a == 1);
  CHECK(dm.witness_part_b == 0);
}

TEST_CASE("category decomposition rejects malformed part families") {
  auto ab = split2();
  CHECK_THROWS_AS(
      category_decomposition_check(ab, {spectrum::localizing_from_killed(ab, {0}),
                                        spectrum::localizing_from_killed(ab, {0})}),
      NotDisjoint);
  CHECK_THROWS_AS(category_decomposition_check(ab, {spectrum::localizing_from_killed(ab, {0})}),
                  NotCover);
  CHECK_THROWS_AS(
      category_decomposition_check(ab, {spectrum::localizing_from_killed(lt2(), {0}),
                                        spectrum::localizing_from_killed(lt2(), {1})}),
      modules::AlgebraMismatch);
}

TEST_CASE("tripartition of the split pair fills the two torsion slots") {
  auto ab = split2();
  Representation e = modules::regular_module(ab);
  Tripartition tp = injective_tripartition(e, spectrum::localizing_from_killed(ab, {1}),
                                           spectrum::localizing_from_killed(ab, {0}));
  CHECK(tp.verified);
  CHECK(tp.e1.dim == 1);
  CHECK(tp.e2.dim == 1);
  CHECK(tp.q.dim == 0);
  CHECK(exactla::rank_of(tp.iso) == 2);
}

TEST_CASE("tripartition of the mixed product keeps a torsionfree remainder") {
  auto big = algebra::product(lt2(), f5());
  auto cat = spectrum::shared_catalog(big);
  std::vector<Representation> hulls;
  for (int c : cat->class_reps) hulls.push_back(cat->entries[c].E);
  Representation e = modules::direct_sum(hulls).rep;
  Tripartition tp = injective_tripartition(e, spectrum::localizing_from_killed(big, {1}, cat),
                                           spectrum::localizing_from_killed(big, {2}, cat));
  CHECK(tp.verified);
  CHECK(tp.e1.dim == 1);
  CHECK(tp.e2.dim == 1);
  CHECK(tp.q.dim == 2);
  CHECK(exactla::rank_of(tp.iso) == 4);
}

TEST_CASE("tripartition enforces closure and disjointness") {
  auto a = arrow5();
  Representation e = modules::regular_module(a);
  bool failed = false;
  try {
    injective_tripartition(e, spectrum::localizing_from_killed(a, {0}),
                           spectrum::localizing_from_killed(a, {1}));
  } catch (const HypothesisFailure& ex) {
    failed = true;
    CHECK(std::string(ex.what()).find("second subcategory") != std::string::npos);
    CHECK(std::string(ex.what()).find("hull of class 2 contains class 1") != std::string::npos);
  }
  CHECK(failed);

  auto ab = split2();
  Representation r = modules::regular_module(ab);
  CHECK_THROWS_AS(injective_tripartition(r, spectrum::localizing_from_killed(ab, {0}),
                                         spectrum::localizing_from_killed(ab, {0})),
                  HypothesisFailure);
  CHECK_THROWS_AS(injective_tripartition(r, spectrum::localizing_from_killed(ab, {0}),
                                         spectrum::localizing_from_killed(lt2(), {1})),
                  modules::AlgebraMismatch);
}

TEST_CASE("tripartition requires an injective input") {
  auto a = lt2();
  auto cat = spectrum::shared_catalog(a);
  Representation s = cat->entries[cat->class_reps[0]].S;
  CHECK_THROWS_AS(injective_tripartition(s, spectrum::localizing_from_killed(a, {1}, cat),
                                         spectrum::localizing_from_killed(a, {}, cat)),
                  modules::NotInjective);
}

TEST_CASE("bimodule map recognition checks both actions") {
  auto a = lt2();
  Bimodule reg = bimodules::regular_bimodule(a);
  CHECK(is_bimodule_map(reg, reg, Mat::identity(3, 5)));
  // left multiplication by a radical element fails on the left action
  CHECK_FALSE(is_bimodule_map(reg, reg, reg.lact(a->basis_vec(1))));
  CHECK_FALSE(is_bimodule_map(reg, reg, Mat(2, 3, 5)));
  CHECK_FALSE(is_bimodule_map(reg, bimodules::regular_bimodule(split2()), Mat(3, 2, 5)));
}
