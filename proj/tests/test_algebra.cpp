#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "frobmod/algebra.hpp"

using namespace frobmod;
using namespace frobmod::algebra;
using exactla::FieldSpec;
using exactla::Mat;

namespace {

AlgebraPtr f49() {
  // t^2 = 3 over F_7; 3 is not a square mod 7
  return field_extension(FieldSpec(7), 2, {4, 0, 1});
}

Quiver two_cycle_with_zero() {
  Quiver q;
  q.vertices = 2;
  q.arrows.push_back({0, 1, "a"});
  q.arrows.push_back({1, 0, "b"});
  q.relations.push_back({{1, {0, 1}}});
  return q;
}

}  // namespace

TEST_CASE("lower triangular matrices have the expected structure") {
  AlgebraPtr lt = lower_triangular(FieldSpec(5), 2);
  CHECK(lt->dim == 3);
  CHECK(lt->basis_labels == std::vector<std::string>{"e11", "e21", "e22"});
  CHECK(lt->idempotents.size() == 2);
  // e21 * e11 = e21, e11 * e21 = 0
  CHECK(lt->mul(lt->basis_vec(1), lt->basis_vec(0)) == lt->basis_vec(1));
  CHECK(lt->mul(lt->basis_vec(0), lt->basis_vec(1)).is_zero());
  CHECK(lt->mul(lt->basis_vec(2), lt->basis_vec(1)) == lt->basis_vec(1));
  CHECK_FALSE(lt->is_commutative());
  CHECK(validate_algebra(*lt).ok());
}

TEST_CASE("trusted constructors survive full validation") {
  CHECK(validate_algebra(*prime_field(FieldSpec(5))).ok());
  CHECK(validate_algebra(*f49()).ok());
  CHECK(validate_algebra(*lower_triangular(FieldSpec(7), 3)).ok());
  CHECK(validate_algebra(*product(prime_field(FieldSpec(7)), f49())).ok());
  // wrong field for product
  CHECK_THROWS_AS(product(prime_field(FieldSpec(5)), prime_field(FieldSpec(7))), InvalidAlgebra);
}

TEST_CASE("radical of a triangular algebra is the strictly lower part") {
  AlgebraPtr lt2 = lower_triangular(FieldSpec(5), 2);
  Mat r2 = radical(*lt2);
  REQUIRE(r2.rows() == 1);
  CHECK(r2.row(0) == lt2->basis_vec(1));

  AlgebraPtr lt3 = lower_triangular(FieldSpec(7), 3);
  Mat r3 = radical(*lt3);
  CHECK(r3.rows() == 3);
  // every radical element kills itself three times over
  Mat x = r3.row(0) + r3.row(1) + r3.row(2);
  Mat x2 = lt3->mul(x, x);
  CHECK(lt3->mul(x2, x).is_zero());
}

TEST_CASE("semisimple algebras have zero radical") {
  CHECK(radical(*prime_field(FieldSpec(5))).rows() == 0);
  CHECK(radical(*f49()).rows() == 0);
  CHECK(radical(*product(prime_field(FieldSpec(5)), prime_field(FieldSpec(5)))).rows() == 0);
  CHECK(radical(*matrix_over(prime_field(FieldSpec(7)), 2)).rows() == 0);
}

TEST_CASE("center picks out scalars in matrix-like algebras") {
  CHECK(center(*lower_triangular(FieldSpec(5), 2)).rows() == 1);
  CHECK(center(*matrix_over(prime_field(FieldSpec(7)), 2)).rows() == 1);
  CHECK(center(*f49()).rows() == 2);
  AlgebraPtr env = enveloping(f49(), f49());
  CHECK(center(*env).rows() == 4);
  AlgebraPtr lt2 = lower_triangular(FieldSpec(11), 2);
  CHECK(center(*enveloping(lt2, lt2)).rows() == 1);
}

TEST_CASE("locality distinguishes fields from split algebras") {
  std::string why;
  CHECK(is_local(*prime_field(FieldSpec(5))));
  CHECK(is_local(*f49()));
  CHECK_FALSE(is_local(*product(prime_field(FieldSpec(5)), prime_field(FieldSpec(5))), &why));
  CHECK(why.find("2 fields") != std::string::npos);
  CHECK_FALSE(is_local(*lower_triangular(FieldSpec(5), 2)));
  CHECK_FALSE(is_local(*matrix_over(prime_field(FieldSpec(7)), 2), &why));
  CHECK(why.find("not commutative") != std::string::npos);
  CHECK_FALSE(is_local(*zero_algebra(FieldSpec(5))));
}

TEST_CASE("quadratic field extension matches polynomial arithmetic") {
  AlgebraPtr k = f49();
  REQUIRE(k->dim == 2);
  Mat one = k->unit;
  Mat t = k->basis_vec(1);
  CHECK(k->mul(t, t) == one.scaled(3));
  CHECK(k->is_commutative());
  // (a0 + a1 t)(b0 + b1 t) = a0 b0 + 3 a1 b1 + (a0 b1 + a1 b0) t
  std::mt19937_64 rng(2026);
  for (int trial = 0; trial < 25; ++trial) {
    Mat a = exactla::random_matrix(1, 2, 7, rng);
    Mat b = exactla::random_matrix(1, 2, 7, rng);
    Mat prod = k->mul(a, b);
    std::uint32_t c0 = (a.at(0, 0) * b.at(0, 0) + 3 * a.at(0, 1) * b.at(0, 1)) % 7;
    std::uint32_t c1 = (a.at(0, 0) * b.at(0, 1) + a.at(0, 1) * b.at(0, 0)) % 7;
    CHECK(prod.at(0, 0) == c0);
    CHECK(prod.at(0, 1) == c1);
  }
  // Frobenius squared is the identity on F_49
  for (int trial = 0; trial < 10; ++trial) {
    Mat a = exactla::random_matrix(1, 2, 7, rng);
    CHECK(k->power(a, 49) == a);
  }
}

TEST_CASE("reducible polynomials are rejected") {
  // 2 = 3^2 mod 7
  CHECK_THROWS_AS(field_extension(FieldSpec(7), 2, {5, 0, 1}), ReduciblePolynomial);
  // x^2 - x = x(x - 1)
  CHECK_THROWS_AS(field_extension(FieldSpec(5), 2, {0, 4, 1}), ReduciblePolynomial);
  CHECK_THROWS_AS(field_extension(FieldSpec(7), 2, {1, 1}), InvalidAlgebra);
  // cubic extension of F_5 by t^3 + t + 1, which has no roots mod 5
  AlgebraPtr k125 = field_extension(FieldSpec(5), 3, {1, 1, 0, 1});
  CHECK(k125->dim == 3);
  CHECK(is_local(*k125));
}

TEST_CASE("opposite is an involution on structure") {
  AlgebraPtr lt = lower_triangular(FieldSpec(7), 3);
  AlgebraPtr op = opposite(lt);
  CHECK_FALSE(same_structure(*lt, *op));
  CHECK(same_structure(*lt, *opposite(op)));
  // opposite of a commutative algebra is itself
  AlgebraPtr k = f49();
  CHECK(same_structure(*k, *opposite(k)));
  // multiplication really is reversed
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    Mat x = exactla::random_matrix(1, lt->dim, 7, rng);
    Mat y = exactla::random_matrix(1, lt->dim, 7, rng);
    CHECK(op->mul(x, y) == lt->mul(y, x));
  }
}

TEST_CASE("corner of a triangular algebra is the smaller triangle") {
  AlgebraPtr lt3 = lower_triangular(FieldSpec(7), 3);
  CornerData cd = corner(lt3, {0, 1});
  CHECK(cd.alg->dim == 3);
  CHECK(same_structure(*cd.alg, *lower_triangular(FieldSpec(7), 2)));
  // inclusion followed by compression is the identity on the corner
  Mat round_trip = cd.incl * cd.compress;
  CHECK(round_trip.is_identity());
  // compression annihilates the rows the corner idempotent kills
  CHECK((cd.compress.row(3).is_zero()));
  CHECK((cd.compress.row(5).is_zero()));

  CornerData single = corner(lt3, {2});
  CHECK(single.alg->dim == 1);
  CHECK(is_local(*single.alg));

  CornerData none = corner(lt3, {});
  CHECK(none.alg->dim == 0);
  CHECK_THROWS_AS(corner(lt3, {3}), InvalidAlgebra);
}

TEST_CASE("enveloping algebra multiplies contravariantly on the left factor") {
  AlgebraPtr lt2 = lower_triangular(FieldSpec(11), 2);
  AlgebraPtr env = enveloping(lt2, lt2);
  CHECK(env->dim == 9);
  CHECK(env->idempotents.size() == 4);
  CHECK_FALSE(env->non_primitive);
  // (x (x) 1)(y (x) 1) agrees with y x computed in the base
  const int d = lt2->dim;
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    Mat x = exactla::random_matrix(1, d, 11, rng);
    Mat y = exactla::random_matrix(1, d, 11, rng);
    Mat lhs = env->mul(exactla::kron(x, lt2->unit), exactla::kron(y, lt2->unit));
    Mat rhs = exactla::kron(lt2->mul(y, x), lt2->unit);
    CHECK(lhs == rhs);
    // right factor keeps its order
    Mat lhs2 = env->mul(exactla::kron(lt2->unit, x), exactla::kron(lt2->unit, y));
    CHECK(lhs2 == exactla::kron(lt2->unit, lt2->mul(x, y)));
  }
}

TEST_CASE("enveloping a field extension yields imprimitive idempotents") {
  AlgebraPtr env = enveloping(f49(), f49());
  CHECK(env->dim == 4);
  CHECK(env->non_primitive);
  CHECK(env->is_commutative());
  CHECK(radical(*env).rows() == 0);
}

TEST_CASE("matrix algebra over a field is simple with the right unit") {
  AlgebraPtr m2 = matrix_over(prime_field(FieldSpec(7)), 2);
  CHECK(m2->dim == 4);
  CHECK(m2->idempotents.size() == 2);
  CHECK(validate_algebra(*m2).ok());
  // units multiply as matrix units: u_12 u_21 = u_11
  const int u12 = 1, u21 = 2, u11 = 0;
  CHECK(m2->mul(m2->basis_vec(u12), m2->basis_vec(u21)) == m2->basis_vec(u11));
  CHECK(m2->mul(m2->basis_vec(u21), m2->basis_vec(u12)) == m2->basis_vec(3));
}

TEST_CASE("path algebra of the two vertex cycle with one zero relation") {
  AlgebraPtr a = path_algebra(FieldSpec(7), two_cycle_with_zero());
  REQUIRE(a->dim == 5);
  CHECK(a->basis_labels == std::vector<std::string>{"e1", "e2", "a", "b", "ba"});
  const Mat e1 = a->basis_vec(0), e2 = a->basis_vec(1);
  const Mat pa = a->basis_vec(2), pb = a->basis_vec(3), pba = a->basis_vec(4);
  CHECK(a->mul(pa, pb).is_zero());
  CHECK(a->mul(pb, pa) == pba);
  CHECK(a->mul(pba, pb).is_zero());
  CHECK(a->mul(pba, pba).is_zero());
  CHECK(a->mul(e1, pa) == pa);
  CHECK(a->mul(pa, e2) == pa);
  CHECK(a->mul(pa, e1).is_zero());
  CHECK(a->mul(e2, pba) == pba);
  CHECK(a->mul(pba, e2) == pba);
  CHECK(radical(*a).rows() == 3);
  CHECK(validate_algebra(*a).ok());
  // both vertex corners are local, the second with a nilpotent part
  CornerData c2 = corner(a, {1});
  CHECK(c2.alg->dim == 2);
  CHECK(is_local(*c2.alg));
}

TEST_CASE("linear path quiver gives a radical of all strict paths") {
  Quiver q;
  q.vertices = 3;
  q.arrows.push_back({0, 1, "a"});
  q.arrows.push_back({1, 2, "b"});
  AlgebraPtr a = path_algebra(FieldSpec(7), q);
  CHECK(a->dim == 6);
  CHECK(radical(*a).rows() == 3);
  const int ia = a->label_index("a"), ib = a->label_index("b"), iab = a->label_index("ab");
  REQUIRE(ia >= 0);
  REQUIRE(ib >= 0);
  REQUIRE(iab >= 0);
  CHECK(a->mul(a->basis_vec(ia), a->basis_vec(ib)) == a->basis_vec(iab));
  CHECK(a->mul(a->basis_vec(ib), a->basis_vec(ia)).is_zero());
}

TEST_CASE("length one relations glue parallel arrows") {
  Quiver q;
  q.vertices = 2;
  q.arrows.push_back({0, 1, "a"});
  q.arrows.push_back({0, 1, "b"});
  // b = 2a, written as b - 2a = 0
  q.relations.push_back({{1, {1}}, {5, {0}}});
  AlgebraPtr alg = path_algebra(FieldSpec(7), q);
  CHECK(alg->dim == 3);
  // the b generator reduces to twice the surviving arrow
  const Mat arrow = alg->basis_vec(2);
  bool found = false;
  for (const Mat& g : alg->generators)
    if (g == arrow.scaled(2)) found = true;
  CHECK(found);
}

TEST_CASE("commuting square relation cuts one path") {
  Quiver q;
  q.vertices = 3;
  q.arrows.push_back({0, 1, "a"});
  q.arrows.push_back({1, 2, "b"});
  q.arrows.push_back({0, 1, "c"});
  q.arrows.push_back({1, 2, "d"});
  q.relations.push_back({{1, {0, 1}}, {6, {2, 3}}});  // ab = cd
  AlgebraPtr alg = path_algebra(FieldSpec(7), q);
  CHECK(alg->dim == 10);
  const Mat pa = alg->basis_vec(alg->label_index("a"));
  const Mat pb = alg->basis_vec(alg->label_index("b"));
  const Mat pc = alg->basis_vec(alg->label_index("c"));
  const Mat pd = alg->basis_vec(alg->label_index("d"));
  CHECK(alg->mul(pa, pb) == alg->mul(pc, pd));
}

TEST_CASE("unbounded quivers are rejected") {
  Quiver loop;
  loop.vertices = 1;
  loop.arrows.push_back({0, 0, "t"});
  CHECK_THROWS_AS(path_algebra(FieldSpec(7), loop), InfiniteDimensional);

  Quiver nil;
  nil.vertices = 1;
  nil.arrows.push_back({0, 0, "t"});
  nil.relations.push_back({{1, {0, 0, 0}}});  // t^3 = 0
  AlgebraPtr a = path_algebra(FieldSpec(7), nil);
  CHECK(a->dim == 3);
  CHECK(is_local(*a));
  Mat t = a->basis_vec(1);
  CHECK(a->mul(a->mul(t, t), t).is_zero());

  Quiver bad;
  bad.vertices = 2;
  bad.arrows.push_back({0, 1, "a"});
  bad.relations.push_back({{1, {0, 0}}});  // a is not composable with itself
  CHECK_THROWS_AS(path_algebra(FieldSpec(7), bad), InvalidAlgebra);
}

TEST_CASE("validation flags broken tables") {
  AlgebraPtr lt = lower_triangular(FieldSpec(5), 2);
  // break associativity: e21 * e21 = e22
  Mat table = lt->mul_table;
  table.at(1 * 3 + 1, 2) = 1;
  CHECK_THROWS_AS(
      build_raw(FieldSpec(5), lt->basis_labels, table, lt->unit, lt->idempotents, {}, false),
      InvalidAlgebra);
  ValidationReport rep;
  try {
    build_raw(FieldSpec(5), lt->basis_labels, table, lt->unit, lt->idempotents, {}, false);
  } catch (const InvalidAlgebra& e) {
    CHECK(std::string(e.what()).find("associativity") != std::string::npos);
  }

  // wrong unit
  Mat bad_unit = lt->basis_vec(0);
  CHECK_THROWS_AS(
      build_raw(FieldSpec(5), lt->basis_labels, lt->mul_table, bad_unit, lt->idempotents, {},
                false),
      InvalidAlgebra);

  // idempotents that do not sum to the unit
  std::vector<Mat> idems{lt->idempotents[0], lt->idempotents[0]};
  CHECK_THROWS_AS(
      build_raw(FieldSpec(5), lt->basis_labels, lt->mul_table, lt->unit, idems, {}, false),
      InvalidIdempotents);

  // an imprimitive idempotent: the unit of F_5 x F_5 as a single idempotent
  AlgebraPtr split = product(prime_field(FieldSpec(5)), prime_field(FieldSpec(5)));
  CHECK_THROWS_AS(
      build_raw(FieldSpec(5), split->basis_labels, split->mul_table, split->unit, {split->unit},
                {}, false),
      InvalidIdempotents);
  AlgebraPtr relaxed = build_raw(FieldSpec(5), split->basis_labels, split->mul_table, split->unit,
                                 {split->unit}, {}, true);
  CHECK(relaxed->non_primitive);

  // characteristic must exceed the dimension
  AlgebraPtr lt3 = lower_triangular(FieldSpec(5), 3);
  CHECK_THROWS_AS(
      build_raw(FieldSpec(5), lt3->basis_labels, lt3->mul_table, lt3->unit, lt3->idempotents, {},
                false),
      InvalidAlgebra);
}

TEST_CASE("multiplication helpers agree with the table") {
  AlgebraPtr lt = lower_triangular(FieldSpec(7), 3);
  std::mt19937_64 rng(314);
  for (int trial = 0; trial < 20; ++trial) {
    Mat x = exactla::random_matrix(1, lt->dim, 7, rng);
    Mat y = exactla::random_matrix(1, lt->dim, 7, rng);
    Mat z = exactla::random_matrix(1, lt->dim, 7, rng);
    CHECK(lt->mul(lt->mul(x, y), z) == lt->mul(x, lt->mul(y, z)));
    CHECK(x * lt->rmul_matrix(y) == lt->mul(x, y));
    CHECK(x * lt->lmul_matrix(y) == lt->mul(y, x));
    CHECK(lt->mul(lt->unit, x) == x);
  }
  CHECK(lt->power(lt->basis_vec(0), 5) == lt->basis_vec(0));
  CHECK(lt->power(lt->basis_vec(1), 2).is_zero());
}

TEST_CASE("zero algebra round trips through the basic queries") {
  AlgebraPtr z = zero_algebra(FieldSpec(5));
  CHECK(z->dim == 0);
  CHECK(radical(*z).rows() == 0);
  CHECK(center(*z).rows() == 0);
  CHECK(validate_algebra(*z).ok());
}
