// finite-dimensional unital algebras over F_p with distinguished primitive idempotents
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "frobmod/exactla.hpp"

namespace frobmod::algebra {

using exactla::FieldSpec;
using exactla::Mat;

struct AlgebraError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidAlgebra : AlgebraError {
  using AlgebraError::AlgebraError;
};
struct InvalidIdempotents : AlgebraError {
  using AlgebraError::AlgebraError;
};
struct InfiniteDimensional : AlgebraError {
  using AlgebraError::AlgebraError;
};
struct ReduciblePolynomial : AlgebraError {
  using AlgebraError::AlgebraError;
};
struct RadicalNotNilpotent : AlgebraError {
  using AlgebraError::AlgebraError;
};

struct Algebra;
using AlgebraPtr = std::shared_ptr<const Algebra>;

// elements are coordinate rows; mul_table row (i*dim + j) holds coords of b_i * b_j
struct Algebra {
  FieldSpec field;
  int dim = 0;
  std::vector<std::string> basis_labels;
  Mat mul_table;                 // (dim*dim) x dim
  Mat unit;                      // 1 x dim
  std::vector<Mat> idempotents;  // each 1 x dim, orthogonal, primitive, summing to unit
  std::vector<Mat> generators;   // rows whose span closure together with unit is the algebra

  // set when idempotent primitivity failed verification; catalog machinery refuses
  // such algebras while hom and iso machinery still works
  bool non_primitive = false;

  std::vector<Mat> right_mult;  // R_i with coords(x * b_i) = x * R_i
  std::vector<Mat> left_mult;   // L_i with coords(b_i * x) = x * L_i

  Mat basis_vec(int i) const;
  Mat product_row(int i, int j) const;       // coords of b_i * b_j
  Mat mul(const Mat& x, const Mat& y) const; // both 1 x dim
  Mat rmul_matrix(const Mat& v) const;       // coords(x * v) = x * rmul_matrix(v)
  Mat lmul_matrix(const Mat& v) const;       // coords(v * x) = x * lmul_matrix(v)
  Mat power(const Mat& x, std::uint64_t e) const;
  bool is_commutative() const;
  int label_index(const std::string& label) const;  // -1 when absent
};

struct ValidationIssue {
  std::string axiom;
  std::string witness;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  std::string to_string() const;
};

// assembles derived tables without validating; used by validators and tests
AlgebraPtr assemble_algebra(FieldSpec field, std::vector<std::string> labels, Mat mul_table,
                            Mat unit, std::vector<Mat> idempotents,
                            std::vector<Mat> generators = {});

ValidationReport validate_algebra(const Algebra& a);

// validated constructor; throws InvalidAlgebra / InvalidIdempotents on failure.
// allow_non_primitive downgrades a failed primitivity check to non_primitive mode.
AlgebraPtr build_raw(FieldSpec field, std::vector<std::string> labels, Mat mul_table, Mat unit,
                     std::vector<Mat> idempotents, std::vector<Mat> generators = {},
                     bool allow_non_primitive = false);

struct Quiver {
  int vertices = 0;
  struct Arrow {
    int src = 0;
    int tgt = 0;
    std::string label;
  };
  std::vector<Arrow> arrows;
  // a relation is a combination of same-length paths sharing source and target;
  // each path is a composable arrow index sequence read left to right
  struct Term {
    std::uint32_t coeff = 0;
    std::vector<int> path;
  };
  std::vector<std::vector<Term>> relations;
};

// bound quiver algebra with vertex idempotents; relations must be length homogeneous
AlgebraPtr path_algebra(FieldSpec field, const Quiver& q);

// F_{p^m} presented as F_p[t]/(f) for a monic irreducible f of degree m
AlgebraPtr field_extension(FieldSpec field, int m, const std::vector<std::uint32_t>& monic_poly);

AlgebraPtr prime_field(FieldSpec field);
AlgebraPtr product(const AlgebraPtr& a, const AlgebraPtr& b);
AlgebraPtr opposite(const AlgebraPtr& a);
AlgebraPtr matrix_over(const AlgebraPtr& a, int n);
AlgebraPtr lower_triangular(FieldSpec field, int n);
AlgebraPtr zero_algebra(FieldSpec field);

Mat center(const Algebra& a);   // rows spanning the center
Mat radical(const Algebra& a);  // rows spanning rad(A); throws RadicalNotNilpotent

struct CornerData {
  AlgebraPtr alg;
  Mat eprime;    // 1 x dimA
  Mat incl;      // dimC x dimA, corner basis in ambient coordinates
  Mat compress;  // dimA x dimC, x -> corner coords of e'xe'
  std::vector<int> surviving;
};

CornerData corner(const AlgebraPtr& a, const std::vector<int>& surviving);

// A^op (x) B; idempotent primitivity is re-verified with downgrade on failure
AlgebraPtr enveloping(const AlgebraPtr& a, const AlgebraPtr& b);

// local means every element is nilpotent or invertible
bool is_local(const Algebra& a, std::string* reason = nullptr);

// structure tables equal entry for entry (same field, dim, tables, unit, idempotents)
bool same_structure(const Algebra& a, const Algebra& b);

}  // namespace frobmod::algebra
