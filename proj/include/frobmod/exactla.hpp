// exact dense linear algebra over a prime field F_p
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace frobmod::exactla {

struct SingularError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// prime modulus, 2 <= p <= 2^31-1, primality checked by trial division
struct FieldSpec {
  std::uint32_t p;
  explicit FieldSpec(std::uint64_t modulus);
};

// dense row-major matrix of residues in [0, p); the modulus travels with the value
class Mat {
public:
  Mat() = default;
  Mat(int rows, int cols, std::uint32_t p);

  static Mat identity(int n, std::uint32_t p);
  static Mat zeros(int rows, int cols, std::uint32_t p);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::uint32_t modulus() const { return p_; }

  std::uint32_t& at(int i, int j);
  std::uint32_t at(int i, int j) const;

  bool operator==(const Mat& o) const;
  bool operator!=(const Mat& o) const { return !(*this == o); }

  bool is_zero() const;
  bool is_identity() const;

  Mat transpose() const;
  Mat row(int i) const;
  Mat col(int j) const;

  // entries are reduced after every operation
  friend Mat operator+(const Mat& a, const Mat& b);
  friend Mat operator-(const Mat& a, const Mat& b);
  friend Mat operator*(const Mat& a, const Mat& b);
  Mat scaled(std::uint32_t c) const;
  Mat negated() const;

private:
  int rows_ = 0;
  int cols_ = 0;
  std::uint32_t p_ = 0;
  std::vector<std::uint32_t> e_;
};

std::uint32_t add_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p);
std::uint32_t sub_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p);
std::uint32_t mul_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p);
std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p);
std::uint32_t pow_mod(std::uint32_t a, std::uint64_t e, std::uint32_t p);

// horizontal and vertical concatenation; moduli must agree
Mat hstack(const Mat& a, const Mat& b);
Mat vstack(const Mat& a, const Mat& b);
Mat kron(const Mat& a, const Mat& b);

struct RrefResult {
  Mat reduced;
  std::vector<int> pivots;
  int rank = 0;
  Mat transform;  // transform * input = reduced
};

// deterministic pivoting: first nonzero entry in column order
RrefResult rref(const Mat& m);

int rank_of(const Mat& m);

struct SolveResult {
  bool consistent = false;
  Mat particular;  // solution X of a*X = b when consistent, else empty shape
  Mat null_basis;  // columns form a basis of {x : a*x = 0}
};

// solves a*X = b column by column; b may have several columns
SolveResult solve(const Mat& a, const Mat& b);

// solves X*a = b; row-space analogue of solve
SolveResult solve_left(const Mat& a, const Mat& b);

Mat invert(const Mat& m);  // throws SingularError when rank < dimension

// rows spanning {x : x*m = 0}, in rref order
Mat left_kernel(const Mat& m);

// rref basis of the row space
Mat row_basis(const Mat& m);

// standard basis rows extending the row space of sub to the whole ambient space;
// returned rows are only the added vectors
Mat complement_rows(const Mat& sub, int ambient, std::uint32_t p);

// coordinates c with c*basis = v for every row v of m; throws when inconsistent
Mat coords_in_rows(const Mat& basis, const Mat& m);

bool in_row_space(const Mat& basis, const Mat& v);

Mat random_matrix(int rows, int cols, std::uint32_t p, std::mt19937_64& rng);

}  // namespace frobmod::exactla
