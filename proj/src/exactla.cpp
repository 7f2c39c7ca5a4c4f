#include "frobmod/exactla.hpp"

#include <algorithm>

namespace frobmod::exactla {

namespace {

void check_same_modulus(const Mat& a, const Mat& b) {
  if (a.modulus() != b.modulus())
    throw std::invalid_argument("matrix moduli differ");
}

}  // namespace

FieldSpec::FieldSpec(std::uint64_t modulus) {
  if (modulus < 2 || modulus > 0x7fffffffull)
    throw std::invalid_argument("modulus out of range [2, 2^31-1]");
  for (std::uint64_t d = 2; d * d <= modulus; ++d)
    if (modulus % d == 0)
      throw std::invalid_argument("modulus " + std::to_string(modulus) + " is not prime");
  p = static_cast<std::uint32_t>(modulus);
}

std::uint32_t add_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  std::uint64_t s = std::uint64_t(a) + b;
  if (s >= p) s -= p;
  return static_cast<std::uint32_t>(s);
}

std::uint32_t sub_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  return a >= b ? a - b : static_cast<std::uint32_t>(std::uint64_t(a) + p - b);
}

std::uint32_t mul_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  return static_cast<std::uint32_t>((std::uint64_t(a) * b) % p);
}

std::uint32_t pow_mod(std::uint32_t a, std::uint64_t e, std::uint32_t p) {
  std::uint64_t base = a % p, acc = 1 % p;
  while (e) {
    if (e & 1) acc = (acc * base) % p;
    base = (base * base) % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(acc);
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  if (a % p == 0) throw SingularError("inverse of zero residue");
  return pow_mod(a % p, p - 2, p);
}

Mat::Mat(int rows, int cols, std::uint32_t p)
    : rows_(rows), cols_(cols), p_(p), e_(std::size_t(rows) * cols, 0) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix shape");
  if (p < 2) throw std::invalid_argument("matrix modulus must be >= 2");
}

Mat Mat::identity(int n, std::uint32_t p) {
  Mat m(n, n, p);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1 % p;
  return m;
}

Mat Mat::zeros(int rows, int cols, std::uint32_t p) { return Mat(rows, cols, p); }

std::uint32_t& Mat::at(int i, int j) {
  return e_[std::size_t(i) * cols_ + j];
}

std::uint32_t Mat::at(int i, int j) const {
  return e_[std::size_t(i) * cols_ + j];
}

bool Mat::operator==(const Mat& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && p_ == o.p_ && e_ == o.e_;
}

bool Mat::is_zero() const {
  return std::all_of(e_.begin(), e_.end(), [](std::uint32_t v) { return v == 0; });
}

bool Mat::is_identity() const {
  if (rows_ != cols_) return false;
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j)
      if (at(i, j) != (i == j ? 1u : 0u)) return false;
  return true;
}

Mat Mat::transpose() const {
  Mat t(cols_, rows_, p_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

Mat Mat::row(int i) const {
  Mat r(1, cols_, p_);
  for (int j = 0; j < cols_; ++j) r.at(0, j) = at(i, j);
  return r;
}

Mat Mat::col(int j) const {
  Mat c(rows_, 1, p_);
  for (int i = 0; i < rows_; ++i) c.at(i, 0) = at(i, j);
  return c;
}

Mat operator+(const Mat& a, const Mat& b) {
  check_same_modulus(a, b);
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("shape mismatch in addition");
  Mat r(a.rows(), a.cols(), a.modulus());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r.at(i, j) = add_mod(a.at(i, j), b.at(i, j), a.modulus());
  return r;
}

Mat operator-(const Mat& a, const Mat& b) {
  check_same_modulus(a, b);
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("shape mismatch in subtraction");
  Mat r(a.rows(), a.cols(), a.modulus());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r.at(i, j) = sub_mod(a.at(i, j), b.at(i, j), a.modulus());
  return r;
}

Mat operator*(const Mat& a, const Mat& b) {
  check_same_modulus(a, b);
  if (a.cols() != b.rows()) throw std::invalid_argument("shape mismatch in multiplication");
  const std::uint64_t p = a.modulus();
  Mat r(a.rows(), b.cols(), a.modulus());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      const std::uint64_t aik = a.at(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < b.cols(); ++j) {
        std::uint64_t acc = r.at(i, j) + aik * b.at(k, j) % p;
        if (acc >= p) acc -= p;
        r.at(i, j) = static_cast<std::uint32_t>(acc);
      }
    }
  }
  return r;
}

Mat Mat::scaled(std::uint32_t c) const {
  Mat r(rows_, cols_, p_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.at(i, j) = mul_mod(at(i, j), c, p_);
  return r;
}

Mat Mat::negated() const {
  Mat r(rows_, cols_, p_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.at(i, j) = sub_mod(0, at(i, j), p_);
  return r;
}

Mat hstack(const Mat& a, const Mat& b) {
  check_same_modulus(a, b);
  if (a.rows() != b.rows()) throw std::invalid_argument("hstack row mismatch");
  Mat r(a.rows(), a.cols() + b.cols(), a.modulus());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j);
    for (int j = 0; j < b.cols(); ++j) r.at(i, a.cols() + j) = b.at(i, j);
  }
  return r;
}

Mat vstack(const Mat& a, const Mat& b) {
  check_same_modulus(a, b);
  if (a.cols() != b.cols()) throw std::invalid_argument("vstack column mismatch");
  Mat r(a.rows() + b.rows(), a.cols(), a.modulus());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j);
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) r.at(a.rows() + i, j) = b.at(i, j);
  return r;
}

Mat kron(const Mat& a, const Mat& b) {
  check_same_modulus(a, b);
  Mat r(a.rows() * b.rows(), a.cols() * b.cols(), a.modulus());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      const std::uint32_t v = a.at(i, j);
      if (v == 0) continue;
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l)
          r.at(i * b.rows() + k, j * b.cols() + l) = mul_mod(v, b.at(k, l), a.modulus());
    }
  return r;
}

RrefResult rref(const Mat& m) {
  const std::uint32_t p = m.modulus();
  RrefResult res{m, {}, 0, Mat::identity(m.rows(), p)};
  Mat& a = res.reduced;
  Mat& t = res.transform;
  int r = 0;
  for (int c = 0; c < a.cols() && r < a.rows(); ++c) {
    int piv = -1;
    for (int i = r; i < a.rows(); ++i)
      if (a.at(i, c) != 0) { piv = i; break; }
    if (piv < 0) continue;
    if (piv != r) {
      for (int j = 0; j < a.cols(); ++j) std::swap(a.at(piv, j), a.at(r, j));
      for (int j = 0; j < t.cols(); ++j) std::swap(t.at(piv, j), t.at(r, j));
    }
    const std::uint32_t scale = inv_mod(a.at(r, c), p);
    for (int j = 0; j < a.cols(); ++j) a.at(r, j) = mul_mod(a.at(r, j), scale, p);
    for (int j = 0; j < t.cols(); ++j) t.at(r, j) = mul_mod(t.at(r, j), scale, p);
    for (int i = 0; i < a.rows(); ++i) {
      if (i == r) continue;
      const std::uint32_t f = a.at(i, c);
      if (f == 0) continue;
      for (int j = 0; j < a.cols(); ++j)
        a.at(i, j) = sub_mod(a.at(i, j), mul_mod(f, a.at(r, j), p), p);
      for (int j = 0; j < t.cols(); ++j)
        t.at(i, j) = sub_mod(t.at(i, j), mul_mod(f, t.at(r, j), p), p);
    }
    res.pivots.push_back(c);
    ++r;
  }
  res.rank = r;
  return res;
}

int rank_of(const Mat& m) { return rref(m).rank; }

SolveResult solve(const Mat& a, const Mat& b) {
  check_same_modulus(a, b);
  if (a.rows() != b.rows()) throw std::invalid_argument("solve: row mismatch");
  const std::uint32_t p = a.modulus();
  RrefResult red = rref(hstack(a, b));
  SolveResult out;
  out.particular = Mat::zeros(a.cols(), b.cols(), p);
  out.consistent = true;
  // a pivot inside the b-block certifies inconsistency
  for (int piv : red.pivots)
    if (piv >= a.cols()) out.consistent = false;

  std::vector<int> pivot_cols;
  for (int piv : red.pivots)
    if (piv < a.cols()) pivot_cols.push_back(piv);
  std::vector<char> is_pivot(a.cols(), 0);
  for (int c : pivot_cols) is_pivot[c] = 1;

  if (out.consistent) {
    for (std::size_t r = 0; r < pivot_cols.size(); ++r)
      for (int j = 0; j < b.cols(); ++j)
        out.particular.at(pivot_cols[r], j) = red.reduced.at(int(r), a.cols() + j);
  } else {
    out.particular = Mat(0, 0, p);
  }

  std::vector<int> free_cols;
  for (int c = 0; c < a.cols(); ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  out.null_basis = Mat::zeros(a.cols(), int(free_cols.size()), p);
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    const int fc = free_cols[k];
    out.null_basis.at(fc, int(k)) = 1 % p;
    for (std::size_t r = 0; r < pivot_cols.size(); ++r)
      out.null_basis.at(pivot_cols[r], int(k)) =
          sub_mod(0, red.reduced.at(int(r), fc), p);
  }
  return out;
}

SolveResult solve_left(const Mat& a, const Mat& b) {
  SolveResult t = solve(a.transpose(), b.transpose());
  SolveResult out;
  out.consistent = t.consistent;
  out.particular = t.consistent ? t.particular.transpose() : Mat(0, 0, a.modulus());
  out.null_basis = t.null_basis.transpose();  // rows span {x : x*a = 0}
  return out;
}

Mat invert(const Mat& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("invert: matrix not square");
  RrefResult red = rref(m);
  if (red.rank != m.rows())
    throw SingularError("matrix of rank " + std::to_string(red.rank) + " below dimension " +
                        std::to_string(m.rows()));
  return red.transform;
}

Mat left_kernel(const Mat& m) {
  SolveResult s = solve(m.transpose(), Mat::zeros(m.cols(), 0, m.modulus()));
  // columns of s.null_basis are kernel vectors of m^T; transpose to rows, then
  // normalize to rref for deterministic ordering
  return row_basis(s.null_basis.transpose());
}

Mat row_basis(const Mat& m) {
  RrefResult red = rref(m);
  Mat b(red.rank, m.cols(), m.modulus());
  for (int i = 0; i < red.rank; ++i)
    for (int j = 0; j < m.cols(); ++j) b.at(i, j) = red.reduced.at(i, j);
  return b;
}

Mat complement_rows(const Mat& sub, int ambient, std::uint32_t p) {
  Mat basis = row_basis(sub);
  std::vector<int> chosen;
  Mat current = basis;
  for (int c = 0; c < ambient && current.rows() < ambient; ++c) {
    Mat e = Mat::zeros(1, ambient, p);
    e.at(0, c) = 1 % p;
    Mat trial = vstack(current, e);
    if (rank_of(trial) > current.rows()) {
      current = trial;
      chosen.push_back(c);
    }
  }
  Mat out(int(chosen.size()), ambient, p);
  for (std::size_t k = 0; k < chosen.size(); ++k) out.at(int(k), chosen[k]) = 1 % p;
  return out;
}

Mat coords_in_rows(const Mat& basis, const Mat& m) {
  SolveResult s = solve_left(basis, m);
  if (!s.consistent) throw std::runtime_error("vector outside row space");
  return s.particular;
}

bool in_row_space(const Mat& basis, const Mat& v) {
  return solve_left(basis, v).consistent;
}

Mat random_matrix(int rows, int cols, std::uint32_t p, std::mt19937_64& rng) {
  Mat m(rows, cols, p);
  std::uniform_int_distribution<std::uint32_t> dist(0, p - 1);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m.at(i, j) = dist(rng);
  return m;
}

}  // namespace frobmod::exactla
