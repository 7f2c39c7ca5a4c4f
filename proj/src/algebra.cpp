#include "frobmod/algebra.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace frobmod::algebra {

using exactla::add_mod;
using exactla::hstack;
using exactla::inv_mod;
using exactla::kron;
using exactla::left_kernel;
using exactla::mul_mod;
using exactla::rank_of;
using exactla::row_basis;
using exactla::sub_mod;
using exactla::vstack;

Mat Algebra::basis_vec(int i) const {
  Mat v(1, dim, field.p);
  v.at(0, i) = 1 % field.p;
  return v;
}

Mat Algebra::product_row(int i, int j) const { return mul_table.row(i * dim + j); }

Mat Algebra::mul(const Mat& x, const Mat& y) const {
  Mat acc(1, dim, field.p);
  for (int j = 0; j < dim; ++j) {
    const std::uint32_t yj = y.at(0, j);
    if (yj == 0) continue;
    acc = acc + (x * right_mult[j]).scaled(yj);
  }
  return acc;
}

Mat Algebra::rmul_matrix(const Mat& v) const {
  Mat m(dim, dim, field.p);
  for (int j = 0; j < dim; ++j) {
    const std::uint32_t vj = v.at(0, j);
    if (vj == 0) continue;
    m = m + right_mult[j].scaled(vj);
  }
  return m;
}

Mat Algebra::lmul_matrix(const Mat& v) const {
  Mat m(dim, dim, field.p);
  for (int j = 0; j < dim; ++j) {
    const std::uint32_t vj = v.at(0, j);
    if (vj == 0) continue;
    m = m + left_mult[j].scaled(vj);
  }
  return m;
}

Mat Algebra::power(const Mat& x, std::uint64_t e) const {
  Mat acc = unit;
  Mat base = x;
  while (e) {
    if (e & 1) acc = mul(acc, base);
    base = mul(base, base);
    e >>= 1;
  }
  return acc;
}

bool Algebra::is_commutative() const {
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j)
      if (product_row(i, j) != product_row(j, i)) return false;
  return true;
}

int Algebra::label_index(const std::string& label) const {
  for (int i = 0; i < dim; ++i)
    if (basis_labels[i] == label) return i;
  return -1;
}

std::string ValidationReport::to_string() const {
  std::string s;
  for (const auto& issue : issues) {
    if (!s.empty()) s += "; ";
    s += issue.axiom + " (" + issue.witness + ")";
  }
  return s.empty() ? "ok" : s;
}

namespace {

Algebra assemble_value(FieldSpec field, std::vector<std::string> labels, Mat mul_table, Mat unit,
                       std::vector<Mat> idempotents, std::vector<Mat> generators) {
  Algebra a{field, int(labels.size()), std::move(labels), std::move(mul_table), std::move(unit),
            std::move(idempotents), std::move(generators), false, {}, {}};
  const int d = a.dim;
  if (a.mul_table.rows() != d * d || a.mul_table.cols() != d)
    throw InvalidAlgebra("structure table shape must be dim^2 x dim");
  if (a.unit.rows() != 1 || a.unit.cols() != d)
    throw InvalidAlgebra("unit must be a single coordinate row");
  if (a.generators.empty()) {
    for (int i = 0; i < d; ++i) {
      Mat v(1, d, field.p);
      v.at(0, i) = 1 % field.p;
      a.generators.push_back(v);
    }
  }
  a.right_mult.reserve(d);
  a.left_mult.reserve(d);
  for (int j = 0; j < d; ++j) {
    Mat r(d, d, field.p);
    Mat l(d, d, field.p);
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k) {
        r.at(i, k) = a.mul_table.at(i * d + j, k);
        l.at(i, k) = a.mul_table.at(j * d + i, k);
      }
    a.right_mult.push_back(std::move(r));
    a.left_mult.push_back(std::move(l));
  }
  return a;
}

// span closure of the given rows together with the unit under multiplication
int generated_dimension(const Algebra& a, const std::vector<Mat>& gens) {
  if (a.dim == 0) return 0;
  Mat span = a.unit;
  for (const Mat& g : gens) span = vstack(span, g);
  span = row_basis(span);
  for (;;) {
    Mat next = span;
    for (int i = 0; i < span.rows(); ++i)
      for (int j = 0; j < span.rows(); ++j)
        next = vstack(next, a.mul(span.row(i), span.row(j)));
    next = row_basis(next);
    if (next.rows() == span.rows()) return span.rows();
    span = next;
  }
}

}  // namespace

AlgebraPtr assemble_algebra(FieldSpec field, std::vector<std::string> labels, Mat mul_table,
                            Mat unit, std::vector<Mat> idempotents, std::vector<Mat> generators) {
  return std::make_shared<Algebra>(assemble_value(field, std::move(labels), std::move(mul_table),
                                                  std::move(unit), std::move(idempotents),
                                                  std::move(generators)));
}

Mat radical(const Algebra& a) {
  const std::uint32_t p = a.field.p;
  if (a.dim == 0) return Mat(0, 0, p);
  // trace form of the regular representation; kernel contains rad always, and a
  // nilpotent kernel must equal rad
  std::vector<std::uint32_t> tvec(a.dim);
  for (int k = 0; k < a.dim; ++k) {
    std::uint32_t t = 0;
    for (int i = 0; i < a.dim; ++i) t = add_mod(t, a.left_mult[k].at(i, i), p);
    tvec[k] = t;
  }
  Mat gram(a.dim, a.dim, p);
  for (int i = 0; i < a.dim; ++i)
    for (int j = 0; j < a.dim; ++j) {
      const Mat row = a.product_row(i, j);
      std::uint32_t acc = 0;
      for (int k = 0; k < a.dim; ++k) acc = add_mod(acc, mul_mod(row.at(0, k), tvec[k], p), p);
      gram.at(i, j) = acc;
    }
  Mat rad = left_kernel(gram);
  // certify nilpotency by span powering
  Mat power = rad;
  for (int step = 0; step <= a.dim && power.rows() > 0; ++step) {
    Mat next(0, a.dim, p);
    for (int i = 0; i < power.rows(); ++i)
      for (int j = 0; j < rad.rows(); ++j) next = vstack(next, a.mul(power.row(i), rad.row(j)));
    next = row_basis(next);
    if (next.rows() == 0) return rad;
    power = next;
  }
  if (power.rows() == 0) return rad;
  throw RadicalNotNilpotent("trace-form kernel is not nilpotent");
}

Mat center(const Algebra& a) {
  const std::uint32_t p = a.field.p;
  if (a.dim == 0) return Mat(0, 0, p);
  Mat constraints(a.dim, 0, p);
  for (const Mat& g : a.generators)
    constraints = hstack(constraints, a.rmul_matrix(g) - a.lmul_matrix(g));
  return left_kernel(constraints);
}

bool is_local(const Algebra& a, std::string* reason) {
  if (a.dim == 0) {
    if (reason) *reason = "zero algebra";
    return false;
  }
  const std::uint32_t p = a.field.p;
  Mat rad = radical(a);
  Mat wbasis = exactla::complement_rows(rad, a.dim, p);
  Mat full = vstack(row_basis(rad), wbasis);
  Mat full_inv = exactla::invert(full);
  const int q = wbasis.rows();
  const int r = rad.rows();
  auto project = [&](const Mat& x) {
    Mat c = x * full_inv;
    Mat out(1, q, p);
    for (int j = 0; j < q; ++j) out.at(0, j) = c.at(0, r + j);
    return out;
  };
  auto qmul = [&](const Mat& u, const Mat& v) {
    return project(a.mul(u * wbasis, v * wbasis));
  };
  // semisimple quotient of a local algebra over a finite field is a field,
  // hence commutative
  for (int i = 0; i < q; ++i)
    for (int j = i + 1; j < q; ++j) {
      Mat ei(1, q, p), ej(1, q, p);
      ei.at(0, i) = 1;
      ej.at(0, j) = 1;
      if (qmul(ei, ej) != qmul(ej, ei)) {
        if (reason) *reason = "semisimple quotient is not commutative";
        return false;
      }
    }
  // count field components of the commutative semisimple quotient as the fixed
  // space of x -> x^p
  Mat unit_q = project(a.unit);
  Mat frob(q, q, p);
  for (int i = 0; i < q; ++i) {
    Mat x(1, q, p);
    x.at(0, i) = 1;
    Mat acc = unit_q;
    Mat base = x;
    std::uint64_t e = p;
    while (e) {
      if (e & 1) acc = qmul(acc, base);
      base = qmul(base, base);
      e >>= 1;
    }
    for (int j = 0; j < q; ++j) frob.at(i, j) = acc.at(0, j);
  }
  Mat fixed = left_kernel(frob - Mat::identity(q, p));
  if (fixed.rows() != 1) {
    if (reason)
      *reason = "semisimple quotient splits into " + std::to_string(fixed.rows()) + " fields";
    return false;
  }
  return true;
}

ValidationReport validate_algebra(const Algebra& a) {
  ValidationReport rep;
  const std::uint32_t p = a.field.p;
  const int d = a.dim;
  if (int(a.basis_labels.size()) != d)
    rep.issues.push_back({"labels", "label count differs from dim"});
  if (d > 0 && p <= std::uint32_t(d))
    rep.issues.push_back({"characteristic", "field modulus must exceed dim"});
  if (d == 0) return rep;

  for (int i = 0; i < d && rep.issues.size() < 8; ++i)
    for (int j = 0; j < d && rep.issues.size() < 8; ++j)
      for (int k = 0; k < d; ++k) {
        Mat lhs = a.mul(a.product_row(i, j), a.basis_vec(k));
        Mat rhs = a.mul(a.basis_vec(i), a.product_row(j, k));
        if (lhs != rhs) {
          rep.issues.push_back({"associativity", "(" + std::to_string(i + 1) + "," +
                                                     std::to_string(j + 1) + "," +
                                                     std::to_string(k + 1) + ")"});
          break;
        }
      }
  for (int i = 0; i < d; ++i) {
    if (a.mul(a.unit, a.basis_vec(i)) != a.basis_vec(i) ||
        a.mul(a.basis_vec(i), a.unit) != a.basis_vec(i)) {
      rep.issues.push_back({"unit", "basis element " + std::to_string(i + 1)});
      break;
    }
  }
  const auto& es = a.idempotents;
  Mat sum(1, d, p);
  for (std::size_t i = 0; i < es.size(); ++i) {
    sum = sum + es[i];
    for (std::size_t j = 0; j < es.size(); ++j) {
      Mat prod = a.mul(es[i], es[j]);
      Mat expected = (i == j) ? es[i] : Mat(1, d, p);
      if (prod != expected) {
        rep.issues.push_back({"idempotent orthogonality",
                              "e" + std::to_string(i + 1) + "*e" + std::to_string(j + 1)});
      }
    }
  }
  if (sum != a.unit) rep.issues.push_back({"idempotent sum", "sum differs from unit"});

  if (generated_dimension(a, a.generators) != d)
    rep.issues.push_back({"generators", "generator closure does not span"});

  if (rep.ok()) {
    for (std::size_t i = 0; i < es.size(); ++i) {
      CornerData cd = corner(std::make_shared<Algebra>(a), {int(i)});
      std::string why;
      if (!is_local(*cd.alg, &why))
        rep.issues.push_back({"idempotent primitivity",
                              "e" + std::to_string(i + 1) + " corner not local: " + why});
    }
  }
  return rep;
}

AlgebraPtr build_raw(FieldSpec field, std::vector<std::string> labels, Mat mul_table, Mat unit,
                     std::vector<Mat> idempotents, std::vector<Mat> generators,
                     bool allow_non_primitive) {
  Algebra a = assemble_value(field, std::move(labels), std::move(mul_table), std::move(unit),
                             std::move(idempotents), std::move(generators));
  ValidationReport rep = validate_algebra(a);
  if (!rep.ok()) {
    const bool all_idempotent =
        std::all_of(rep.issues.begin(), rep.issues.end(), [](const ValidationIssue& i) {
          return i.axiom.rfind("idempotent", 0) == 0;
        });
    const bool only_primitivity =
        std::all_of(rep.issues.begin(), rep.issues.end(), [](const ValidationIssue& i) {
          return i.axiom == "idempotent primitivity";
        });
    if (only_primitivity && allow_non_primitive) {
      a.non_primitive = true;
    } else if (all_idempotent) {
      throw InvalidIdempotents(rep.to_string());
    } else {
      throw InvalidAlgebra(rep.to_string());
    }
  }
  return std::make_shared<Algebra>(std::move(a));
}

namespace {

// trusted assembly for constructors whose output is correct by construction;
// verifies idempotent locality only when check_primitivity is set
AlgebraPtr build_trusted(FieldSpec field, std::vector<std::string> labels, Mat mul_table, Mat unit,
                         std::vector<Mat> idempotents, std::vector<Mat> generators,
                         bool check_primitivity = false, bool allow_non_primitive = false) {
  Algebra a = assemble_value(field, std::move(labels), std::move(mul_table), std::move(unit),
                             std::move(idempotents), std::move(generators));
  if (check_primitivity) {
    AlgebraPtr probe = std::make_shared<Algebra>(a);
    for (std::size_t i = 0; i < a.idempotents.size(); ++i) {
      CornerData cd = corner(probe, {int(i)});
      std::string why;
      if (!is_local(*cd.alg, &why)) {
        if (!allow_non_primitive)
          throw InvalidIdempotents("idempotent " + std::to_string(i + 1) +
                                   " is not primitive: " + why);
        a.non_primitive = true;
        break;
      }
    }
  }
  return std::make_shared<Algebra>(std::move(a));
}

}  // namespace

AlgebraPtr path_algebra(FieldSpec field, const Quiver& q) {
  const std::uint32_t p = field.p;
  constexpr int kMaxDegree = 64;
  constexpr int kMaxDim = 512;
  if (q.vertices < 1) throw InvalidAlgebra("quiver needs at least one vertex");
  const int narrows = int(q.arrows.size());
  for (const auto& ar : q.arrows)
    if (ar.src < 0 || ar.src >= q.vertices || ar.tgt < 0 || ar.tgt >= q.vertices)
      throw InvalidAlgebra("arrow endpoint out of range");

  struct Rel {
    int len = -1;
    int src = -1;
    int tgt = -1;
    std::vector<Quiver::Term> terms;
  };
  std::vector<Rel> rels;
  for (const auto& r : q.relations) {
    if (r.empty()) continue;
    Rel rel;
    for (const auto& term : r) {
      if (term.path.empty()) throw InvalidAlgebra("relation terms must have positive length");
      int src = -1, tgt = -1;
      for (std::size_t s = 0; s < term.path.size(); ++s) {
        const int ai = term.path[s];
        if (ai < 0 || ai >= narrows) throw InvalidAlgebra("relation references unknown arrow");
        if (s == 0)
          src = q.arrows[ai].src;
        else if (q.arrows[term.path[s - 1]].tgt != q.arrows[ai].src)
          throw InvalidAlgebra("relation path is not composable");
        tgt = q.arrows[ai].tgt;
      }
      if (rel.len == -1) {
        rel.len = int(term.path.size());
        rel.src = src;
        rel.tgt = tgt;
      } else if (rel.len != int(term.path.size())) {
        throw InvalidAlgebra("relation mixes path lengths");
      } else if (rel.src != src || rel.tgt != tgt) {
        throw InvalidAlgebra("relation mixes path endpoints");
      }
      rel.terms.push_back({term.coeff % p, term.path});
    }
    rels.push_back(std::move(rel));
  }

  struct BasisPath {
    std::vector<int> arrows;
    int src;
    int tgt;
  };
  std::vector<std::vector<BasisPath>> layers;
  layers.push_back({});
  for (int v = 0; v < q.vertices; ++v) layers[0].push_back({{}, v, v});
  // ext[d][i][a] holds the degree-d coordinates of (basis path i of degree d-1) * arrow a
  std::vector<std::vector<std::vector<Mat>>> ext(1);

  auto append_arrow = [&](int deg, const Mat& coords, int a) -> std::pair<int, Mat> {
    const int nd = deg + 1;
    if (nd >= int(layers.size())) return {nd, Mat(1, 0, p)};
    Mat out(1, int(layers[nd].size()), p);
    for (int i = 0; i < coords.cols(); ++i) {
      const std::uint32_t ci = coords.at(0, i);
      if (ci == 0) continue;
      out = out + ext[nd][i][a].scaled(ci);
    }
    return {nd, out};
  };

  int total_dim = q.vertices;
  for (int d = 1;; ++d) {
    if (d > kMaxDegree) throw InfiniteDimensional("path length exceeds the degree cap");
    const auto& prev = layers[d - 1];
    std::vector<std::pair<int, int>> vpairs;
    std::vector<std::vector<int>> vmap(prev.size(), std::vector<int>(narrows, -1));
    for (int i = 0; i < int(prev.size()); ++i)
      for (int a = 0; a < narrows; ++a)
        if (prev[i].tgt == q.arrows[a].src) {
          vmap[i][a] = int(vpairs.size());
          vpairs.push_back({i, a});
        }
    const int n = int(vpairs.size());
    if (n == 0) break;

    Mat wrows(0, n, p);
    for (const Rel& rel : rels) {
      if (rel.len > d) continue;
      const int qd = d - rel.len;
      for (int j = 0; j < int(layers[qd].size()); ++j) {
        if (layers[qd][j].tgt != rel.src) continue;
        Mat row(1, n, p);
        for (const auto& term : rel.terms) {
          const std::uint32_t c = term.coeff % p;
          if (c == 0) continue;
          int deg = qd;
          Mat coords(1, int(layers[qd].size()), p);
          coords.at(0, j) = 1;
          for (std::size_t s = 0; s + 1 < term.path.size(); ++s) {
            auto [nd, nc] = append_arrow(deg, coords, term.path[s]);
            deg = nd;
            coords = std::move(nc);
          }
          const int last = term.path.back();
          for (int i = 0; i < coords.cols(); ++i) {
            const std::uint32_t ci = coords.at(0, i);
            if (ci == 0) continue;
            const int vi = vmap[i][last];
            if (vi < 0) continue;
            row.at(0, vi) = add_mod(row.at(0, vi), mul_mod(ci, c, p), p);
          }
        }
        if (!row.is_zero()) wrows = vstack(wrows, row);
      }
    }

    Mat wb = row_basis(wrows);
    Mat comp = exactla::complement_rows(wb, n, p);
    const int qn = comp.rows();
    if (qn == 0) break;
    Mat proj(n, qn, p);
    {
      Mat full = vstack(wb, comp);
      Mat finv = exactla::invert(full);
      for (int i = 0; i < n; ++i)
        for (int c = 0; c < qn; ++c) proj.at(i, c) = finv.at(i, wb.rows() + c);
    }
    std::vector<BasisPath> layer;
    for (int r = 0; r < qn; ++r) {
      int pos = -1;
      for (int cidx = 0; cidx < n; ++cidx)
        if (comp.at(r, cidx) != 0) {
          pos = cidx;
          break;
        }
      const auto [i, a] = vpairs[pos];
      BasisPath bp;
      bp.arrows = prev[i].arrows;
      bp.arrows.push_back(a);
      bp.src = prev[i].src;
      bp.tgt = q.arrows[a].tgt;
      layer.push_back(std::move(bp));
    }
    std::vector<std::vector<Mat>> layer_ext(prev.size(), std::vector<Mat>(narrows, Mat(1, qn, p)));
    for (int i = 0; i < int(prev.size()); ++i)
      for (int a = 0; a < narrows; ++a)
        if (vmap[i][a] >= 0)
          for (int c = 0; c < qn; ++c) layer_ext[i][a].at(0, c) = proj.at(vmap[i][a], c);
    layers.push_back(std::move(layer));
    ext.push_back(std::move(layer_ext));
    total_dim += qn;
    if (total_dim > kMaxDim) throw InfiniteDimensional("path algebra exceeds the dimension cap");
  }

  std::vector<int> offsets(layers.size(), 0);
  for (std::size_t d = 1; d < layers.size(); ++d)
    offsets[d] = offsets[d - 1] + int(layers[d - 1].size());

  std::vector<std::string> labels;
  std::set<std::string> seen;
  auto push_label = [&](std::string name) {
    while (seen.count(name)) name += "_";
    seen.insert(name);
    labels.push_back(std::move(name));
  };
  for (int v = 0; v < q.vertices; ++v) push_label("e" + std::to_string(v + 1));
  for (std::size_t d = 1; d < layers.size(); ++d)
    for (const auto& bp : layers[d]) {
      std::string name;
      for (int a : bp.arrows) name += q.arrows[a].label;
      push_label(std::move(name));
    }

  Mat table(total_dim * total_dim, total_dim, p);
  for (std::size_t d1 = 0; d1 < layers.size(); ++d1)
    for (int i = 0; i < int(layers[d1].size()); ++i) {
      const int gx = offsets[d1] + i;
      for (std::size_t d2 = 0; d2 < layers.size(); ++d2)
        for (int j = 0; j < int(layers[d2].size()); ++j) {
          const int gy = offsets[d2] + j;
          if (d2 == 0) {
            if (layers[d1][i].tgt == layers[0][j].src) table.at(gx * total_dim + gy, gx) = 1 % p;
            continue;
          }
          if (d1 == 0) {
            if (layers[0][i].src == layers[d2][j].src) table.at(gx * total_dim + gy, gy) = 1 % p;
            continue;
          }
          int deg = int(d1);
          Mat coords(1, int(layers[d1].size()), p);
          coords.at(0, i) = 1;
          for (int a : layers[d2][j].arrows) {
            auto [nd, nc] = append_arrow(deg, coords, a);
            deg = nd;
            coords = std::move(nc);
            if (coords.cols() == 0 || coords.is_zero()) break;
          }
          for (int k = 0; k < coords.cols(); ++k)
            table.at(gx * total_dim + gy, offsets[deg] + k) = coords.at(0, k);
        }
    }

  Mat unit(1, total_dim, p);
  std::vector<Mat> idems;
  for (int v = 0; v < q.vertices; ++v) {
    Mat e(1, total_dim, p);
    e.at(0, v) = 1 % p;
    idems.push_back(e);
    unit = unit + e;
  }
  std::vector<Mat> gens = idems;
  if (layers.size() > 1) {
    for (int a = 0; a < narrows; ++a) {
      const int v = q.arrows[a].src;
      const Mat& red = ext[1][v][a];
      Mat g(1, total_dim, p);
      for (int c = 0; c < red.cols(); ++c) g.at(0, offsets[1] + c) = red.at(0, c);
      if (!g.is_zero()) gens.push_back(g);
    }
  }
  return build_trusted(field, std::move(labels), std::move(table), unit, std::move(idems),
                       std::move(gens));
}

AlgebraPtr prime_field(FieldSpec field) {
  Mat table(1, 1, field.p);
  table.at(0, 0) = 1 % field.p;
  Mat unit = table;
  return build_trusted(field, {"u"}, table, unit, {unit}, {});
}

AlgebraPtr zero_algebra(FieldSpec field) {
  return build_trusted(field, {}, Mat(0, 0, field.p), Mat(1, 0, field.p), {}, {});
}

AlgebraPtr field_extension(FieldSpec field, int m, const std::vector<std::uint32_t>& monic_poly) {
  const std::uint32_t p = field.p;
  if (m < 1) throw InvalidAlgebra("extension degree must be positive");
  if (int(monic_poly.size()) != m + 1 || monic_poly[m] % p != 1)
    throw InvalidAlgebra("polynomial must be monic of degree m");
  std::vector<std::uint32_t> f(monic_poly);
  for (auto& c : f) c %= p;

  using Poly = std::vector<std::uint32_t>;  // little-endian coefficients
  auto trim = [](Poly a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
  };
  auto pmod = [&](Poly a) {
    a = trim(std::move(a));
    while (int(a.size()) >= m + 1) {
      const std::uint32_t lead = a.back();
      const int shift = int(a.size()) - (m + 1);
      for (int i = 0; i <= m; ++i)
        a[i + shift] = sub_mod(a[i + shift], mul_mod(lead, f[i], p), p);
      a = trim(std::move(a));
    }
    return a;
  };
  auto pmul = [&](const Poly& a, const Poly& b) {
    Poly c(a.size() + b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j)
        c[i + j] = add_mod(c[i + j], mul_mod(a[i], b[j], p), p);
    return pmod(std::move(c));
  };
  auto ppow = [&](Poly base, std::uint64_t e) {
    Poly acc{1 % p};
    while (e) {
      if (e & 1) acc = pmul(acc, base);
      base = pmul(base, base);
      e >>= 1;
    }
    return acc;
  };
  auto pgcd = [&](Poly a, Poly b) {
    a = trim(std::move(a));
    b = trim(std::move(b));
    while (!b.empty()) {
      // a mod b by long division
      while (a.size() >= b.size() && !a.empty()) {
        const std::uint32_t scale = mul_mod(a.back(), inv_mod(b.back(), p), p);
        const std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i)
          a[i + shift] = sub_mod(a[i + shift], mul_mod(scale, b[i], p), p);
        a = trim(std::move(a));
      }
      std::swap(a, b);
    }
    return a;
  };

  if (m > 1) {
    const Poly x{0, 1 % p};
    Poly frob = x;
    std::vector<Poly> frob_powers{x};  // frob_powers[k] = x^(p^k) mod f
    for (int k = 1; k <= m; ++k) {
      frob = ppow(frob, p);
      frob_powers.push_back(frob);
    }
    if (trim(frob_powers[m]) != trim(x))
      throw ReduciblePolynomial("x^(p^m) differs from x modulo f");
    for (int q = 2; q <= m; ++q) {
      if (m % q != 0) continue;
      bool prime_q = true;
      for (int d2 = 2; d2 * d2 <= q; ++d2)
        if (q % d2 == 0) prime_q = false;
      if (!prime_q) continue;
      Poly g = frob_powers[m / q];
      Poly gm(std::max(g.size(), std::size_t(2)), 0);
      for (std::size_t i = 0; i < g.size(); ++i) gm[i] = g[i];
      gm[1] = sub_mod(gm[1], 1, p);
      Poly common = pgcd(gm, f);
      if (trim(common).size() > 1)
        throw ReduciblePolynomial("f shares a factor with x^(p^(m/q)) - x");
    }
  }

  // basis 1, t, ..., t^(m-1)
  std::vector<Poly> powers(2 * m - 1);
  powers[0] = {1 % p};
  for (int k = 1; k < 2 * m - 1; ++k) powers[k] = pmod(pmul(powers[k - 1], Poly{0, 1 % p}));
  Mat table(m * m, m, p);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const Poly& pr = powers[i + j];
      for (std::size_t k = 0; k < pr.size(); ++k) table.at(i * m + j, int(k)) = pr[k];
    }
  Mat unit(1, m, p);
  unit.at(0, 0) = 1 % p;
  std::vector<std::string> labels;
  for (int i = 0; i < m; ++i) labels.push_back("t" + std::to_string(i));
  std::vector<Mat> gens;
  gens.push_back(unit);
  if (m > 1) {
    Mat t(1, m, p);
    t.at(0, 1) = 1 % p;
    gens.push_back(t);
  }
  return build_trusted(field, std::move(labels), std::move(table), unit, {unit}, std::move(gens));
}

AlgebraPtr product(const AlgebraPtr& a, const AlgebraPtr& b) {
  if (a->field.p != b->field.p) throw InvalidAlgebra("product over different fields");
  const std::uint32_t p = a->field.p;
  const int da = a->dim, db = b->dim, d = da + db;
  auto pad_a = [&](const Mat& v) {
    Mat out(1, d, p);
    for (int j = 0; j < da; ++j) out.at(0, j) = v.at(0, j);
    return out;
  };
  auto pad_b = [&](const Mat& v) {
    Mat out(1, d, p);
    for (int j = 0; j < db; ++j) out.at(0, da + j) = v.at(0, j);
    return out;
  };
  Mat table(d * d, d, p);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j) {
      Mat row = a->product_row(i, j);
      for (int k = 0; k < da; ++k) table.at(i * d + j, k) = row.at(0, k);
    }
  for (int i = 0; i < db; ++i)
    for (int j = 0; j < db; ++j) {
      Mat row = b->product_row(i, j);
      for (int k = 0; k < db; ++k) table.at((da + i) * d + (da + j), da + k) = row.at(0, k);
    }
  std::vector<std::string> labels;
  std::set<std::string> seen;
  for (const auto& l : a->basis_labels) {
    labels.push_back(l);
    seen.insert(l);
  }
  for (const auto& l : b->basis_labels) {
    std::string name = l;
    while (seen.count(name)) name += "_2";
    labels.push_back(name);
    seen.insert(name);
  }
  std::vector<Mat> idems;
  for (const Mat& e : a->idempotents) idems.push_back(pad_a(e));
  for (const Mat& e : b->idempotents) idems.push_back(pad_b(e));
  std::vector<Mat> gens;
  for (const Mat& g : a->generators) gens.push_back(pad_a(g));
  for (const Mat& g : b->generators) gens.push_back(pad_b(g));
  gens.push_back(pad_a(a->unit));
  gens.push_back(pad_b(b->unit));
  AlgebraPtr out = build_trusted(a->field, std::move(labels), std::move(table),
                                 pad_a(a->unit) + pad_b(b->unit), std::move(idems),
                                 std::move(gens));
  if (a->non_primitive || b->non_primitive) {
    Algebra copy = *out;
    copy.non_primitive = true;
    return std::make_shared<Algebra>(std::move(copy));
  }
  return out;
}

AlgebraPtr opposite(const AlgebraPtr& a) {
  const int d = a->dim;
  Mat table(d * d, d, a->field.p);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) table.at(i * d + j, k) = a->mul_table.at(j * d + i, k);
  std::vector<std::string> labels = a->basis_labels;
  AlgebraPtr out = build_trusted(a->field, std::move(labels), std::move(table), a->unit,
                                 a->idempotents, a->generators);
  if (a->non_primitive) {
    Algebra copy = *out;
    copy.non_primitive = true;
    return std::make_shared<Algebra>(std::move(copy));
  }
  return out;
}

AlgebraPtr matrix_over(const AlgebraPtr& a, int n) {
  if (n < 1) throw InvalidAlgebra("matrix size must be positive");
  const std::uint32_t p = a->field.p;
  const int da = a->dim, d = da * n * n;
  auto idx = [&](int s, int i, int j) { return s * n * n + i * n + j; };
  Mat table(d * d, d, p);
  for (int s = 0; s < da; ++s)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int t = 0; t < da; ++t)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
              if (j != k) continue;
              Mat row = a->product_row(s, t);
              for (int u = 0; u < da; ++u)
                table.at(idx(s, i, j) * d + idx(t, k, l), idx(u, i, l)) = row.at(0, u);
            }
  std::vector<std::string> labels;
  for (int s = 0; s < da; ++s)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        labels.push_back(a->basis_labels[s] + "_" + std::to_string(i + 1) + std::to_string(j + 1));
  Mat unit(1, d, p);
  for (int i = 0; i < n; ++i)
    for (int s = 0; s < da; ++s) unit.at(0, idx(s, i, i)) = a->unit.at(0, s);
  std::vector<Mat> idems;
  for (const Mat& e : a->idempotents)
    for (int i = 0; i < n; ++i) {
      Mat v(1, d, p);
      for (int s = 0; s < da; ++s) v.at(0, idx(s, i, i)) = e.at(0, s);
      idems.push_back(v);
    }
  return build_trusted(a->field, std::move(labels), std::move(table), unit, std::move(idems), {});
}

AlgebraPtr lower_triangular(FieldSpec field, int n) {
  if (n < 1) throw InvalidAlgebra("triangular size must be positive");
  const std::uint32_t p = field.p;
  std::vector<std::pair<int, int>> cells;  // (row, col) with row >= col, 1-based
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= i; ++j) cells.push_back({i, j});
  const int d = int(cells.size());
  auto find_cell = [&](int i, int j) {
    for (int k = 0; k < d; ++k)
      if (cells[k].first == i && cells[k].second == j) return k;
    return -1;
  };
  Mat table(d * d, d, p);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) {
      auto [i, j] = cells[x];
      auto [k, l] = cells[y];
      if (j == k) table.at(x * d + y, find_cell(i, l)) = 1 % p;
    }
  std::vector<std::string> labels;
  for (auto [i, j] : cells)
    labels.push_back("e" + std::to_string(i) + std::to_string(j));
  Mat unit(1, d, p);
  std::vector<Mat> idems;
  for (int i = 1; i <= n; ++i) {
    Mat e(1, d, p);
    e.at(0, find_cell(i, i)) = 1 % p;
    idems.push_back(e);
    unit = unit + e;
  }
  return build_trusted(field, std::move(labels), std::move(table), unit, std::move(idems), {});
}

CornerData corner(const AlgebraPtr& a, const std::vector<int>& surviving) {
  const std::uint32_t p = a->field.p;
  std::vector<int> surv = surviving;
  std::sort(surv.begin(), surv.end());
  surv.erase(std::unique(surv.begin(), surv.end()), surv.end());
  for (int i : surv)
    if (i < 0 || i >= int(a->idempotents.size()))
      throw InvalidAlgebra("surviving idempotent index out of range");
  Mat eprime(1, a->dim, p);
  for (int i : surv) eprime = eprime + a->idempotents[i];
  if (surv.empty()) {
    CornerData cd;
    cd.alg = zero_algebra(a->field);
    cd.eprime = eprime;
    cd.incl = Mat(0, a->dim, p);
    cd.compress = Mat(a->dim, 0, p);
    cd.surviving = surv;
    return cd;
  }
  Mat proj = a->lmul_matrix(eprime) * a->rmul_matrix(eprime);
  Mat basis = row_basis(proj);
  const int dc = basis.rows();
  Mat table(dc * dc, dc, p);
  for (int i = 0; i < dc; ++i)
    for (int j = 0; j < dc; ++j) {
      Mat prod = a->mul(basis.row(i), basis.row(j));
      Mat coords = exactla::coords_in_rows(basis, prod);
      for (int k = 0; k < dc; ++k) table.at(i * dc + j, k) = coords.at(0, k);
    }
  std::vector<std::string> labels;
  for (int i = 0; i < dc; ++i) labels.push_back("c" + std::to_string(i + 1));
  Mat unit_c = exactla::coords_in_rows(basis, eprime);
  std::vector<Mat> idems;
  for (int i : surv) idems.push_back(exactla::coords_in_rows(basis, a->idempotents[i]));
  CornerData cd;
  cd.alg = build_trusted(a->field, std::move(labels), std::move(table), unit_c, std::move(idems),
                         {});
  if (a->non_primitive) {
    Algebra copy = *cd.alg;
    copy.non_primitive = true;
    cd.alg = std::make_shared<Algebra>(std::move(copy));
  }
  cd.eprime = eprime;
  cd.incl = basis;
  // compression row i holds the corner coordinates of e' b_i e'
  exactla::SolveResult s = exactla::solve_left(basis, proj);
  if (!s.consistent) throw InvalidAlgebra("corner compression failed");
  cd.compress = s.particular;
  cd.surviving = surv;
  return cd;
}

AlgebraPtr enveloping(const AlgebraPtr& a, const AlgebraPtr& b) {
  if (a->field.p != b->field.p) throw InvalidAlgebra("enveloping over different fields");
  const std::uint32_t p = a->field.p;
  const int da = a->dim, db = b->dim, d = da * db;
  Mat table(d * d, d, p);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < db; ++j)
      for (int k = 0; k < da; ++k)
        for (int l = 0; l < db; ++l) {
          // (a_i (x) b_j) * (a_k (x) b_l) = (a_k a_i) (x) (b_j b_l) in A^op (x) B
          Mat row = kron(a->product_row(k, i), b->product_row(j, l));
          const int lhs = (i * db + j) * d + (k * db + l);
          for (int c = 0; c < d; ++c) table.at(lhs, c) = row.at(0, c);
        }
  std::vector<std::string> labels;
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < db; ++j)
      labels.push_back(a->basis_labels[i] + "." + b->basis_labels[j]);
  Mat unit = kron(a->unit, b->unit);
  std::vector<Mat> idems;
  for (const Mat& e : a->idempotents)
    for (const Mat& f : b->idempotents) idems.push_back(kron(e, f));
  std::vector<Mat> gens;
  for (const Mat& g : a->generators) gens.push_back(kron(g, b->unit));
  for (const Mat& h : b->generators) gens.push_back(kron(a->unit, h));
  return build_trusted(a->field, std::move(labels), std::move(table), unit, std::move(idems),
                       std::move(gens), true, true);
}

bool same_structure(const Algebra& a, const Algebra& b) {
  if (a.field.p != b.field.p || a.dim != b.dim) return false;
  if (!(a.mul_table == b.mul_table) || !(a.unit == b.unit)) return false;
  if (a.idempotents.size() != b.idempotents.size()) return false;
  for (std::size_t i = 0; i < a.idempotents.size(); ++i)
    if (!(a.idempotents[i] == b.idempotents[i])) return false;
  return true;
}

}  // namespace frobmod::algebra
