#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "frobmod/modules.hpp"

namespace frobmod::bimodules {

using algebra::AlgebraPtr;
using algebra::ValidationReport;
using exactla::Mat;
using modules::Representation;

class BimoduleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class NotAutomorphism : public BimoduleError {
 public:
  using BimoduleError::BimoduleError;
};
class ActionsDoNotCommute : public BimoduleError {
 public:
  using BimoduleError::BimoduleError;
};

// two-sided module in the row-vector convention:
//   coords(a_i * m) = coords(m) * left_action[i], so left_action(ab) = left_action(b) * left_action(a)
//   coords(m * b_j) = coords(m) * right_action[j]
struct Bimodule {
  AlgebraPtr left_alg;
  AlgebraPtr right_alg;
  int dim = 0;
  std::vector<Mat> left_action;
  std::vector<Mat> right_action;

  Mat lact(const Mat& elt) const;
  Mat ract(const Mat& elt) const;
  bool is_zero() const { return dim == 0; }
};

struct BimoduleHom {
  Mat matrix;  // source.dim x target.dim, intertwines both actions
};

ValidationReport validate_bimodule(const Bimodule& m);

Bimodule from_actions(const AlgebraPtr& a, const AlgebraPtr& b, int dim,
                      std::vector<Mat> left_action, std::vector<Mat> right_action);
Bimodule zero_bimodule(const AlgebraPtr& a, const AlgebraPtr& b);
Bimodule regular_bimodule(const AlgebraPtr& a);

// the regular space with the right action twisted through an automorphism,
// given by its matrix on coordinate rows
Bimodule twist(const AlgebraPtr& a, const Mat& phi);

// A/I carrying its left A-action and the right action of the target algebra,
// which must match the canonical quotient presentation exactly
Bimodule quotient_by_ideal(const AlgebraPtr& a, const Mat& ideal_rows, const AlgebraPtr& target);

// e'Me'' over the two corner algebras
Bimodule corner_slice(const Bimodule& m, const algebra::CornerData& left_corner,
                      const algebra::CornerData& right_corner);

// X (x) Y with a acting through the left tensor factor; x must be a module
// over the opposite algebra of a
Bimodule external(const AlgebraPtr& a, const Representation& x, const Representation& y);

struct BimoduleSum {
  Bimodule bim;
  std::vector<Mat> embed;
  std::vector<Mat> project;
};
BimoduleSum direct_sum_bimodules(const std::vector<Bimodule>& parts);

Representation right_restriction(const Bimodule& m);
// the left structure as a right module over opposite(left_alg)
Representation left_restriction(const Bimodule& m, const AlgebraPtr& op);

Representation as_module_over_enveloping(const Bimodule& m, const AlgebraPtr& env);
Bimodule from_enveloping_module(const Representation& rep, const AlgebraPtr& a,
                                const AlgebraPtr& b);

std::vector<Mat> bimodule_hom_space(const Bimodule& m, const Bimodule& n);
modules::IsoResult bimodule_iso_test(const Bimodule& m, const Bimodule& n, std::mt19937_64& rng);

// X (x)_A M as a right module over the right algebra; proj maps raw kron
// coordinates onto the quotient, sect is a fixed section, rel spans the
// subspace killed by proj
struct TensorModule {
  Representation rep;
  Mat rel;
  Mat proj;
  Mat sect;
};
TensorModule tensor(const Representation& x, const Bimodule& m);

// induced map X (x) M -> X' (x) M of a module hom f: X -> X'
Mat tensor_hom(const Mat& f, const TensorModule& tx, const TensorModule& txp);

struct TensorBimodule {
  Bimodule bim;
  Mat rel;
  Mat proj;
  Mat sect;
};
TensorBimodule tensor_bimodule(const Bimodule& m, const Bimodule& n);

// Hom over the shared right algebra, as a right module over the left algebra
struct HomModule {
  Representation rep;
  std::vector<Mat> basis;  // hom matrices P.dim x N.dim
};
HomModule hom_functor(const Bimodule& p, const Representation& n);

enum class DualSide { Left, Right };

struct DualData {
  Bimodule bim;               // the dual as a bimodule over (right_alg, left_alg)
  std::vector<Mat> basis;     // hom matrices, m.dim x algebra dim
};
DualData dual(const Bimodule& m, DualSide side);

struct AdjunctionSystem {
  TensorBimodule mf;   // M (x) M^* over (A,A)
  TensorBimodule fm;   // M^* (x) M over (B,B)
  Mat eta;        // A -> M (x) M^*, coevaluation of the first adjunction
  Mat eps;        // M^* (x) M -> B, evaluation of the first adjunction
  Mat theta_hat;  // B -> M^* (x) M, unit of the second adjunction
  Mat xi_hat;     // M (x) M^* -> A, counit of the second adjunction
};

struct FrobeniusCertificate {
  Bimodule m;
  DualData dual_left;
  DualData dual_right;
  Mat theta;      // coordinates of the left dual onto the right dual
  Mat theta_inv;
  Mat right_components;  // row t = right dual coordinates of the t-th splitting component
  Mat left_components;   // row u = left dual coordinates of the u-th splitting component
  AdjunctionSystem adjunction;
};

enum class FrobeniusStatus {
  Certified,
  NotLeftProjective,
  NotRightProjective,
  DualsNotIsomorphic,
  Unknown
};

struct FrobeniusResult {
  FrobeniusStatus status = FrobeniusStatus::Unknown;
  std::optional<FrobeniusCertificate> cert;
  std::string detail;
};

FrobeniusResult frobenius_check(const Bimodule& m, std::mt19937_64& rng);

// dual basis and adjunction triangle identities, checked as exact matrix
// equalities; throws BimoduleError on any violation
void verify_zigzags(const FrobeniusCertificate& cert);

enum class Functor { F, G };

TensorModule apply_functor(const FrobeniusCertificate& cert, Functor which,
                           const Representation& x);
Mat apply_functor_hom(const FrobeniusCertificate& cert, Functor which, const Mat& f,
                      const TensorModule& tx, const TensorModule& txp);

struct EndomorphismExtension {
  AlgebraPtr ext;
  Mat embedding;  // base dim x ext dim, unital algebra map coordinates
  bool projective_over_base = false;
  modules::IsoStatus hom_iso = modules::IsoStatus::Unknown;
  std::string detail;
};
EndomorphismExtension endomorphism_extension(const FrobeniusCertificate& cert,
                                             std::mt19937_64& rng);

}  // namespace frobmod::bimodules
