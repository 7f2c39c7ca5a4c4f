#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "frobmod/spectrum.hpp"

namespace frobmod::analysis {

using algebra::AlgebraPtr;
using bimodules::Bimodule;
using bimodules::FrobeniusCertificate;
using exactla::Mat;
using modules::Representation;
using spectrum::CatalogPtr;

class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class NotRightLocalizing : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};
class NotFaithful : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};
class NotDisjoint : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};
class NotCover : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};
class HypothesisFailure : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

// basis of the center, rows in algebra coordinates
Mat center_rows(const AlgebraPtr& a);

// intertwines both actions: u.lact(e) * f == f * n.lact(e) and likewise on
// the right, with matching algebras up to structure equality
bool is_bimodule_map(const Bimodule& m, const Bimodule& n, const Mat& f);

// one tensor value together with its decomposition into indecomposable
// injectives over the target algebra
struct InjectiveImage {
  bimodules::TensorModule value;
  modules::InjectiveDecomposition dec;
};

// multiplicity tables of the two tensor functors on indecomposable
// injectives; rrk[x][y] counts E(y) inside E(x) (x) M and lrk[y][x] counts
// E(x) inside E(y) (x) M*; rho and lambda are the row sums
struct RankReport {
  AlgebraPtr left_alg;
  AlgebraPtr right_alg;
  CatalogPtr left_cat;
  CatalogPtr right_cat;
  std::vector<int> supp_F;  // classes x with S_x (x) M nonzero
  std::vector<int> supp_G;  // classes y with S_y (x) M* nonzero
  std::vector<std::vector<int>> rrk;
  std::vector<std::vector<int>> lrk;
  std::vector<int> rho;
  std::vector<int> lambda;
  std::vector<InjectiveImage> images_F;  // per left class
  std::vector<InjectiveImage> images_G;  // per right class
  // f[x] = the single class carrying E(x) (x) M, or -1 when the image is
  // zero or spreads over several classes; defined entries lie in supp_G
  std::vector<int> f;
  bool f_single_valued_on_supp = false;
  // n_y[y] = multiplicity when FG(E(y)) is y-isotypic, else -1
  std::vector<int> n_y;
  bool additivity_checked = false;
  bool additivity_holds = false;
  bool reciprocity_holds = false;
};
RankReport rank_report(const FrobeniusCertificate& cert);
// functor pair of a bare bimodule, the dual taken on the spot; covers pairs
// whose duals fail the certificate comparison
RankReport rank_report(const Bimodule& m);

struct PredicateVerdict {
  bool holds = false;
  bool applicable = true;
  std::string witness;  // concrete refutation when false, empty otherwise
};

struct ClassificationReport {
  PredicateVerdict faithful_F;
  PredicateVerdict faithful_G;
  PredicateVerdict right_localizing;
  PredicateVerdict left_localizing;
  bool square = false;  // the two algebras coincide structurally
  PredicateVerdict localizing;  // the reading selected by the flag
  PredicateVerdict localizing_with_zero;
  PredicateVerdict localizing_without_zero;
  PredicateVerdict centralizing;
  PredicateVerdict locally_centralizing;
  bool brute_force_checked = false;  // exhaustive killed-set sweep ran
};
ClassificationReport classify(const FrobeniusCertificate& cert,
                              bool include_zero_subcategory);
ClassificationReport classify(const Bimodule& m, bool include_zero_subcategory);

// the class map induced on injectives: f[x] = y with E(x) (x) M isomorphic
// to a power of E(y); defined on supp_F only
struct SupportMap {
  std::vector<int> f;
  std::vector<int> supp_F;
  std::vector<int> supp_G;
  bool surjective = false;  // onto supp_G
  bool injective = false;   // on supp_F
  bool homeomorphism = false;
  bool left_localizing_agrees = false;  // injectivity matches the verdict
};
SupportMap support_map(const FrobeniusCertificate& cert);
SupportMap support_map(const Bimodule& m);

struct RestrictionReport {
  spectrum::LocalizingSubcat preimage;  // classes sent into the killed set
  spectrum::WeaklyOpenSubspace v;       // source-side subspace at the preimage
  Bimodule restricted;                  // e'Me'' over the two corners
  Bimodule restricted_dual;             // e''M*e' over the corners, swapped
  bool sufficient_condition = false;    // killed set absorbed by FG
  bimodules::FrobeniusResult recheck;
  bool projection_formula_F = false;
  bool projection_formula_G = false;
  std::string detail;
};
RestrictionReport restrict_certificate(const FrobeniusCertificate& cert,
                                       const spectrum::WeaklyOpenSubspace& u,
                                       std::mt19937_64& rng);

struct PartitionBlock {
  int rank_value = 0;
  spectrum::LocalizingSubcat t;  // kills the classes of other total ranks
  RestrictionReport restriction;
  bool envelope_closed = false;
  bool constant_rank_verified = false;
};

struct PartitionReport {
  std::vector<int> rank_values;  // sorted distinct total left ranks
  std::vector<PartitionBlock> blocks;
  bool disjoint = false;
  bool cover = false;
  bool all_closed = false;
  bool decomposition_built = false;  // M reassembled from the block slices
  modules::IsoStatus decomposition_status = modules::IsoStatus::Unknown;
};
PartitionReport constant_rank_partition(const FrobeniusCertificate& cert,
                                        std::mt19937_64& rng);

struct DecompositionCheck {
  bool all_closed = false;
  std::vector<spectrum::EnvelopeClosure> closures;  // per part
  bool decomposed = false;
  Mat to_product;  // algebra coordinates onto the stacked corners when built
  int witness_part = -1;  // part whose killed hull leaks
  Representation nonsplit_witness;  // indecomposable crossing two parts
  int witness_part_a = -1;
  int witness_part_b = -1;
};
DecompositionCheck category_decomposition_check(
    const AlgebraPtr& a, const std::vector<spectrum::LocalizingSubcat>& parts);

struct EquivalenceReport {
  bool equivalence = false;
  bool faithful_F = false;
  bool faithful_G = false;
  bool rho_all_one = false;
  bool lambda_all_one = false;
  // GF against the identity on every catalog projective, hull, and the
  // regular module, populated when the numeric criteria all hold
  std::vector<modules::IsoResult> round_trip;
};
EquivalenceReport equivalence_test(const FrobeniusCertificate& cert, std::mt19937_64& rng);
EquivalenceReport equivalence_test(const Bimodule& m, std::mt19937_64& rng);

// splitting of an injective into the part torsion for the second class,
// the part torsion for the first, and a part torsionfree for their union
struct Tripartition {
  Representation e1;
  Representation e2;
  Representation q;
  Mat iso;  // ambient coordinates onto the stacked blocks, invertible
  bool verified = false;
};
Tripartition injective_tripartition(const Representation& e,
                                    const spectrum::LocalizingSubcat& t1,
                                    const spectrum::LocalizingSubcat& t2);

}  // namespace frobmod::analysis
