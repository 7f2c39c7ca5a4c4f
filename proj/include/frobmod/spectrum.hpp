#pragma once

#include <memory>
#include <string>
#include <vector>

#include "frobmod/bimodules.hpp"

namespace frobmod::spectrum {

using algebra::AlgebraPtr;
using exactla::Mat;
using modules::Representation;
using modules::StandardCatalog;

using CatalogPtr = std::shared_ptr<const StandardCatalog>;

class SpectrumError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
using modules::AlgebraMismatch;

CatalogPtr shared_catalog(const AlgebraPtr& a);

// hereditary torsion class over a finite dimensional algebra, encoded by the
// set of simple classes it kills; a module belongs to the class exactly when
// every composition factor lies in the killed set
struct LocalizingSubcat {
  AlgebraPtr alg;
  CatalogPtr cat;
  std::vector<int> killed;  // sorted positions into cat->class_reps

  bool kills(int class_pos) const;
  std::vector<int> surviving() const;
};

// killed classes given directly
LocalizingSubcat localizing_from_killed(const AlgebraPtr& a, const std::vector<int>& killed,
                                        CatalogPtr cat = nullptr);

// torsion class of the modules with no nonzero map into any hull of sigma;
// kills exactly the classes whose simple has no map into some member's hull
LocalizingSubcat localizing_from_modules(const AlgebraPtr& a,
                                         const std::vector<Representation>& sigma,
                                         CatalogPtr cat = nullptr);

// kernel of the tensor functor - (x) m on the left algebra of m; kills the
// classes whose simple tensors to zero
LocalizingSubcat localizing_from_kernel(const bimodules::Bimodule& m, CatalogPtr cat = nullptr);

// membership is support containment in the killed set
bool is_member(const LocalizingSubcat& t, const Representation& m);

// largest submodule lying in the class
modules::Submodule torsion_part(const LocalizingSubcat& t, const Representation& m);

struct EnvelopeClosure {
  bool closed = true;
  int witness_class = -1;   // killed class whose hull leaks, when not closed
  int witness_factor = -1;  // surviving class found inside that hull
};
EnvelopeClosure closed_under_envelopes(const LocalizingSubcat& t);

// lattice of the associated open subspaces; an open shrinks as its killed set
// grows, so intersection unions the killed sets and union intersects them
struct LatticeReport {
  LocalizingSubcat gabriel_product;    // closure of the union of the classes
  LocalizingSubcat open_intersection;  // same killed set as the product
  LocalizingSubcat open_union;
  bool is_cover = false;     // the two opens exhaust the points
  bool is_disjoint = false;  // the two opens share no point
};
LatticeReport lattice(const LocalizingSubcat& t1, const LocalizingSubcat& t2);

// compression of a module to the corner at the surviving idempotents
struct Compression {
  Representation rep;  // module over the corner algebra
  Mat basis;           // rep.dim x m.dim, ambient rows spanning the image of e'
  Mat project;         // m.dim x rep.dim, x -> corner coordinates of x e'
};

// open subspace realized through the corner algebra at the surviving classes;
// the three transfer functors are compression, tensor along e'A and hom along
// Ae', and the subspace owns both transfer bimodules
struct WeaklyOpenSubspace {
  AlgebraPtr alg;
  CatalogPtr cat;
  CatalogPtr corner_cat;  // null when the corner is zero
  std::vector<int> killed;
  std::vector<int> surviving;
  std::vector<int> surviving_idems;  // idempotent indices in surviving classes
  algebra::CornerData corner;
  bimodules::Bimodule transfer_up;    // Ae' as a bimodule over (alg, corner)
  bimodules::Bimodule transfer_down;  // e'A as a bimodule over (corner, alg)
  bool pushforward_exact = false;     // Ae' is projective over the corner
};
WeaklyOpenSubspace weakly_open(const LocalizingSubcat& t);

Compression compress(const WeaklyOpenSubspace& u, const Representation& m);
Mat compress_hom(const WeaklyOpenSubspace& u, const Compression& cm, const Compression& cn,
                 const Mat& f);

// extension of scalars along e'A, left adjoint to compression
bimodules::TensorModule extend(const WeaklyOpenSubspace& u, const Representation& n);

// hom transfer along Ae', right adjoint to compression
bimodules::HomModule coextend(const WeaklyOpenSubspace& u, const Representation& n);
Mat coextend_hom(const WeaklyOpenSubspace& u, const bimodules::HomModule& hm,
                 const bimodules::HomModule& hn, const Mat& f);

// sorted classes appearing among the composition factors
std::vector<int> factor_support(const StandardCatalog& cat, const Representation& m);

// closed sets are the factor supports of finite dimensional modules; every
// singleton arises from a simple, so the family is the full power set whenever
// it is listed
struct TopologyReport {
  int points = 0;
  bool discrete = false;
  std::vector<std::vector<int>> simple_supports;      // per class
  std::vector<std::vector<int>> projective_supports;  // per catalog entry
  std::vector<std::vector<int>> injective_supports;   // per catalog entry
  std::vector<std::vector<int>> closed_sets;          // omitted past 12 points
};
TopologyReport gabriel_topology(const AlgebraPtr& a, CatalogPtr cat = nullptr);

struct LocalityReport {
  bool is_local = false;     // a single point
  bool is_semilocal = true;  // finitely many points, certified by the catalog
  Representation cogenerator;  // direct sum of one hull per class
  bool cogenerates = false;    // every simple maps into the cogenerator
};
LocalityReport locality_report(const AlgebraPtr& a, CatalogPtr cat = nullptr);

}  // namespace frobmod::spectrum
