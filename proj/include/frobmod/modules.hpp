#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "frobmod/algebra.hpp"

namespace frobmod::modules {

using algebra::AlgebraPtr;
using algebra::ValidationReport;
using exactla::Mat;

class ModuleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class AlgebraMismatch : public ModuleError {
 public:
  using ModuleError::ModuleError;
};
class NonPrimitiveIdempotents : public ModuleError {
 public:
  using ModuleError::ModuleError;
};
class NotInjective : public ModuleError {
 public:
  using ModuleError::ModuleError;
};
class ExtensionFailure : public ModuleError {
 public:
  using ModuleError::ModuleError;
};

// right module in the row-vector convention: coords(x * b_i) = coords(x) * action[i]
struct Representation {
  AlgebraPtr alg;
  int dim = 0;
  std::vector<Mat> action;

  // action matrix of an arbitrary algebra element given by a coordinate row
  Mat act(const Mat& elt) const;
  bool is_zero() const { return dim == 0; }
};

struct ModuleHom {
  Representation source;
  Representation target;
  Mat matrix;  // source.dim x target.dim, f(x) = x * matrix
};

ValidationReport validate_representation(const Representation& m);

Representation zero_module(const AlgebraPtr& a);
Representation regular_module(const AlgebraPtr& a);

struct DirectSum {
  Representation rep;
  std::vector<Mat> embed;    // summand dim x total dim
  std::vector<Mat> project;  // total dim x summand dim
};
DirectSum direct_sum(const std::vector<Representation>& parts);

// sub-representation on the row space of rows; throws if the span is not action stable
struct Submodule {
  Representation rep;
  Mat inclusion;  // rep.dim x ambient dim
};
Submodule submodule_from_rows(const Representation& m, const Mat& rows);

struct Quotient {
  Representation rep;
  Mat projection;  // ambient dim x rep.dim
  Mat section;     // rep.dim x ambient dim, projection is a left inverse
};
Quotient quotient_by_rows(const Representation& m, const Mat& rows);

// basis of intertwiners f with f(x a) = f(x) a, deterministic rref order
std::vector<Mat> hom_space(const Representation& m, const Representation& n);

struct CatalogEntry {
  Representation P;  // e_i A
  Representation S;  // top of P
  Representation E;  // dual of A e_i
  Mat top_projection;  // P -> S
  Mat socle_inclusion; // S -> E, image is the socle
  int iso_class = 0;   // smallest index whose simple is isomorphic to this one
  int end_dim = 1;     // dim of the endomorphism field of S
};

struct StandardCatalog {
  AlgebraPtr alg;
  Mat radical_rows;
  std::vector<CatalogEntry> entries;
  std::vector<int> class_reps;  // sorted distinct iso_class values

  int n() const { return int(entries.size()); }
  int class_position(int rep_index) const;  // position inside class_reps
};

StandardCatalog standard_catalog(const AlgebraPtr& a);

// rows of the largest semisimple submodule
Mat socle_rows(const StandardCatalog& cat, const Representation& m);

// explicit semisimple decomposition of the socle into catalog simples
struct SocleDecomposition {
  Mat socle;                              // rows in m coordinates
  std::vector<int> mult;                  // per class rep
  std::vector<std::pair<int, Mat>> pieces;  // (class rep, monic hom S_rep -> m)
};
SocleDecomposition socle_decomposition(const StandardCatalog& cat, const Representation& m);

struct StructureSeries {
  std::vector<Mat> socle_series;    // strictly increasing row spaces, last is full
  std::vector<Mat> radical_series;  // strictly decreasing row spaces, first is full
  std::vector<int> factors;         // composition multiplicities per class rep
  int length = 0;                   // socle length
};
StructureSeries structure_series(const StandardCatalog& cat, const Representation& m);

std::vector<int> composition_factors(const StandardCatalog& cat, const Representation& m);

struct InjectiveHull {
  Representation hull;
  Mat embed;              // m.dim x hull.dim, verified injective intertwiner
  std::vector<int> mult;  // per class rep
};
InjectiveHull injective_hull(const StandardCatalog& cat, const Representation& m);

// multiplicities of the indecomposable injectives; throws NotInjective when the
// module fails to reconstruct as their direct sum
struct InjectiveDecomposition {
  std::vector<int> mult;  // per class rep
  Mat iso;                // m -> sum of E blocks, invertible
  Representation standard_form;
};
InjectiveDecomposition injective_decompose(const StandardCatalog& cat, const Representation& m);

enum class IsoStatus { Isomorphic, NotIsomorphic, Unknown };

struct IsoResult {
  IsoStatus status = IsoStatus::Unknown;
  Mat cert;            // invertible intertwiner when Isomorphic
  std::string reason;  // refutation or exhaustion note otherwise
};

IsoResult iso_test(const Representation& m, const Representation& n, std::mt19937_64& rng,
                   const StandardCatalog* cat = nullptr);

// splitting of the free cover on a full basis; empty when the cover does not split
struct ProjectivityResult {
  bool projective = false;
  Mat splitting;  // m.dim x (m.dim * algebra dim) section of the cover
};
ProjectivityResult is_projective(const Representation& m);

// largest submodule all of whose composition factors lie in the killed class set
Submodule torsion_submodule(const StandardCatalog& cat, const Representation& m,
                            const std::vector<int>& killed_classes);

}  // namespace frobmod::modules
