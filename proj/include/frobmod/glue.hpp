#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "frobmod/analysis.hpp"

namespace frobmod::glue {

using algebra::AlgebraPtr;
using analysis::AnalysisError;
using analysis::HypothesisFailure;
using exactla::Mat;
using modules::Representation;

// gluing input: on each algebra two torsion classes cut the spectrum into a
// pair of weakly open pieces, and a local bimodule is prescribed over the
// corner algebras of the matching source and target pieces; killed sets hold
// class positions of the canonical catalogs
struct GlueTask {
  AlgebraPtr source_alg;
  AlgebraPtr target_alg;
  std::vector<int> source_killed_1;
  std::vector<int> source_killed_2;
  std::vector<int> target_killed_1;
  std::vector<int> target_killed_2;
  bimodules::Bimodule local_1;  // over the corners of the first pair of pieces
  bimodules::Bimodule local_2;  // over the corners of the second pair
  std::optional<Mat> overlap_witness;  // iso between the two overlap slices
  std::uint64_t seed = 0x9e3779b9u;
};

// image of the hull of one source class under the assembled functor
struct ClassValue {
  int cls = 0;        // class position in the source catalog
  int group = 2;      // 0 first piece only, 1 second piece only, 2 overlap
  int path = 1;       // side whose local bimodule produced the value
  int value_dim = 0;
};

struct GlueReport {
  std::vector<std::string> checked;  // hypotheses verified, in check order
  std::vector<ClassValue> values;
  int overlap_dim = 0;  // shared dimension of the two overlap slices
  modules::IsoStatus restriction_1 = modules::IsoStatus::Unknown;
  modules::IsoStatus restriction_2 = modules::IsoStatus::Unknown;
  bool restrictions_agree = false;  // both slices isomorphic to the inputs
  analysis::PredicateVerdict right_localizing;  // verdict on the glued result
  std::string detail;
};

struct GlueResult {
  bimodules::FrobeniusCertificate cert;
  GlueReport report;
};

// assembles a certificate over the full algebras from the two local ones; the
// functor is built on catalog injectives blockwise along the tripartition,
// transported to maps between them, and evaluated on the regular module
// through an injective copresentation; throws HypothesisFailure naming the
// first broken hypothesis and AnalysisError when a step is inconclusive
GlueResult glue(const GlueTask& task);

}  // namespace frobmod::glue
