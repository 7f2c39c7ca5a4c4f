#pragma once

#include <random>
#include <string>
#include <vector>

#include "frobmod/analysis.hpp"

namespace frobmod::duality {

using bimodules::BimoduleHom;
using bimodules::FrobeniusCertificate;

enum class Direction { Star, Dagger };

struct DualizeReport {
  std::vector<std::string> checked;
  bool involution = false;     // the opposite duality recovers the morphism
  bool contravariant = false;  // dualizing a composite reverses the factors
  int modules_checked = 0;
  std::string detail;
};

struct DualizeResult {
  BimoduleHom hom;  // between the right duals, over the swapped algebra pair
  DualizeReport report;
};

// dualizes a morphism between two certified bimodules over the same algebra
// pair; the laws are checked as exact matrix identities at every catalog
// module and at the regular module
DualizeResult dualize_morphism(const FrobeniusCertificate& c1,
                               const FrobeniusCertificate& c2, const BimoduleHom& u,
                               Direction dir, std::mt19937_64& rng);

}  // namespace frobmod::duality
