#pragma once

#include <optional>
#include <string>
#include <vector>

#include "glmgee/rk.hpp"
#include "glmgee/tableau.hpp"

namespace glmgee::catalog {

struct Declared {
  int order = 0;
  Rational gamma{0};
  // 0: none checked, 1: BU diagonal, 2: + BAU diagonal, 3: + B diag(A1) U
  int decoupling_level = 0;
};

struct CatalogEntry {
  TableauQ tableau;
  std::string source;   // where the coefficients come from
  Declared declared;
  std::string notes;
};

struct ListedMethod {
  std::string name;
  int order;
  double gamma;
  TableauForm form;
};

/// Immutable entry lookup; throws std::out_of_range listing the catalog on an
/// unknown name. Every entry is self-checked (validate + verify_order against
/// its declarations) the first time the catalog is touched.
const CatalogEntry& get(const std::string& name);

std::vector<ListedMethod> list();

bool contains(const std::string& name);

/// RK3(2)G1 source method with its dense-output operators.
const RkWithDenseOutput<Rational>& rk32g1();

/// The (S, M, F) triplet for the exact-principal-error runner. The
/// transcription notes record a consistency repair of F's first weight.
const RkTriplet<Rational>& prince_triplet();

/// Embedded Heun/Euler pair (orders 1 and 2) for the error-equation solver.
const RkEmbeddedPair<Rational>& heun_euler_pair();

/// Classical plain RK helpers used by constructors and tests.
const RkTableauQ& classical_rk4();
const RkTableauQ& explicit_midpoint();

}  // namespace glmgee::catalog
