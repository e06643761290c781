#pragma once

// Named built-in functions: the Petz-Hasegawa grid, the three symmetric
// constructions from t^p, and the power-product families.

#include <string>
#include <vector>

#include "omf/expr.hpp"

namespace omf {

struct CatalogEntry {
  std::string family;  // petz-hasegawa | example6 | example8
  std::string name;
  FunctionExpr expr;
};

struct CatalogOptions {
  double p = 0.3;  // exponent for the t^p based constructions
  double a = 2.0;  // base point for the second and third constructions
};

std::vector<CatalogEntry> petz_hasegawa_family();
std::vector<CatalogEntry> example6_family(const CatalogOptions& opt = {});
std::vector<CatalogEntry> example8_family();
std::vector<CatalogEntry> examples_catalog(const CatalogOptions& opt = {});

/// (t-1)^2/((t^p-1)(t^(1-p)-1)) built as corollary5(t^p, 1).
FunctionExpr example6_first(double p);
/// corollary5 applied to the first function at base point a.
FunctionExpr example6_second(double p, double a);
/// corollary5(t^p + t^(1-p), a).
FunctionExpr example6_third(double p, double a);
/// power-product at p = (0.5, 0.7), q = (0.2), a = b = 1 (equality branch).
FunctionExpr example8_power_product();
/// sqrt-product at r = (0.5, 1.5), c = 1, s = (0.8, 1.8), d = 1.
FunctionExpr example8_sqrt_product();

}  // namespace omf
