#include "omf/catalog.hpp"

#include <algorithm>
#include <cmath>

#include "omf/detail/format.hpp"

namespace omf {

using detail::format_number;

FunctionExpr example6_first(double p) { return make_corollary5(make_power(p), 1.0); }

FunctionExpr example6_second(double p, double a) {
  return make_corollary5(example6_first(p), a);
}

FunctionExpr example6_third(double p, double a) {
  return make_corollary5(make_sum({make_power(p), make_power(1.0 - p)}), a);
}

FunctionExpr example8_power_product() {
  return make_power_product({0.5, 0.7}, {0.2}, {1.0, 1.0}, {1.0});
}

FunctionExpr example8_sqrt_product() { return make_sqrt_product({0.5, 1.5}, {0.8, 1.8}, 1, 1); }

std::vector<CatalogEntry> petz_hasegawa_family() {
  std::vector<CatalogEntry> out;
  std::vector<double> as;
  for (int k = 0; k < 15; ++k) as.push_back(std::round((-0.9 + 0.2 * k) * 10.0) / 10.0);
  as.push_back(0.0);
  as.push_back(1.0);
  std::sort(as.begin(), as.end());
  for (double a : as)
    out.push_back({"petz-hasegawa", "petz-hasegawa a=" + format_number(a), make_petz_hasegawa(a)});
  return out;
}

std::vector<CatalogEntry> example6_family(const CatalogOptions& opt) {
  const std::string suffix = " p=" + format_number(opt.p);
  const std::string with_a = suffix + " a=" + format_number(opt.a);
  return {
      {"example6", "ex6-1" + suffix, example6_first(opt.p)},
      {"example6", "ex6-2" + with_a, example6_second(opt.p, opt.a)},
      {"example6", "ex6-3" + with_a, example6_third(opt.p, opt.a)},
  };
}

std::vector<CatalogEntry> example8_family() {
  return {
      {"example8", "power-product p=[0.5 0.7] q=[0.2]", example8_power_product()},
      {"example8", "sqrt-product r=[0.5 1.5] s=[0.8 1.8] c=1 d=1", example8_sqrt_product()},
  };
}

std::vector<CatalogEntry> examples_catalog(const CatalogOptions& opt) {
  std::vector<CatalogEntry> out = petz_hasegawa_family();
  for (auto& e : example6_family(opt)) out.push_back(std::move(e));
  for (auto& e : example8_family()) out.push_back(std::move(e));
  return out;
}

}  // namespace omf
