#pragma once

// Text and JSON forms of expression trees.
//
//   expr   := "(" NAME arg* kwarg* ")"
//   kwarg  := ":" KEY value
//   value  := number | symbol | expr | "[" value* "]"
//
// Scalar parameters may be written positionally where the form has a
// natural order, e.g. (power 0.5), (affine 0.5 0.5), (petz-hasegawa 0.5).

#include <string>
#include <string_view>

#include "json.hpp"
#include "omf/expr.hpp"

namespace omf {

struct ParseOptions {
  /// Accept raw-power, poly and product-power.
  bool allow_test_only = false;
  /// Grid and escape hatch for constructors with numerical gates.
  GateOptions gate{};
};

FunctionExpr parse(std::string_view text, const ParseOptions& opt = {});
std::string serialize(const FunctionExpr& e);

/// {"kind": name, "params": {...}, "children": [...]}
nlohmann::json to_json(const FunctionExpr& e);
FunctionExpr expr_from_json(const nlohmann::json& j, const ParseOptions& opt = {});

nlohmann::json to_json(const VerificationReport& r);

}  // namespace omf
