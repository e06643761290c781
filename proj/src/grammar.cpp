#include "omf/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "omf/detail/format.hpp"
#include "omf/errors.hpp"

namespace omf {

using detail::format_number;

namespace {

struct Call;

struct Value {
  enum class Type { number, symbol, list, call };
  Type type = Type::number;
  double number = 0.0;
  std::string symbol;
  std::vector<Value> items;
  std::shared_ptr<Call> call;
  std::size_t pos = 0;
};

struct Call {
  std::string name;
  std::vector<Value> args;
  std::vector<std::pair<std::string, Value>> kwargs;
  std::size_t pos = 0;
};

Value number_value(double v) {
  Value x;
  x.number = v;
  return x;
}

Value symbol_value(std::string s) {
  Value x;
  x.type = Value::Type::symbol;
  x.symbol = std::move(s);
  return x;
}

Value list_value(const std::vector<double>& vs) {
  Value x;
  x.type = Value::Type::list;
  for (double v : vs) x.items.push_back(number_value(v));
  return x;
}

Value call_value(Call c) {
  Value x;
  x.type = Value::Type::call;
  x.call = std::make_shared<Call>(std::move(c));
  return x;
}

// --- reader ------------------------------------------------------------------

class Reader {
 public:
  explicit Reader(std::string_view text) : s_(text) {}

  Value read_top() {
    skip_space();
    if (at_end()) throw ParseError("empty expression", pos_);
    Value v = read_value();
    skip_space();
    if (!at_end()) throw ParseError("unexpected text after expression", pos_);
    if (v.type != Value::Type::call) throw ParseError("expected '('", v.pos);
    return v;
  }

 private:
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }

  void skip_space() {
    while (!at_end()) {
      if (std::isspace(static_cast<unsigned char>(peek()))) {
        ++pos_;
      } else if (peek() == ';') {
        while (!at_end() && peek() != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  static bool is_delim(char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '[' ||
           c == ']' || c == ':' || c == ';';
  }

  std::string_view read_atom() {
    const std::size_t start = pos_;
    while (!at_end() && !is_delim(peek())) ++pos_;
    return s_.substr(start, pos_ - start);
  }

  Value read_value() {
    skip_space();
    if (at_end()) throw ParseError("unexpected end of input", pos_);
    const std::size_t start = pos_;
    const char c = peek();
    if (c == '(') return read_call();
    if (c == '[') {
      ++pos_;
      Value list;
      list.type = Value::Type::list;
      list.pos = start;
      for (;;) {
        skip_space();
        if (at_end()) throw ParseError("unterminated list", start);
        if (peek() == ']') {
          ++pos_;
          return list;
        }
        list.items.push_back(read_value());
      }
    }
    if (c == ')' || c == ']') throw ParseError(std::string("unexpected '") + c + "'", pos_);
    if (c == ':') throw ParseError("keyword where a value was expected", pos_);
    const std::string_view atom = read_atom();
    Value v;
    v.pos = start;
    const char first = atom.front();
    if (std::isdigit(static_cast<unsigned char>(first)) || first == '-' || first == '+' ||
        first == '.') {
      const char* b = atom.data();
      const char* e = atom.data() + atom.size();
      if (first == '+') ++b;
      double d = 0.0;
      auto res = std::from_chars(b, e, d);
      if (res.ec != std::errc{} || res.ptr != e)
        throw ParseError("malformed number '" + std::string(atom) + "'", start);
      v.number = d;
      return v;
    }
    if (!std::isalpha(static_cast<unsigned char>(first)))
      throw ParseError("unexpected character '" + std::string(1, first) + "'", start);
    v.type = Value::Type::symbol;
    v.symbol = std::string(atom);
    return v;
  }

  Value read_call() {
    const std::size_t start = pos_;
    ++pos_;  // '('
    skip_space();
    if (at_end()) throw ParseError("unterminated expression", start);
    if (!std::isalpha(static_cast<unsigned char>(peek())))
      throw ParseError("expected constructor name", pos_);
    Call call;
    call.pos = start;
    call.name = std::string(read_atom());
    bool seen_kwarg = false;
    for (;;) {
      skip_space();
      if (at_end()) throw ParseError("unterminated expression '(" + call.name + "'", start);
      if (peek() == ')') {
        ++pos_;
        break;
      }
      if (peek() == ':') {
        const std::size_t kpos = pos_;
        ++pos_;
        const std::string key(read_atom());
        if (key.empty()) throw ParseError("empty keyword", kpos);
        for (const auto& kw : call.kwargs)
          if (kw.first == key) throw ParseError("duplicate keyword :" + key, kpos);
        call.kwargs.emplace_back(key, read_value());
        seen_kwarg = true;
        continue;
      }
      if (seen_kwarg) throw ParseError("positional argument after keyword arguments", pos_);
      call.args.push_back(read_value());
    }
    return call_value(std::move(call));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

// --- construction --------------------------------------------------------------

FunctionExpr construct(const Call& c, const ParseOptions& opt);

/// Positional scalar parameter names, in order.
std::vector<std::string_view> positional_names(std::string_view kind) {
  if (kind == "const") return {"c"};
  if (kind == "affine") return {"alpha", "beta"};
  if (kind == "power" || kind == "raw-power") return {"p"};
  if (kind == "petz-hasegawa") return {"a"};
  return {};
}

class Args {
 public:
  Args(const Call& c, const ParseOptions& opt) : c_(c), opt_(opt) {
    const auto names = positional_names(c.name);
    std::size_t next = 0;
    for (const Value& v : c.args) {
      if (v.type == Value::Type::call) {
        children_.push_back(construct(*v.call, opt));
      } else if (c.name == "poly" && v.type == Value::Type::number) {
        poly_.push_back(v.number);
      } else if (v.type == Value::Type::number && next < names.size()) {
        named_.emplace_back(std::string(names[next++]), v);
      } else {
        throw ParseError("arity mismatch: unexpected positional argument to " + c.name, v.pos);
      }
    }
    for (const auto& [k, v] : c.kwargs) {
      for (const auto& [k2, v2] : named_)
        if (k2 == k) throw ParseError("parameter " + k + " given twice", v.pos);
      named_.emplace_back(k, v);
    }
    used_.assign(named_.size(), false);
  }

  std::size_t child_count() const { return children_.size(); }
  const std::vector<FunctionExpr>& children() const { return children_; }
  const std::vector<double>& poly() const { return poly_; }

  void expect_children(std::size_t lo, std::size_t hi) const {
    if (children_.size() < lo || children_.size() > hi)
      throw ParseError("arity mismatch: " + c_.name + " expects " +
                           (lo == hi ? std::to_string(lo)
                                     : std::to_string(lo) + ".." +
                                           (hi == SIZE_MAX ? std::string("n") : std::to_string(hi))) +
                           " expression argument(s), got " + std::to_string(children_.size()),
                       c_.pos);
  }

  const Value* find(std::string_view key) {
    for (std::size_t i = 0; i < named_.size(); ++i)
      if (named_[i].first == key) {
        used_[i] = true;
        return &named_[i].second;
      }
    return nullptr;
  }

  double number(std::string_view key) {
    auto v = number_opt(key);
    if (!v) throw ParseError("missing parameter " + std::string(key) + " for " + c_.name, c_.pos);
    return *v;
  }

  std::optional<double> number_opt(std::string_view key) {
    const Value* v = find(key);
    if (!v) return std::nullopt;
    if (v->type != Value::Type::number)
      throw ParseError("parameter " + std::string(key) + " must be a number", v->pos);
    return v->number;
  }

  int integer(std::string_view key, std::optional<int> fallback = std::nullopt) {
    auto v = number_opt(key);
    if (!v) {
      if (fallback) return *fallback;
      throw ParseError("missing parameter " + std::string(key) + " for " + c_.name, c_.pos);
    }
    if (*v != std::round(*v) || std::abs(*v) > 1e9)
      throw ParseError("parameter " + std::string(key) + " must be an integer", find(key)->pos);
    return static_cast<int>(*v);
  }

  bool flag(std::string_view key) {
    auto v = number_opt(key);
    return v && *v != 0.0;
  }

  std::optional<std::string> symbol_opt(std::string_view key) {
    const Value* v = find(key);
    if (!v) return std::nullopt;
    if (v->type != Value::Type::symbol)
      throw ParseError("parameter " + std::string(key) + " must be a symbol", v->pos);
    return v->symbol;
  }

  /// A list of numbers; a bare number is read as a one-element list.
  std::optional<std::vector<double>> list_opt(std::string_view key) {
    const Value* v = find(key);
    if (!v) return std::nullopt;
    if (v->type == Value::Type::number) return std::vector<double>{v->number};
    if (v->type != Value::Type::list)
      throw ParseError("parameter " + std::string(key) + " must be a list of numbers", v->pos);
    std::vector<double> out;
    for (const Value& item : v->items) {
      if (item.type != Value::Type::number)
        throw ParseError("parameter " + std::string(key) + " must be a list of numbers", item.pos);
      out.push_back(item.number);
    }
    return out;
  }

  std::vector<double> list(std::string_view key) {
    auto v = list_opt(key);
    if (!v) throw ParseError("missing parameter " + std::string(key) + " for " + c_.name, c_.pos);
    return *v;
  }

  std::optional<std::vector<FunctionExpr>> expr_list_opt(std::string_view key) {
    const Value* v = find(key);
    if (!v) return std::nullopt;
    if (v->type != Value::Type::list)
      throw ParseError("parameter " + std::string(key) + " must be a list of expressions", v->pos);
    std::vector<FunctionExpr> out;
    for (const Value& item : v->items) {
      if (item.type != Value::Type::call)
        throw ParseError("parameter " + std::string(key) + " must be a list of expressions",
                         item.pos);
      out.push_back(construct(*item.call, opt_));
    }
    return out;
  }

  PickRepresentation::Atom atom(const Value& v) {
    if (v.type != Value::Type::list || v.items.size() != 2 ||
        v.items[0].type != Value::Type::number || v.items[1].type != Value::Type::number)
      throw ParseError("pick atom must be [lambda weight]", v.pos);
    return {v.items[0].number, v.items[1].number};
  }

  void finish() const {
    for (std::size_t i = 0; i < named_.size(); ++i)
      if (!used_[i])
        throw ParseError("unknown parameter " + named_[i].first + " for " + c_.name,
                         named_[i].second.pos);
  }

  GateOptions gate(bool node_unchecked) const {
    GateOptions g = opt_.gate;
    g.unchecked = g.unchecked || node_unchecked;
    return g;
  }

 private:
  const Call& c_;
  const ParseOptions& opt_;
  std::vector<FunctionExpr> children_;
  std::vector<double> poly_;
  std::vector<std::pair<std::string, Value>> named_;
  std::vector<bool> used_;
};

bool known_constructor(std::string_view n) {
  static constexpr std::string_view names[] = {
      "identity", "const", "affine", "power", "logmean", "pick", "sum", "sharp", "g1", "g2",
      "theorem1", "theorem4", "theorem7", "petz-hasegawa", "corollary5", "power-product",
      "sqrt-product", "geom-interp", "sharp-quotient", "power-subst", "raw-power", "poly",
      "product-power"};
  return std::find(std::begin(names), std::end(names), n) != std::end(names);
}

FunctionExpr construct(const Call& c, const ParseOptions& opt) {
  if (!known_constructor(c.name)) throw ParseError("unknown constructor '" + c.name + "'", c.pos);
  Args a(c, opt);
  const std::string& n = c.name;
  auto done = [&](FunctionExpr e) {
    a.finish();
    return e;
  };
  auto leaf = [&] { a.expect_children(0, 0); };
  auto unary = [&]() -> const FunctionExpr& {
    a.expect_children(1, 1);
    return a.children()[0];
  };

  if (n == "identity") {
    leaf();
    return done(make_identity());
  }
  if (n == "const") {
    leaf();
    return done(make_constant(a.number("c")));
  }
  if (n == "affine") {
    leaf();
    const double alpha = a.number("alpha");
    return done(make_affine(alpha, a.number("beta")));
  }
  if (n == "power") {
    leaf();
    return done(make_power(a.number("p")));
  }
  if (n == "logmean") {
    leaf();
    return done(make_log_mean());
  }
  if (n == "pick") {
    leaf();
    PickRepresentation rep;
    rep.f0 = a.number_opt("f0").value_or(0.0);
    rep.beta = a.number_opt("beta").value_or(0.0);
    if (const Value* atoms = a.find("atoms")) {
      if (atoms->type != Value::Type::list) throw ParseError("atoms must be a list", atoms->pos);
      for (const Value& v : atoms->items) rep.atoms.push_back(a.atom(v));
    }
    return done(make_pick_integral(rep));
  }
  if (n == "sum") {
    a.expect_children(1, SIZE_MAX);
    return done(make_sum(a.children()));
  }
  if (n == "sharp") return done(make_sharp(unary()));
  if (n == "g1") {
    const auto& f = unary();
    return done(make_prop2_g1(f, a.number("a")));
  }
  if (n == "g2") {
    const auto& f = unary();
    return done(make_prop2_g2(f, a.number("a")));
  }
  if (n == "theorem1") {
    const auto& f = unary();
    const double av = a.number("a");
    return done(make_theorem1_h(f, av, a.number("b")));
  }
  if (n == "theorem4") {
    a.expect_children(2, SIZE_MAX);
    const auto& ch = a.children();
    std::vector<FunctionExpr> gs(ch.begin() + 1, ch.end());
    const double av = a.number("a");
    const auto bs = a.list("b");
    const int variant = a.integer("variant", gs.size() == 1 ? 1 : 2);
    const bool unchecked = a.flag("unchecked");
    return done(make_theorem4(ch[0], gs, av, bs, variant, a.gate(unchecked)));
  }
  if (n == "theorem7") {
    std::vector<FunctionExpr> fs, gs;
    auto f_list = a.expr_list_opt("f");
    auto g_list = a.expr_list_opt("g");
    if (f_list || g_list) {
      a.expect_children(0, 0);
      if (!f_list || !g_list) throw ParseError("theorem7 needs both :f and :g", c.pos);
      fs = std::move(*f_list);
      gs = std::move(*g_list);
    } else {
      a.expect_children(2, SIZE_MAX);
      const int m = a.integer("m");
      if (m < 1 || static_cast<std::size_t>(m) >= a.child_count())
        throw ParseError("theorem7: :m must split the expression arguments into f's and g's", c.pos);
      const auto& ch = a.children();
      fs.assign(ch.begin(), ch.begin() + m);
      gs.assign(ch.begin() + m, ch.end());
    }
    const auto as = a.list("a");
    const auto bs = a.list("b");
    ProductCondition cond = ProductCondition::arg_bound;
    if (auto s = a.symbol_opt("condition")) {
      if (*s == "arg-bound") {
        cond = ProductCondition::arg_bound;
      } else if (*s == "boundary") {
        cond = ProductCondition::boundary_nonvanishing;
      } else {
        throw ParseError("theorem7: condition must be arg-bound or boundary", c.pos);
      }
    }
    const bool unchecked = a.flag("unchecked");
    return done(make_theorem7(fs, gs, as, bs, cond, a.gate(unchecked)));
  }
  if (n == "petz-hasegawa") {
    leaf();
    return done(make_petz_hasegawa(a.number("a")));
  }
  if (n == "corollary5") {
    const auto& f = unary();
    return done(make_corollary5(f, a.number("a")));
  }
  if (n == "power-product") {
    leaf();
    const auto ps = a.list("p");
    const auto qs = a.list("q");
    const auto as = a.list_opt("a").value_or(std::vector<double>(ps.size(), 1.0));
    const auto bs = a.list_opt("b").value_or(std::vector<double>(qs.size(), 1.0));
    return done(make_power_product(ps, qs, as, bs));
  }
  if (n == "sqrt-product") {
    leaf();
    const auto rs = a.list("r");
    const auto ss = a.list("s");
    const int cc = a.integer("c");
    return done(make_sqrt_product(rs, ss, cc, a.integer("d")));
  }
  if (n == "geom-interp") {
    a.expect_children(2, 2);
    const double p = a.number("p");
    ExponentReading reading = ExponentReading::printed;
    if (auto s = a.symbol_opt("reading")) {
      if (*s == "printed") {
        reading = ExponentReading::printed;
      } else if (*s == "weighted") {
        reading = ExponentReading::weighted;
      } else {
        throw ParseError("geom-interp: reading must be printed or weighted", c.pos);
      }
    }
    const bool unchecked = a.flag("unchecked");
    return done(make_geom_interp(a.children()[0], a.children()[1], p, reading, a.gate(unchecked)));
  }
  if (n == "sharp-quotient") {
    const auto& h = unary();
    return done(make_sharp_quotient(h, a.gate(false)));
  }
  if (n == "power-subst") {
    const auto& f = unary();
    return done(make_power_subst(f, a.number("p")));
  }
  if (n == "raw-power" || n == "poly" || n == "product-power") {
    if (!opt.allow_test_only)
      throw ParseError("test-only constructor " + n + " requires --unchecked", c.pos);
    if (n == "raw-power") {
      leaf();
      return done(make_raw_power(a.number("p")));
    }
    if (n == "poly") {
      leaf();
      std::vector<double> coeffs = a.poly();
      if (auto l = a.list_opt("coeffs")) coeffs = *l;
      return done(make_polynomial(coeffs));
    }
    a.expect_children(0, SIZE_MAX);
    const auto es = a.list("e");
    const double k = a.number_opt("k").value_or(0.0);
    return done(make_product_power(a.children(), es, k));
  }
  throw ParseError("unknown constructor '" + n + "'", c.pos);
}

// --- canonical call form of a node ---------------------------------------------

Call to_call(const FunctionExpr& e) {
  Call c;
  c.name = std::string(kind_name(e.kind()));
  auto kw = [&](std::string key, Value v) { c.kwargs.emplace_back(std::move(key), std::move(v)); };
  auto num = [&](std::string key, double v) { kw(std::move(key), number_value(v)); };
  auto lst = [&](std::string key, const std::vector<double>& v) { kw(std::move(key), list_value(v)); };
  for (const auto& ch : e.children()) c.args.push_back(call_value(to_call(ch)));

  switch (e.kind()) {
    case Kind::identity:
    case Kind::log_mean:
    case Kind::sum:
    case Kind::sharp:
    case Kind::sharp_quotient:
      break;
    case Kind::constant:
      num("c", e.as<node::Constant>().c);
      break;
    case Kind::affine:
      num("alpha", e.as<node::Affine>().alpha);
      num("beta", e.as<node::Affine>().beta);
      break;
    case Kind::power:
      num("p", e.as<node::Power>().p);
      break;
    case Kind::pick: {
      const auto& rep = e.as<node::Pick>().rep;
      num("f0", rep.f0);
      num("beta", rep.beta);
      Value atoms;
      atoms.type = Value::Type::list;
      for (const auto& at : rep.atoms) atoms.items.push_back(list_value({at.lambda, at.weight}));
      kw("atoms", atoms);
      break;
    }
    case Kind::g1:
      num("a", e.as<node::G1>().a);
      break;
    case Kind::g2:
      num("a", e.as<node::G2>().a);
      break;
    case Kind::theorem1:
      num("a", e.as<node::Theorem1>().a);
      num("b", e.as<node::Theorem1>().b);
      break;
    case Kind::theorem4: {
      const auto& n = e.as<node::Theorem4>();
      num("a", n.a);
      lst("b", n.b);
      num("variant", n.variant);
      if (n.unchecked) num("unchecked", 1);
      break;
    }
    case Kind::theorem7: {
      const auto& n = e.as<node::Theorem7>();
      num("m", static_cast<double>(n.m));
      lst("a", n.a);
      lst("b", n.b);
      kw("condition", symbol_value(n.condition == ProductCondition::arg_bound ? "arg-bound"
                                                                              : "boundary"));
      if (n.unchecked) num("unchecked", 1);
      break;
    }
    case Kind::petz_hasegawa:
      num("a", e.as<node::PetzHasegawa>().a);
      break;
    case Kind::corollary5:
      num("a", e.as<node::Corollary5>().a);
      break;
    case Kind::power_product: {
      const auto& n = e.as<node::PowerProduct>();
      lst("p", n.p);
      lst("q", n.q);
      lst("a", n.a);
      lst("b", n.b);
      break;
    }
    case Kind::sqrt_product: {
      const auto& n = e.as<node::SqrtProduct>();
      lst("r", n.r);
      lst("s", n.s);
      num("c", n.c);
      num("d", n.d);
      break;
    }
    case Kind::geom_interp: {
      const auto& n = e.as<node::GeomInterp>();
      num("p", n.p);
      kw("reading", symbol_value(n.reading == ExponentReading::printed ? "printed" : "weighted"));
      if (n.unchecked) num("unchecked", 1);
      break;
    }
    case Kind::power_subst:
      num("p", e.as<node::PowerSubst>().p);
      break;
    case Kind::raw_power:
      num("p", e.as<node::RawPower>().p);
      break;
    case Kind::polynomial:
      lst("coeffs", e.as<node::Polynomial>().coeffs);
      break;
    case Kind::product_power: {
      const auto& n = e.as<node::ProductPower>();
      lst("e", n.exponents);
      num("k", n.t_exponent);
      break;
    }
  }
  return c;
}

void write_value(std::string& out, const Value& v);

void write_call(std::string& out, const Call& c) {
  out += '(';
  out += c.name;
  const auto names = positional_names(c.name);
  std::vector<bool> positional(c.kwargs.size(), false);
  for (std::string_view name : names)
    for (std::size_t i = 0; i < c.kwargs.size(); ++i)
      if (c.kwargs[i].first == name) {
        positional[i] = true;
        out += ' ';
        write_value(out, c.kwargs[i].second);
      }
  for (const Value& v : c.args) {
    out += ' ';
    write_value(out, v);
  }
  for (std::size_t i = 0; i < c.kwargs.size(); ++i) {
    if (positional[i]) continue;
    out += " :";
    out += c.kwargs[i].first;
    out += ' ';
    write_value(out, c.kwargs[i].second);
  }
  out += ')';
}

void write_value(std::string& out, const Value& v) {
  switch (v.type) {
    case Value::Type::number:
      out += format_number(v.number);
      break;
    case Value::Type::symbol:
      out += v.symbol;
      break;
    case Value::Type::list:
      out += '[';
      for (std::size_t i = 0; i < v.items.size(); ++i) {
        if (i) out += ' ';
        write_value(out, v.items[i]);
      }
      out += ']';
      break;
    case Value::Type::call:
      write_call(out, *v.call);
      break;
  }
}

// --- JSON ------------------------------------------------------------------------

nlohmann::json value_to_json(const Value& v) {
  switch (v.type) {
    case Value::Type::number:
      return v.number;
    case Value::Type::symbol:
      return v.symbol;
    case Value::Type::list: {
      nlohmann::json arr = nlohmann::json::array();
      for (const Value& item : v.items) arr.push_back(value_to_json(item));
      return arr;
    }
    case Value::Type::call:
      break;
  }
  throw Error("expression-valued parameter in JSON conversion");
}

Call call_from_json(const nlohmann::json& j);

Value value_from_json(const nlohmann::json& j) {
  if (j.is_number()) return number_value(j.get<double>());
  if (j.is_boolean()) return number_value(j.get<bool>() ? 1.0 : 0.0);
  if (j.is_string()) return symbol_value(j.get<std::string>());
  if (j.is_array()) {
    Value v;
    v.type = Value::Type::list;
    for (const auto& item : j) v.items.push_back(value_from_json(item));
    return v;
  }
  if (j.is_object()) return call_value(call_from_json(j));
  throw ParseError("unsupported JSON parameter value", 0);
}

Call call_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw ParseError("JSON expression needs a string \"kind\"", 0);
  Call c;
  c.name = j["kind"].get<std::string>();
  if (j.contains("children")) {
    if (!j["children"].is_array()) throw ParseError("\"children\" must be an array", 0);
    for (const auto& ch : j["children"]) c.args.push_back(call_value(call_from_json(ch)));
  }
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw ParseError("\"params\" must be an object", 0);
    for (const auto& [k, v] : j["params"].items()) c.kwargs.emplace_back(k, value_from_json(v));
  }
  for (const auto& [k, v] : j.items())
    if (k != "kind" && k != "children" && k != "params")
      throw ParseError("unknown JSON field \"" + k + "\"", 0);
  return c;
}

nlohmann::json call_to_json(const Call& c) {
  nlohmann::json j;
  j["kind"] = c.name;
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : c.kwargs) params[k] = value_to_json(v);
  j["params"] = params;
  nlohmann::json children = nlohmann::json::array();
  for (const Value& v : c.args) children.push_back(call_to_json(*v.call));
  j["children"] = children;
  return j;
}

nlohmann::json number_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

FunctionExpr parse(std::string_view text, const ParseOptions& opt) {
  Reader reader(text);
  const Value v = reader.read_top();
  return construct(*v.call, opt);
}

std::string serialize(const FunctionExpr& e) {
  std::string out;
  write_call(out, to_call(e));
  return out;
}

nlohmann::json to_json(const FunctionExpr& e) { return call_to_json(to_call(e)); }

FunctionExpr expr_from_json(const nlohmann::json& j, const ParseOptions& opt) {
  return construct(call_from_json(j), opt);
}

nlohmann::json to_json(const VerificationReport& r) {
  nlohmann::json j;
  j["test"] = r.test;
  j["verdict"] = to_string(r.verdict);
  j["margin"] = number_json(r.margin);
  if (r.witness) {
    nlohmann::json w = nlohmann::json::object();
    for (const auto& [k, vs] : r.witness->fields) {
      nlohmann::json arr = nlohmann::json::array();
      for (double v : vs) arr.push_back(number_json(v));
      w[k] = arr;
    }
    j["witness"] = w;
  } else {
    j["witness"] = nullptr;
  }
  j["samples"] = r.samples;
  j["inconclusive"] = r.inconclusive;
  nlohmann::json tol = nlohmann::json::object();
  for (const auto& [k, v] : r.tolerances) tol[k] = number_json(v);
  j["tolerances"] = tol;
  j["seed"] = r.seed;
  j["notes"] = r.notes;
  nlohmann::json subs = nlohmann::json::array();
  for (const auto& s : r.sub_reports) subs.push_back(to_json(s));
  j["sub_reports"] = subs;
  return j;
}

}  // namespace omf
