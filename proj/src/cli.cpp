#include "omf/cli.hpp"

#include <algorithm>
#include <complex>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "omf/catalog.hpp"
#include "omf/detail/format.hpp"
#include "omf/errors.hpp"
#include "omf/eval.hpp"
#include "omf/grammar.hpp"
#include "omf/metrics.hpp"
#include "omf/verify.hpp"

namespace omf {
namespace {

using nlohmann::json;
using detail::format_number;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Settings {
  GridSpec grid;
  std::string hp_grid;
  std::string dims;
  std::string out_path;
  std::string format;
  std::string file;
  std::string expr_text;
  bool unchecked = false;
  bool serial = false;
};

int exit_for(Verdict v) {
  switch (v) {
    case Verdict::pass: return exit_pass;
    case Verdict::fail: return exit_fail;
    case Verdict::inconclusive: return exit_inconclusive;
  }
  return exit_usage;
}

Verdict worst(Verdict a, Verdict b) {
  auto rank = [](Verdict v) { return v == Verdict::fail ? 2 : v == Verdict::inconclusive ? 1 : 0; };
  return rank(a) >= rank(b) ? a : b;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// JSON given inline or as @path.
json read_json(const std::string& text, const char* what) {
  const std::string body = !text.empty() && text[0] == '@' ? read_file(text.substr(1)) : text;
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    throw UsageError(std::string(what) + ": invalid JSON: " + e.what());
  }
}

std::size_t parse_count(const std::string& s, const char* what) {
  std::size_t pos = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size() || v == 0)
    throw UsageError(std::string(what) + ": expected a positive integer, got '" + s + "'");
  return v;
}

void apply_grid_strings(Settings& s) {
  if (!s.hp_grid.empty()) {
    const auto x = s.hp_grid.find_first_of("xX");
    if (x == std::string::npos) throw UsageError("--hp-grid: expected MxN, got '" + s.hp_grid + "'");
    s.grid.hp_moduli = parse_count(s.hp_grid.substr(0, x), "--hp-grid");
    s.grid.hp_args = parse_count(s.hp_grid.substr(x + 1), "--hp-grid");
  }
  if (!s.dims.empty()) {
    s.grid.dims.clear();
    std::stringstream ss(s.dims);
    std::string item;
    while (std::getline(ss, item, ',')) s.grid.dims.push_back(parse_count(item, "--dims"));
    if (s.grid.dims.empty()) throw UsageError("--dims: empty list");
  }
  if (!(s.grid.t_min > 0.0) || !(s.grid.t_max > s.grid.t_min))
    throw UsageError("grid range must satisfy 0 < --grid-min < --grid-max");
  if (s.grid.t_points < 2) throw UsageError("--grid-points must be at least 2");
  if (s.serial) s.grid.policy = ExecPolicy::serial;
}

ParseOptions parse_options(const Settings& s) {
  ParseOptions opt;
  opt.allow_test_only = s.unchecked;
  opt.gate.grid = s.grid;
  opt.gate.unchecked = s.unchecked;
  return opt;
}

FunctionExpr load_expr(const Settings& s) {
  if (!s.file.empty() && !s.expr_text.empty())
    throw UsageError("give either an expression or --file, not both");
  if (s.file.empty() && s.expr_text.empty()) throw UsageError("missing expression");
  const std::string text = s.file.empty() ? s.expr_text : read_file(s.file);
  return parse(text, parse_options(s));
}

std::string format_or(const Settings& s, const char* fallback) {
  const std::string f = s.format.empty() ? fallback : s.format;
  if (f != "json" && f != "csv" && f != "text")
    throw UsageError("--format: expected json, csv or text, got '" + f + "'");
  return f;
}

void emit(const Settings& s, std::ostream& out, const std::string& text) {
  if (s.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(s.out_path, std::ios::binary);
  if (!file) throw UsageError("cannot write " + s.out_path);
  file << text;
}

void report_rows(const VerificationReport& r, const std::string& prefix, std::ostream& os) {
  const std::string name = prefix.empty() ? r.test : prefix + "/" + r.test;
  os << name << ',' << to_string(r.verdict) << ',' << format_number(r.margin) << ',' << r.samples
     << ',' << r.inconclusive << ',' << r.seed << '\n';
  for (const auto& sub : r.sub_reports) report_rows(sub, name, os);
}

int emit_report(const Settings& s, std::ostream& out, const VerificationReport& r) {
  const std::string f = format_or(s, "json");
  if (f == "csv") {
    std::ostringstream os;
    os << "test,verdict,margin,samples,inconclusive,seed\n";
    report_rows(r, "", os);
    emit(s, out, os.str());
  } else {
    emit(s, out, to_json(r).dump(2) + "\n");
  }
  return exit_for(r.verdict);
}

// Matrices as row-major JSON, complex entries as [re, im].
std::complex<double> json_entry(const json& v, bool& complex_seen) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    complex_seen = true;
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw UsageError("matrix entries must be numbers or [re, im] pairs");
}

HermitianMatrix json_hermitian(const json& j, const char* what, bool* complex_out = nullptr) {
  if (!j.is_array() || j.empty()) throw UsageError(std::string(what) + ": expected a square matrix");
  const std::size_t n = j.size();
  ComplexMatrix m(n, n);
  bool complex_seen = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != n)
      throw UsageError(std::string(what) + ": expected a square matrix");
    for (std::size_t k = 0; k < n; ++k) m(i, k) = json_entry(j[i][k], complex_seen);
  }
  double asym = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) asym = std::max(asym, std::abs(m(i, k) - std::conj(m(k, i))));
  if (asym > 1e-12 * (1.0 + frobenius_norm(m)))
    throw UsageError(std::string(what) + ": matrix is not Hermitian");
  if (complex_out) *complex_out = complex_seen;
  return HermitianMatrix::from_dense(m);
}

json matrix_json(const HermitianMatrix& a, bool complex_entries) {
  json rows = json::array();
  for (std::size_t i = 0; i < a.dim(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < a.dim(); ++k) {
      const auto v = a.get(i, k);
      if (complex_entries)
        row.push_back(json::array({v.real(), v.imag()}));
      else
        row.push_back(v.real());
    }
    rows.push_back(row);
  }
  return rows;
}

int cmd_eval(const Settings& s, const std::vector<double>& points, std::ostream& out) {
  const FunctionExpr e = load_expr(s);
  const std::vector<double> ts = points.empty() ? real_grid(s.grid) : points;
  const std::vector<double> fs = eval_real_batch(e, ts, s.grid.eval, s.grid.policy);
  if (format_or(s, "csv") == "json") {
    emit(s, out, json{{"expr", serialize(e)}, {"t", ts}, {"f_t", fs}}.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << "t,f_t\n";
    for (std::size_t i = 0; i < ts.size(); ++i)
      os << format_number(ts[i]) << ',' << format_number(fs[i]) << '\n';
    emit(s, out, os.str());
  }
  return exit_pass;
}

std::complex<double> parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) return {std::stod(text), 0.0};
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw UsageError("--z: expected RE,IM, got '" + text + "'");
  }
}

int cmd_eval_complex(const Settings& s, const std::vector<std::string>& zs, std::ostream& out) {
  const FunctionExpr e = load_expr(s);
  std::vector<std::complex<double>> points;
  for (const auto& z : zs) points.push_back(parse_complex(z));
  if (points.empty()) points = half_plane_grid(s.grid);
  std::vector<std::complex<double>> ws(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) ws[i] = eval_complex(e, points[i], s.grid.eval);
  if (format_or(s, "csv") == "json") {
    json rows = json::array();
    for (std::size_t i = 0; i < points.size(); ++i)
      rows.push_back({{"z", {points[i].real(), points[i].imag()}},
                      {"f_z", {ws[i].real(), ws[i].imag()}},
                      {"arg", std::arg(ws[i])}});
    emit(s, out, json{{"expr", serialize(e)}, {"samples", rows}}.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << "re,im,f_re,f_im,arg\n";
    for (std::size_t i = 0; i < points.size(); ++i)
      os << format_number(points[i].real()) << ',' << format_number(points[i].imag()) << ','
         << format_number(ws[i].real()) << ',' << format_number(ws[i].imag()) << ','
         << format_number(std::arg(ws[i])) << '\n';
    emit(s, out, os.str());
  }
  return exit_pass;
}

int cmd_eval_matrix(const Settings& s, const std::string& matrix, std::ostream& out) {
  if (matrix.empty()) throw UsageError("eval-matrix needs --matrix");
  const FunctionExpr e = load_expr(s);
  bool complex_entries = false;
  const HermitianMatrix a = json_hermitian(read_json(matrix, "--matrix"), "--matrix", &complex_entries);
  const HermitianMatrix fa = eval_matrix(e, a, s.grid.eval);
  if (format_or(s, "json") == "csv") {
    std::ostringstream os;
    for (std::size_t i = 0; i < fa.dim(); ++i) {
      for (std::size_t k = 0; k < fa.dim(); ++k) {
        if (k) os << ',';
        const auto v = fa.get(i, k);
        os << format_number(v.real());
        if (complex_entries) os << (v.imag() < 0 ? "" : "+") << format_number(v.imag()) << 'i';
      }
      os << '\n';
    }
    emit(s, out, os.str());
  } else {
    emit(s, out, json{{"expr", serialize(e)}, {"matrix", matrix_json(fa, complex_entries)}}.dump(2) + "\n");
  }
  return exit_pass;
}

int cmd_lemma3(const Settings& s, const std::string& ns, std::size_t theta_count, std::size_t l_count,
               std::ostream& out) {
  VerificationReport all;
  all.test = "lemma3";
  all.margin = std::numeric_limits<double>::infinity();
  std::stringstream ss(ns);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::size_t n = parse_count(item, "--n");
    if (n < 2) throw UsageError("--n: values must be at least 2");
    VerificationReport r = lemma3_check(static_cast<int>(n), theta_count, l_count);
    all.verdict = worst(all.verdict, r.verdict);
    all.margin = std::min(all.margin, r.margin);
    all.samples += r.samples;
    all.inconclusive += r.inconclusive;
    all.sub_reports.push_back(std::move(r));
  }
  if (all.sub_reports.empty()) throw UsageError("--n: empty list");
  return emit_report(s, out, all);
}

int cmd_metric(const Settings& s, const std::string& rho, const std::string& a, const std::string& b,
               bool normalize, std::ostream& out) {
  if (rho.empty() || a.empty()) throw UsageError("metric needs --rho and --a");
  const FunctionExpr e = load_expr(s);
  MetricOptions opt;
  opt.normalize = normalize;
  opt.grid = s.grid;
  const DensityMatrix state(json_hermitian(read_json(rho, "--rho"), "--rho"));
  const MetricContext ctx = MetricContext::create(e, state, opt);
  const HermitianMatrix ha = json_hermitian(read_json(a, "--a"), "--a");
  const HermitianMatrix hb = b.empty() ? ha : json_hermitian(read_json(b, "--b"), "--b");
  const double k = metric_form(ctx, ha, hb);
  json checks{{"symmetry", to_string(ctx.symmetry_report().verdict)},
              {"symmetry_margin", ctx.symmetry_report().margin},
              {"normalization_scale", ctx.scale()},
              {"min_eigenvalue", opt.min_eigenvalue},
              {"traceless", true}};
  emit(s, out, json{{"K", k}, {"lambda", ctx.eigenvalues()}, {"checks", checks}}.dump(2) + "\n");
  return exit_pass;
}

std::string csv_quote(const std::string& s) {
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

int cmd_examples(const Settings& s, const std::string& family, bool list, bool do_certify,
                 const CatalogOptions& copt, std::ostream& out) {
  std::vector<CatalogEntry> entries;
  if (family == "all")
    entries = examples_catalog(copt);
  else if (family == "petz-hasegawa")
    entries = petz_hasegawa_family();
  else if (family == "example6")
    entries = example6_family(copt);
  else if (family == "example8")
    entries = example8_family();
  else
    throw UsageError("--family: expected all, petz-hasegawa, example6 or example8, got '" + family + "'");

  if (list) {
    std::ostringstream os;
    os << "family,name,expr\n";
    for (const auto& c : entries)
      os << c.family << ',' << csv_quote(c.name) << ',' << csv_quote(serialize(c.expr)) << '\n';
    emit(s, out, os.str());
    return exit_pass;
  }

  if (do_certify) {
    json rows = json::array();
    Verdict v = Verdict::pass;
    for (const auto& c : entries) {
      const VerificationReport r = certify(c.expr, s.grid);
      v = worst(v, r.verdict);
      rows.push_back({{"family", c.family}, {"name", c.name}, {"expr", serialize(c.expr)}, {"report", to_json(r)}});
    }
    emit(s, out, rows.dump(2) + "\n");
    return exit_for(v);
  }

  const std::vector<double> ts = real_grid(s.grid);
  std::vector<std::vector<double>> columns;
  for (const auto& c : entries) columns.push_back(eval_real_batch(c.expr, ts, s.grid.eval, s.grid.policy));
  std::ostringstream os;
  os << 't';
  for (const auto& c : entries) os << ',' << csv_quote(c.name);
  os << '\n';
  for (std::size_t i = 0; i < ts.size(); ++i) {
    os << format_number(ts[i]);
    for (const auto& col : columns) os << ',' << format_number(col[i]);
    os << '\n';
  }
  emit(s, out, os.str());
  return exit_pass;
}

int cmd_parse(const Settings& s, std::ostream& out) {
  const FunctionExpr e = load_expr(s);
  if (format_or(s, "text") == "json")
    emit(s, out, to_json(e).dump(2) + "\n");
  else
    emit(s, out, serialize(e) + "\n");
  return exit_pass;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Settings s;
  CLI::App app{"Construct, evaluate and verify operator monotone functions.\n"
               "Exit codes: 0 pass, 1 fail, 2 inconclusive, 3 usage or construction error.\n"
               "The default seed is 42, or the value of the OMF_SEED environment variable.",
               "omf"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();

  try {
    s.grid.seed = default_seed();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }

  GridSpec& g = s.grid;
  app.add_option("--grid-min", g.t_min, "Lower end of the real grid");
  app.add_option("--grid-max", g.t_max, "Upper end of the real grid");
  app.add_option("--grid-points", g.t_points, "Number of real grid points");
  app.add_option("--hp-grid", s.hp_grid, "Half-plane grid as MODULIxARGS, default 40x40");
  app.add_option("--loewner-sets", g.loewner_sets, "Random Loewner point sets");
  app.add_option("--loewner-size", g.loewner_max_size, "Largest Loewner matrix");
  app.add_option("--trials", g.trials, "Random A <= B pairs per dimension");
  app.add_option("--dims", s.dims, "Matrix dimensions, e.g. 2,3,4 (default 2,3,4,5,6)");
  app.add_option("--tol", g.tol, "PSD tolerance on normalized margins");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--out", s.out_path, "Write output to PATH instead of stdout");
  app.add_option("--format", s.format, "json, csv or text (default depends on the command)");
  app.add_option("--file", s.file, "Read the expression from a file");
  app.add_flag("--unchecked", s.unchecked, "Skip numerical gates and allow test-only forms");
  app.add_flag("--serial", s.serial, "Run verifiers on one thread");

  auto with_expr = [&](CLI::App* sub) {
    sub->add_option("expr", s.expr_text, "Expression, e.g. \"(petz-hasegawa 0.5)\"");
    return sub;
  };

  std::vector<double> t_points;
  auto* eval = with_expr(app.add_subcommand("eval", "Evaluate on the real grid or given points (CSV t,f_t)"));
  eval->add_option("--t", t_points, "Points, comma separated")->delimiter(',');

  std::vector<std::string> z_points;
  auto* eval_c = with_expr(app.add_subcommand("eval-complex", "Evaluate on the half-plane grid or given points"));
  eval_c->add_option("--z", z_points, "Point RE,IM (repeatable)");

  std::string matrix;
  auto* eval_m = with_expr(app.add_subcommand("eval-matrix", "Evaluate on a Hermitian matrix"));
  eval_m->add_option("--matrix", matrix, "JSON matrix or @path, complex entries as [re, im]");

  auto* verify = with_expr(app.add_subcommand("verify", "Run every applicable verifier (JSON report)"));
  auto* loewner = with_expr(app.add_subcommand("loewner", "Loewner matrix test"));
  auto* pick = with_expr(app.add_subcommand("pick", "Upper half-plane argument test"));
  auto* arg_dom = with_expr(app.add_subcommand("arg-dominance", "0 < arg f(z) <= arg z on the half-plane grid"));
  auto* monotone = with_expr(app.add_subcommand("monotone", "Random A <= B matrix test"));
  auto* symmetry = with_expr(app.add_subcommand("symmetry", "Functional equation h(t) = t h(1/t)"));

  std::string lemma_n = "2,3,4,5,6";
  std::size_t theta_count = 100, l_count = 50;
  auto* lemma3 = app.add_subcommand("lemma3", "Argument inequality for z - l with sharpness check");
  lemma3->add_option("--n", lemma_n, "Values of n, comma separated");
  lemma3->add_option("--theta-count", theta_count, "Arguments per n");
  lemma3->add_option("--l-count", l_count, "Shifts per argument");

  std::string rho, ma, mb;
  bool normalize = false;
  auto* metric = with_expr(app.add_subcommand("metric", "Monotone metric K(A, B) at rho (JSON {K, lambda, checks})"));
  metric->add_option("--rho", rho, "Density matrix, JSON or @path");
  metric->add_option("--a", ma, "Traceless Hermitian A, JSON or @path");
  metric->add_option("--b", mb, "Traceless Hermitian B (default A)");
  metric->add_flag("--normalize", normalize, "Divide by f(1) when f(1) != 1");

  std::string family = "all";
  bool list = false, do_certify = false;
  CatalogOptions copt;
  auto* examples = app.add_subcommand("examples", "Built-in example functions as a CSV table t,<name>...");
  examples->add_option("--family", family, "all, petz-hasegawa, example6 or example8");
  examples->add_flag("--list", list, "List names and expressions");
  examples->add_flag("--certify", do_certify, "Certify every entry (JSON)");
  examples->add_option("--p", copt.p, "Exponent of t^p in the example6 family");
  examples->add_option("--a", copt.a, "Base point of the example6 family");

  auto* parse_cmd = with_expr(app.add_subcommand("parse", "Parse and print the canonical form (text or json)"));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_pass : exit_usage;
  }

  try {
    apply_grid_strings(s);
    if (eval->parsed()) return cmd_eval(s, t_points, out);
    if (eval_c->parsed()) return cmd_eval_complex(s, z_points, out);
    if (eval_m->parsed()) return cmd_eval_matrix(s, matrix, out);
    if (verify->parsed()) return emit_report(s, out, certify(load_expr(s), s.grid));
    if (loewner->parsed()) return emit_report(s, out, loewner_test(load_expr(s), s.grid));
    if (pick->parsed()) return emit_report(s, out, pick_test(load_expr(s), s.grid));
    if (arg_dom->parsed()) return emit_report(s, out, arg_dominance_test(load_expr(s), s.grid));
    if (monotone->parsed()) return emit_report(s, out, matrix_monotone_test(load_expr(s), s.grid));
    if (symmetry->parsed()) return emit_report(s, out, symmetry_test(load_expr(s), s.grid));
    if (lemma3->parsed()) return cmd_lemma3(s, lemma_n, theta_count, l_count, out);
    if (metric->parsed()) return cmd_metric(s, rho, ma, mb, normalize, out);
    if (examples->parsed()) return cmd_examples(s, family, list, do_certify, copt, out);
    if (parse_cmd->parsed()) return cmd_parse(s, out);
  } catch (const GateError& e) {
    err << "error: " << e.what() << '\n';
    err << to_json(e.report()).dump(2) << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
  return exit_usage;
}

}  // namespace omf
