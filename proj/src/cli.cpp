#include "mvseries/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mvseries/errors.hpp"
#include "mvseries/extremal.hpp"
#include "mvseries/series.hpp"
#include "mvseries/series_io.hpp"
#include "mvseries/verify.hpp"

namespace mvseries {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw ValidationError("bad coordinate \"" + std::string(whole) + "\" in --point");
  return negative ? -v : v;
}

Scalar parse_coordinate(std::string_view tok) {
  tok = trim(tok);
  if (tok.empty()) throw ValidationError("empty coordinate in --point");
  if (tok.back() != 'i' && tok.back() != 'j') return {parse_real(tok, tok), 0.0};
  const std::string_view body = tok.substr(0, tok.size() - 1);
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const std::string_view re = split == std::string_view::npos ? std::string_view{} : body.substr(0, split);
  std::string_view im = split == std::string_view::npos ? body : body.substr(split);
  double imag;
  if (im.empty() || im == "+") imag = 1.0;
  else if (im == "-") imag = -1.0;
  else imag = parse_real(im, tok);
  return {re.empty() ? 0.0 : parse_real(re, tok), imag};
}

json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json scalar_json(Scalar z, Field f) {
  if (f == Field::real) return number(z.real());
  return json{{"re", number(z.real())}, {"im", number(z.imag())}};
}

class Printer {
 public:
  Printer(std::ostream& os, bool full) : os_(os), digits_(full ? 17 : 9) {}

  std::string num(double v) const {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream s;
    s << std::setprecision(digits_) << v;
    return s.str();
  }
  std::string scalar(Scalar z, Field f) const {
    if (f == Field::real) return num(z.real());
    return num(z.real()) + (std::signbit(z.imag()) ? "-" : "+") + num(std::abs(z.imag())) + "i";
  }
  std::string interval(Interval iv) const { return "[" + num(iv.lower) + ", " + num(iv.upper) + "]"; }

  std::ostream& os() { return os_; }

 private:
  std::ostream& os_;
  int digits_;
};

struct LoadedSeries {
  CoefficientMap map;
  BlockSeries series;
  std::size_t dropped = 0;
};

LoadedSeries load_series(const std::string& path, std::optional<unsigned> max_degree) {
  CoefficientMap full = parse_series_file(path);
  const unsigned M = max_degree.value_or(full.max_degree());
  CoefficientMap kept(full.n(), full.n_prime(), full.q_prime(), full.field());
  std::size_t dropped = 0;
  for (const auto& [key, value] : full.terms()) {
    if (key.first.degree() > M) ++dropped;
    else kept.insert(key.first, key.second, value);
  }
  BlockSeries s = from_coefficients(kept, M);
  return {std::move(full), std::move(s), dropped};
}

json verdict_json(const ConvergenceVerdict& v) {
  json j{{"status", std::string(to_string(v.status))},
         {"point_norm", number(v.point_norm)},
         {"ratio", number(v.ratio)},
         {"tail_bound", number(v.tail_bound)},
         {"grouped_status", std::string(to_string(v.grouped_status))},
         {"r_hat", number(v.radius.r_hat)}};
  j["absolute_sums"] = json::array();
  for (double x : v.absolute_sums) j["absolute_sums"].push_back(number(x));
  j["grouped_sums"] = json::array();
  for (double x : v.grouped_sums) j["grouped_sums"].push_back(number(x));
  if (v.witness_component) {
    j["witness_component"] = *v.witness_component;
    j["witness_terms"] = json::array();
    for (double x : v.witness_terms) j["witness_terms"].push_back(number(x));
  }
  return j;
}

json radius_json(const RadiusEstimate& r) {
  json j{{"r_hat", number(r.r_hat)}, {"radius", number(r.radius)}, {"window", r.window},
         {"window_degrees", r.window_degrees}};
  j["roots"] = json::array();
  for (const auto& br : r.roots) j["roots"].push_back({{"degree", br.degree}, {"root", number(br.root)}});
  return j;
}

json point_json(const Point& h, Field f) {
  json j = json::array();
  for (const auto& z : h) j.push_back(scalar_json(z, f));
  return j;
}

Field point_field(const Point& h) {
  for (const auto& z : h)
    if (z.imag() != 0.0) return Field::complex;
  return Field::real;
}

void require_point_dim(const Point& h, const BlockSeries& s) {
  if (h.size() != s.n())
    throw ValidationError("--point has " + std::to_string(h.size()) + " coordinates, series has n = " +
                          std::to_string(s.n()));
}

void note_dropped(Printer& p, const LoadedSeries& ls) {
  if (ls.dropped > 0)
    p.os() << "note: ignored " << ls.dropped << " terms above degree " << ls.series.max_degree() << "\n";
}

struct Options {
  std::string input;
  std::string rho = "2";
  std::string point;
  std::optional<unsigned> max_degree;
  std::optional<unsigned> window;
  unsigned restarts = Budget{}.restarts;
  unsigned iters = Budget{}.iterations;
  std::uint64_t seed = 0;
  double margin = ConvergenceOptions{}.margin;
  unsigned divergence_window = ConvergenceOptions{}.divergence_window;
  double r1 = 0.0;
  std::size_t samples = 20;
  std::size_t n = 1, n_prime = 1;
  unsigned p = 0, p_prime = 0, q = 0, q_prime = 0;
  std::string field = "real";
  std::optional<unsigned> block;
  std::optional<std::size_t> instances;
  bool strict = false;
};

Budget budget_of(const Options& o) {
  Budget b;
  b.restarts = o.restarts;
  b.iterations = o.iters;
  if (b.restarts == 0 || b.iterations == 0) throw ValidationError("--restarts and --iters must be positive");
  return b;
}

ConvergenceOptions convergence_of(const Options& o) {
  ConvergenceOptions c;
  c.margin = o.margin;
  c.divergence_window = o.divergence_window;
  c.radius_window = o.window;
  return c;
}

void cmd_radius(const Options& o, Printer& p, json& params, json& results) {
  const RhoExponent rho = RhoExponent::parse(o.rho);
  auto ls = load_series(o.input, o.max_degree);
  params = {{"input", o.input}, {"rho", rho.str()}, {"max_degree", ls.series.max_degree()}};
  if (o.window) params["window"] = *o.window;
  const auto r = radius_estimate(ls.series, rho, o.window);
  note_dropped(p, ls);
  p.os() << "R_hat = " << p.num(r.radius) << "\n";
  p.os() << "r_hat = " << p.num(r.r_hat) << "\n";
  p.os() << "window = " << r.window << " blocks";
  if (!r.window_degrees.empty())
    p.os() << " (degrees " << r.window_degrees.front() << ".." << r.window_degrees.back() << ")";
  p.os() << "\n";
  for (const auto& br : r.roots) p.os() << "  m = " << br.degree << "  ||A(m)||^(1/m) = " << p.num(br.root) << "\n";
  results = radius_json(r);
}

void cmd_eval(const Options& o, Printer& p, json& params, json& results) {
  auto ls = load_series(o.input, o.max_degree);
  const Point h = parse_point(o.point);
  require_point_dim(h, ls.series);
  const Field pf = point_field(h);
  params = {{"input", o.input}, {"point", point_json(h, pf)}, {"max_degree", ls.series.max_degree()}};
  const GradedMatrix value = evaluate(ls.series, h);
  note_dropped(p, ls);
  results["values"] = json::array();
  for (std::size_t j = 0; j < value.cols(); ++j) {
    const MultiIndex& ap = value.col_slice().unrank(j);
    p.os() << "alpha' = " << ap.str() << "  value = " << p.scalar(value(0, j), value.field()) << "\n";
    results["values"].push_back({{"alpha_prime", std::vector<std::uint32_t>(ap.entries().begin(), ap.entries().end())},
                                 {"value", scalar_json(value(0, j), value.field())}});
  }
}

void print_verdict(Printer& p, const ConvergenceVerdict& v) {
  p.os() << "status = " << to_string(v.status) << "\n";
  p.os() << "||h|| = " << p.num(v.point_norm) << "  ratio = " << p.num(v.ratio)
         << "  tail_bound = " << p.num(v.tail_bound) << "\n";
  if (v.witness_component) p.os() << "witness component = " << *v.witness_component << "\n";
  p.os() << "grouped status = " << to_string(v.grouped_status) << "\n";
  for (std::size_t k = 0; k < v.absolute_sums.size(); ++k)
    p.os() << "  component " << k << ": absolute sum = " << p.num(v.absolute_sums[k])
           << "  grouped sum = " << p.num(v.grouped_sums[k]) << "\n";
}

void cmd_converges(const Options& o, Printer& p, json& params, json& results) {
  const RhoExponent rho = RhoExponent::parse(o.rho);
  auto ls = load_series(o.input, o.max_degree);
  const Point h = parse_point(o.point);
  require_point_dim(h, ls.series);
  params = {{"input", o.input}, {"rho", rho.str()}, {"point", point_json(h, point_field(h))},
            {"max_degree", ls.series.max_degree()}, {"margin", o.margin},
            {"divergence_window", o.divergence_window}};
  if (o.window) params["window"] = *o.window;
  const auto v = converges_at(ls.series, h, rho, convergence_of(o));
  note_dropped(p, ls);
  print_verdict(p, v);
  results = verdict_json(v);
}

void cmd_layer(const Options& o, Printer& p, json& params, json& results) {
  const RhoExponent rho = RhoExponent::parse(o.rho);
  auto ls = load_series(o.input, o.max_degree);
  params = {{"input", o.input}, {"rho", rho.str()}, {"max_degree", ls.series.max_degree()}};
  if (o.window) params["window"] = *o.window;
  const auto r = radius_estimate(ls.series, rho, o.window);
  const Interval iv = indeterminacy_layer(r, ls.series.n(), rho);
  note_dropped(p, ls);
  p.os() << p.interval(iv) << "\n";
  results = {{"lower", number(iv.lower)}, {"upper", number(iv.upper)}, {"radius", radius_json(r)}};
}

void cmd_witness(const Options& o, Printer& p, json& params, json& results) {
  const RhoExponent rho = RhoExponent::parse(o.rho);
  auto ls = load_series(o.input, o.max_degree);
  params = {{"input", o.input}, {"rho", rho.str()}, {"max_degree", ls.series.max_degree()}, {"radius", o.r1},
            {"samples", o.samples}, {"margin", o.margin}, {"divergence_window", o.divergence_window}};
  if (o.window) params["window"] = *o.window;
  const auto rep = layer_witness_scan(ls.series, rho, o.r1, o.samples, o.seed, convergence_of(o));
  note_dropped(p, ls);
  p.os() << "layer = " << p.interval(rep.layer) << "\n";
  p.os() << "R1 = " << p.num(rep.r1) << (rep.beyond_layer ? " (beyond the layer)" : "") << "\n";
  std::size_t counts[3] = {0, 0, 0};
  results = {{"layer", {number(rep.layer.lower), number(rep.layer.upper)}}, {"beyond_layer", rep.beyond_layer}};
  results["points"] = json::array();
  for (std::size_t k = 0; k < rep.points.size(); ++k) {
    const auto& v = rep.verdicts[k];
    ++counts[static_cast<int>(v.status)];
    p.os() << (k == 0 ? "  diagonal  " : "  sample " + std::to_string(k) + "  ") << to_string(v.status)
           << "  grouped " << to_string(v.grouped_status) << "\n";
    json entry = verdict_json(v);
    entry["point"] = point_json(rep.points[k], point_field(rep.points[k]));
    results["points"].push_back(std::move(entry));
  }
  p.os() << "converged_certified " << counts[0] << ", diverged_certified " << counts[1] << ", unknown "
         << counts[2] << "\n";
}

void cmd_lambda(const Options& o, Printer& p, json& params, json& results) {
  ExtremalProblem prob;
  prob.n = o.n;
  prob.n_prime = o.n_prime;
  prob.p = o.p;
  prob.p_prime = o.p_prime;
  prob.q = o.q;
  prob.q_prime = o.q_prime;
  prob.rho = RhoExponent::parse(o.rho);
  prob.field = parse_field(o.field);
  prob.budget = budget_of(o);
  prob.seed = o.seed;
  if (prob.n < 1 || prob.n_prime < 1) throw ValidationError("--n and --n-prime must be >= 1");
  params = {{"n", o.n}, {"n_prime", o.n_prime}, {"p", o.p}, {"p_prime", o.p_prime}, {"q", o.q},
            {"q_prime", o.q_prime}, {"rho", prob.rho.str()}, {"field", o.field}, {"restarts", o.restarts},
            {"iters", o.iters}};
  const auto all = lambda_estimate_per_field(prob);
  results["estimates"] = json::array();
  for (const auto& r : all) {
    const std::string label = all.size() > 1 ? " (" + std::string(to_string(r.field)) + ")" : "";
    p.os() << "lambda" << label << " = " << p.num(r.value) << (r.converged ? "" : "  [step budget exhausted]")
           << "\n";
    json trace = json::array();
    for (double t : r.trace) trace.push_back(number(t));
    results["estimates"].push_back({{"field", std::string(to_string(r.field))},
                                    {"value", number(r.value)},
                                    {"converged", r.converged},
                                    {"best_restart", r.best_restart},
                                    {"trace", std::move(trace)}});
  }
}

void cmd_opnorm(const Options& o, Printer& p, json& params, json& results) {
  const RhoExponent rho = RhoExponent::parse(o.rho);
  auto ls = load_series(o.input, o.max_degree);
  const Budget budget = budget_of(o);
  params = {{"input", o.input}, {"rho", rho.str()}, {"max_degree", ls.series.max_degree()},
            {"restarts", o.restarts}, {"iters", o.iters}};
  note_dropped(p, ls);
  if (o.block) {
    if (*o.block > ls.series.max_degree()) throw ValidationError("--block exceeds --max-degree");
    params["block"] = *o.block;
    const GradedMatrix& a = ls.series.block(*o.block);
    ExtremalProblem prob;
    prob.n = a.n();
    prob.n_prime = a.n_prime();
    prob.p = a.p();
    prob.p_prime = a.p_prime();
    prob.rho = rho;
    prob.mode = ExtremalMode::opnorm_max;
    prob.field = a.field();
    prob.budget = budget;
    prob.seed = o.seed;
    const auto r = opnorm_estimate(prob, a);
    const double rn = rho_norm(a, rho);
    p.os() << "opnorm(A(" << *o.block << ")) >= " << p.num(r.value) << "\n";
    p.os() << "||A(" << *o.block << ")||_rho = " << p.num(rn) << "\n";
    results = {{"opnorm", number(r.value)}, {"rho_norm", number(rn)}, {"converged", r.converged}};
    return;
  }
  const auto rows = opnorm_root_sequence(ls.series, rho, budget, o.seed);
  p.os() << "m  opnorm^(1/m)  ||A(m)||^(1/m)\n";
  results["rows"] = json::array();
  for (const auto& row : rows) {
    p.os() << row.degree << "  " << p.num(row.op_root) << "  " << p.num(row.rho_root) << "\n";
    results["rows"].push_back(
        {{"degree", row.degree}, {"op_root", number(row.op_root)}, {"rho_root", number(row.rho_root)}});
  }
}

bool cmd_verify(const Options& o, Printer& p, json& params, json& results) {
  VerifyOptions vo;
  vo.seed = o.seed;
  vo.strict = o.strict;
  if (o.instances) vo.inequality_instances = *o.instances;
  params = {{"strict", o.strict}, {"inequality_instances", vo.inequality_instances},
            {"algebra_instances", vo.algebra_instances}};
  const VerifySummary s = run_verify(vo);
  results["checks"] = json::array();
  for (const auto& c : s.checks) {
    const char* label = c.passed() ? "PASS" : (c.fatal ? "FAIL" : "NOTE");
    p.os() << label << "  " << c.name << " [" << c.variant << "]  " << c.violations << "/" << c.instances
           << " violations, worst " << p.num(c.worst) << "\n";
    results["checks"].push_back({{"name", c.name}, {"variant", c.variant}, {"instances", c.instances},
                                 {"violations", c.violations}, {"worst", number(c.worst)},
                                 {"tolerance", c.tolerance}, {"fatal", c.fatal}});
  }
  results["ok"] = s.ok();
  p.os() << (s.ok() ? "verify: ok" : "verify: violations found") << "\n";
  return s.ok();
}

void write_report(const std::string& path, const json& report) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write report " + path);
  f << report.dump(2) << "\n";
  if (!f) throw Error("cannot write report " + path);
}

}  // namespace

std::vector<Scalar> parse_point(std::string_view text) {
  std::vector<Scalar> out;
  if (trim(text).empty()) throw ValidationError("--point is empty");
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    out.push_back(parse_coordinate(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multivariate power series: radius, convergence and norm-constant estimates", "mvseries"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(MVSERIES_VERSION));

  Options o;
  std::string report;
  bool full = false;
  app.add_option("--report", report, "Write a JSON run report to this path");
  app.add_flag("--full", full, "Print numbers with full precision");
  app.fallthrough();

  auto input = [&](CLI::App* sub) {
    sub->add_option("--input", o.input, "Series file (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--max-degree", o.max_degree, "Truncation degree M (default: highest term degree)");
  };
  auto rho = [&](CLI::App* sub) { sub->add_option("--rho", o.rho, "Exponent rho in [1, inf]")->capture_default_str(); };
  auto window = [&](CLI::App* sub) { sub->add_option("--window", o.window, "Number of top degrees for r_hat"); };
  auto convergence = [&](CLI::App* sub) {
    sub->add_option("--margin", o.margin, "Certification margin")->capture_default_str();
    sub->add_option("--divergence-window", o.divergence_window, "Degrees inspected for divergence")
        ->capture_default_str();
  };
  auto search = [&](CLI::App* sub) {
    sub->add_option("--restarts", o.restarts)->capture_default_str();
    sub->add_option("--iters", o.iters)->capture_default_str();
    sub->add_option("--seed", o.seed)->capture_default_str();
  };

  auto* radius = app.add_subcommand("radius", "Estimate the radius of convergence");
  input(radius), rho(radius), window(radius);
  auto* eval = app.add_subcommand("eval", "Evaluate the truncated series at a point");
  input(eval);
  eval->add_option("--point", o.point, "Comma-separated coordinates")->required();
  auto* converges = app.add_subcommand("converges", "Absolute convergence verdict at a point");
  input(converges), rho(converges), window(converges), convergence(converges);
  converges->add_option("--point", o.point, "Comma-separated coordinates")->required();
  auto* layer = app.add_subcommand("layer", "Indeterminacy layer [R, R n^((rho-1)/rho)]");
  input(layer), rho(layer), window(layer);
  auto* witness = app.add_subcommand("witness", "Verdicts on the sphere of a given radius");
  input(witness), rho(witness), window(witness), convergence(witness);
  witness->add_option("--radius", o.r1, "Sphere radius R1")->required();
  witness->add_option("--samples", o.samples, "Random points besides the diagonal")->capture_default_str();
  witness->add_option("--seed", o.seed)->capture_default_str();
  auto* lambda = app.add_subcommand("lambda", "Estimate the constant lambda(p,p',q,q')");
  rho(lambda), search(lambda);
  lambda->add_option("--n", o.n)->capture_default_str();
  lambda->add_option("--n-prime", o.n_prime)->capture_default_str();
  lambda->add_option("--p", o.p)->capture_default_str();
  lambda->add_option("--p-prime", o.p_prime)->capture_default_str();
  lambda->add_option("--q", o.q)->capture_default_str();
  lambda->add_option("--q-prime", o.q_prime)->capture_default_str();
  lambda->add_option("--field", o.field, "real or complex")->capture_default_str();
  auto* opnorm = app.add_subcommand("opnorm", "Operator-norm root sequence of the blocks");
  input(opnorm), rho(opnorm), search(opnorm);
  opnorm->add_option("--block", o.block, "Estimate a single block A(m)");
  auto* verify = app.add_subcommand("verify", "Randomized check of the algebraic laws and inequalities");
  verify->add_option("--seed", o.seed)->capture_default_str();
  verify->add_option("--instances", o.instances, "Instances per inequality check");
  verify->add_flag("--strict", o.strict, "Treat failures of the uncorrected product bound as fatal");

  std::vector<std::string> argv_storage{"mvseries"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_storage) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  Printer printer(out, full);
  json params, results;
  bool success = true;
  const CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  try {
    if (sub == radius) cmd_radius(o, printer, params, results);
    else if (sub == eval) cmd_eval(o, printer, params, results);
    else if (sub == converges) cmd_converges(o, printer, params, results);
    else if (sub == layer) cmd_layer(o, printer, params, results);
    else if (sub == witness) cmd_witness(o, printer, params, results);
    else if (sub == lambda) cmd_lambda(o, printer, params, results);
    else if (sub == opnorm) cmd_opnorm(o, printer, params, results);
    else success = cmd_verify(o, printer, params, results);

    if (!report.empty()) {
      json r{{"tool", "mvseries"}, {"version", MVSERIES_VERSION}, {"command", args}, {"subcommand", name},
             {"parameters", params}, {"results", results}};
      if (sub == witness || sub == lambda || sub == opnorm || sub == verify) r["seed"] = o.seed;
      else r["seed"] = nullptr;
      write_report(report, r);
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const FieldError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  return success ? 0 : 1;
}

}  // namespace mvseries
