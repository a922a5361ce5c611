#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "concbounds/amgf.hpp"
#include "concbounds/bounds.hpp"
#include "concbounds/errors.hpp"
#include "concbounds/montecarlo.hpp"
#include "concbounds/specfun.hpp"

namespace concbounds::cli {

namespace {

using nlohmann::ordered_json;

std::optional<double> finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return std::nullopt;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class Emitter {
public:
  Emitter(std::ostream& out, bool csv) : out_(out), csv_(csv) {}

  void emit(const OutputRecord& record) {
    if (!csv_) {
      out_ << record.to_json().dump() << '\n';
      return;
    }
    if (!header_written_) {
      out_ << "command,name,value,stderr,verdict\n";
      header_written_ = true;
    }
    for (const auto& r : record.results) {
      out_ << record.command << ',' << r.name << ',' << csv_number(r.value) << ','
           << csv_number(r.std_error) << ',' << r.verdict.value_or("") << '\n';
    }
  }

private:
  std::ostream& out_;
  bool csv_;
  bool header_written_ = false;
};

struct Context {
  Emitter emitter;
  std::ostream& err;
  Meta meta;
  bool strict = false;
  ExecutionOptions exec;

  OutputRecord record(std::string command) const {
    OutputRecord r;
    r.command = std::move(command);
    r.meta = meta;
    return r;
  }
};

class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// phi

struct PhiOptions {
  int n = 0;
  double z = 0.0;
};

int cmd_phi(const PhiOptions& o, Context& ctx) {
  const amgf::LogPhiResult res = amgf::log_phi(amgf::PhiQuery(o.n, o.z));
  OutputRecord r = ctx.record("phi");
  r.params = {{"n", static_cast<double>(o.n)}, {"z", o.z},
              {"method", std::string(amgf::to_string(res.method))}};
  r.results.push_back({"log_phi", res.log_value, std::nullopt, std::nullopt});
  if (res.log_value < std::log(std::numeric_limits<double>::max())) {
    r.results.push_back({"phi", std::exp(res.log_value), std::nullopt, std::nullopt});
  } else {
    r.results.push_back({"phi", std::nullopt, std::nullopt, std::string("overflow")});
  }
  ctx.emitter.emit(r);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// bound / compare / table

struct BoundOptions {
  std::string kind = "vector";
  std::string method;
  int n = 0;
  std::optional<int> m;
  double sigma = 1.0;
  double delta = 0.0;
  std::string eps;  // empty or "auto": optimize
};

std::optional<double> parse_eps(const std::string& text) {
  if (text.empty() || text == "auto") return std::nullopt;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw UsageError("--eps must be a number in (0, 1) or 'auto'");
  }
  if (used != text.size()) throw UsageError("--eps must be a number in (0, 1) or 'auto'");
  return v;
}

void append_bound(OutputRecord& r, const bounds::BoundResult& b, const std::string& prefix) {
  r.results.push_back({prefix + "radius", b.radius, std::nullopt, std::nullopt});
  if (b.c1) r.results.push_back({prefix + "c1", *b.c1, std::nullopt, std::nullopt});
  if (b.c2) r.results.push_back({prefix + "c2", *b.c2, std::nullopt, std::nullopt});
  if (b.eps_used) r.results.push_back({prefix + "eps", *b.eps_used, std::nullopt, std::nullopt});
}

bounds::BoundParams to_params(const BoundOptions& o) {
  bounds::BoundParams p;
  p.n = o.n;
  p.m = o.m;
  p.sigma = o.sigma;
  p.delta = o.delta;
  p.eps = parse_eps(o.eps);
  return p;
}

void add_bound_params(OutputRecord& r, const bounds::BoundParams& p) {
  if (p.m) r.params.emplace_back("m", static_cast<double>(*p.m));
  r.params.emplace_back("n", static_cast<double>(p.n));
  r.params.emplace_back("sigma", p.sigma);
  r.params.emplace_back("delta", p.delta);
  if (p.eps) {
    r.params.emplace_back("eps", *p.eps);
  } else {
    r.params.emplace_back("eps", std::string("auto"));
  }
}

int cmd_compare(bounds::BoundParams p, Context& ctx) {
  p.validate();
  OutputRecord r = ctx.record("compare");
  add_bound_params(r, p);
  for (const auto& b : bounds::compare_methods(p)) {
    append_bound(r, b, std::string(bounds::to_string(b.method)) + ".");
  }
  ctx.emitter.emit(r);
  return kExitOk;
}

int cmd_bound(const BoundOptions& o, Context& ctx) {
  const bool matrix = o.kind == "matrix";
  std::string method_name = o.method;
  if (method_name.empty()) method_name = matrix ? "thm4" : "thm3";
  if (matrix && !o.m) throw UsageError("bound matrix requires --m");
  if (!matrix && o.m) throw UsageError("--m is only valid for bound matrix");
  bounds::BoundParams p = to_params(o);

  if (method_name == "all") {
    if (matrix) throw UsageError("--method all is only valid for bound vector");
    return cmd_compare(p, ctx);
  }
  const auto method = bounds::parse_method(method_name);
  if (!method) throw UsageError("unknown --method '" + method_name + "'");
  if ((*method == bounds::Method::matrix_thm4) != matrix) {
    throw UsageError("method '" + method_name + "' does not apply to bound " + o.kind);
  }
  if (!bounds::uses_eps(*method) && p.eps) {
    throw UsageError("method '" + method_name + "' takes no --eps");
  }

  OutputRecord r = ctx.record("bound");
  r.params.emplace_back("kind", o.kind);
  r.params.emplace_back("method", std::string(bounds::to_string(*method)));
  add_bound_params(r, p);
  append_bound(r, bounds::evaluate(*method, p), "");
  ctx.emitter.emit(r);
  return kExitOk;
}

struct TableOptions {
  std::string sweep = "delta";
  int n = 10;
  int n_min = 1;
  int n_max = 50;
  double sigma = 1.0;
  double delta = 0.01;
  std::vector<double> deltas{0.1, 0.01, 0.001};
  std::string eps;
};

int cmd_table(const TableOptions& o, bool json_output, Context& ctx, std::ostream& out) {
  std::vector<std::pair<int, double>> points;
  if (o.sweep == "delta") {
    for (double d : o.deltas) points.emplace_back(o.n, d);
  } else if (o.sweep == "n") {
    if (o.n_min < 1 || o.n_max < o.n_min) throw UsageError("need 1 <= --n-min <= --n-max");
    for (int n = o.n_min; n <= o.n_max; ++n) points.emplace_back(n, o.delta);
  } else {
    throw UsageError("--sweep must be 'delta' or 'n'");
  }
  if (!json_output) out << "n,delta,method,radius,c1,c2,eps\n";
  for (const auto& [n, delta] : points) {
    bounds::BoundParams p;
    p.n = n;
    p.sigma = o.sigma;
    p.delta = delta;
    p.eps = parse_eps(o.eps);
    if (json_output) {
      cmd_compare(p, ctx);
      continue;
    }
    for (const auto& b : bounds::compare_methods(p)) {
      out << n << ',' << csv_number(delta) << ',' << bounds::to_string(b.method) << ','
          << csv_number(b.radius) << ',' << csv_number(b.c1) << ',' << csv_number(b.c2) << ','
          << csv_number(b.eps_used) << '\n';
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOptions {
  std::string suite;
  std::optional<int> n;
  std::optional<int> m;
  std::optional<double> eps;
  std::optional<double> zmin;
  std::optional<double> zmax;
  std::optional<int> grid;
  std::string dist = "gaussian";
  double sigma = 1.0;
  double lambda = 1.0;
  std::optional<std::size_t> samples;
  std::size_t directions = 20;
  std::size_t matrices = 20;
  std::optional<std::size_t> coverage_samples;
  std::string method = "thm3";
  double delta = 0.01;
  std::string eps_text;
};

struct Tally {
  int checks = 0;
  int failed = 0;
  int inconclusive = 0;

  void add(mc::Verdict v) {
    ++checks;
    if (v == mc::Verdict::fail) ++failed;
    if (v == mc::Verdict::inconclusive) ++inconclusive;
  }
};

mc::Verdict pass_if(bool ok) { return ok ? mc::Verdict::pass : mc::Verdict::fail; }

std::string verdict_text(mc::Verdict v) { return std::string(mc::to_string(v)); }

std::vector<double> log_grid(double lo, double hi, int points) {
  std::vector<double> zs;
  if (points == 1) return {hi};
  for (int i = 0; i < points; ++i) {
    zs.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1)));
  }
  return zs;
}

void verify_lemma1(const VerifyOptions& o, Context& ctx, Tally& tally) {
  const int n = o.n.value_or(5);
  const double zmax = o.zmax.value_or(500.0);
  const int grid = o.grid.value_or(200);
  if (grid < 2 || !(zmax > 0.0)) throw UsageError("lemma1 needs --grid >= 2 and --zmax > 0");

  std::vector<double> zs{0.0};
  for (double z : log_grid(zmax * 1e-6, zmax, grid - 1)) zs.push_back(z);
  std::vector<double> log_phis;
  for (double z : zs) log_phis.push_back(amgf::log_phi(amgf::PhiQuery(n, z)).log_value);

  std::vector<double> eps_values;
  if (o.eps) {
    eps_values.push_back(*o.eps);
  } else {
    for (int i = 1; i <= 19; ++i) eps_values.push_back(0.05 * i);
  }
  for (double eps : eps_values) {
    double worst = std::numeric_limits<double>::infinity(), worst_z = 0.0;
    for (std::size_t i = 0; i < zs.size(); ++i) {
      const double margin = log_phis[i] - amgf::lemma1_lower_bound(n, zs[i], eps);
      if (margin < worst) {
        worst = margin;
        worst_z = zs[i];
      }
    }
    const mc::Verdict v = pass_if(worst >= -1e-8);
    tally.add(v);
    OutputRecord r = ctx.record("verify");
    r.params = {{"suite", std::string("lemma1")}, {"n", static_cast<double>(n)}, {"eps", eps},
                {"zmax", zmax}, {"grid", static_cast<double>(zs.size())}};
    r.results.push_back({"min_margin", worst, std::nullopt, verdict_text(v)});
    r.results.push_back({"argmin_z", worst_z, std::nullopt, std::nullopt});
    ctx.emitter.emit(r);
  }
}

void verify_deriv(const VerifyOptions& o, Context& ctx, Tally& tally) {
  const double zmin = o.zmin.value_or(0.1), zmax = o.zmax.value_or(50.0);
  const int grid = o.grid.value_or(100);
  if (grid < 2 || !(zmin > 0.0) || !(zmax > zmin)) {
    throw UsageError("deriv needs 0 < --zmin < --zmax and --grid >= 2");
  }
  std::vector<int> dims;
  if (o.n) {
    if (*o.n < 2) throw UsageError("deriv needs --n >= 2");
    dims.push_back(*o.n);
  } else {
    for (int n = 2; n <= 20; ++n) dims.push_back(n);
  }
  for (int n : dims) {
    const specfun::BesselOrder order = specfun::BesselOrder::for_dimension(n);
    auto lp = [n](double z) { return amgf::log_phi(amgf::PhiQuery(n, z)).log_value; };
    double worst_rel = 0.0, worst_amos = std::numeric_limits<double>::infinity();
    for (double z : log_grid(zmin, zmax, grid)) {
      const double h = 1e-3 * std::max(1.0, z);
      const double fd =
          (8.0 * (lp(z + h) - lp(z - h)) - (lp(z + 2 * h) - lp(z - 2 * h))) / (12.0 * h);
      const double ratio = specfun::bessel_ratio(order, z).value;
      worst_rel = std::max(worst_rel, std::abs(fd - ratio) / ratio);
      worst_amos = std::min(worst_amos, ratio - specfun::amos_lower_bound(n, z));
    }
    const mc::Verdict v_fd = pass_if(worst_rel <= 1e-6);
    const mc::Verdict v_amos = pass_if(worst_amos >= -1e-12);
    tally.add(v_fd);
    tally.add(v_amos);
    OutputRecord r = ctx.record("verify");
    r.params = {{"suite", std::string("deriv")}, {"n", static_cast<double>(n)},
                {"zmin", zmin}, {"zmax", zmax}, {"grid", static_cast<double>(grid)}};
    r.results.push_back({"max_rel_error", worst_rel, std::nullopt, verdict_text(v_fd)});
    r.results.push_back({"min_amos_margin", worst_amos, std::nullopt, verdict_text(v_amos)});
    ctx.emitter.emit(r);
  }
}

mc::SamplerSpec sampler_from(const VerifyOptions& o, int default_n) {
  const auto family = mc::parse_family(o.dist);
  if (!family) throw UsageError("unknown --dist '" + o.dist + "'");
  if (*family == mc::Family::gaussian_matrix && !o.m) {
    throw UsageError("--dist gaussian_matrix requires --m");
  }
  if (*family != mc::Family::gaussian_matrix && o.m) {
    throw UsageError("--m is only valid with --dist gaussian_matrix");
  }
  return mc::SamplerSpec::make(*family, o.n.value_or(default_n), o.sigma, o.m);
}

void add_spec_params(OutputRecord& r, const mc::SamplerSpec& s) {
  r.params.emplace_back("dist", std::string(mc::to_string(s.family)));
  if (s.m) r.params.emplace_back("m", static_cast<double>(*s.m));
  r.params.emplace_back("n", static_cast<double>(s.n));
  r.params.emplace_back("scale", s.scale);
  r.params.emplace_back("sigma", s.sigma);
}

void emit_report(const mc::McReport& rep, const std::string& suite, Context& ctx,
                 std::vector<std::pair<std::string, ParamValue>> extra_params) {
  OutputRecord r = ctx.record("verify");
  r.params.emplace_back("suite", suite);
  add_spec_params(r, rep.spec);
  for (auto& p : extra_params) r.params.push_back(std::move(p));
  r.params.emplace_back("samples", static_cast<double>(rep.samples));
  r.results.push_back({"statistic", finite_or_null(rep.statistic), finite_or_null(rep.std_error),
                       verdict_text(rep.verdict)});
  r.results.push_back({"target", rep.target, std::nullopt, std::nullopt});
  r.results.push_back({"interval_lo", finite_or_null(rep.interval.lo), std::nullopt, std::nullopt});
  r.results.push_back({"interval_hi", finite_or_null(rep.interval.hi), std::nullopt, std::nullopt});
  for (const auto& [name, value] : rep.extras) {
    r.results.push_back({name, finite_or_null(value), std::nullopt, std::nullopt});
  }
  ctx.emitter.emit(r);
}

void emit_checks(const mc::McReport& rep, const std::string& suite, Context& ctx) {
  for (const auto& c : rep.checks) {
    OutputRecord r = ctx.record("verify");
    r.params = {{"suite", suite}, {"check", c.name}};
    r.results.push_back({"statistic", finite_or_null(c.statistic), finite_or_null(c.std_error),
                         verdict_text(c.verdict)});
    r.results.push_back({"target", c.target, std::nullopt, std::nullopt});
    ctx.emitter.emit(r);
  }
}

void verify_amgf(const VerifyOptions& o, Context& ctx, Tally& tally) {
  const mc::SamplerSpec spec = sampler_from(o, 2);
  const auto rep = mc::amgf_bound_check(spec, o.lambda, o.samples.value_or(100000),
                                        ctx.meta.seed.value_or(0), ctx.exec);
  tally.add(rep.verdict);
  emit_report(rep, "amgf", ctx, {{"lambda", o.lambda}});
}

void verify_mgf(const VerifyOptions& o, Context& ctx, Tally& tally) {
  const mc::SamplerSpec spec = sampler_from(o, 3);
  const auto rep = mc::directional_mgf_check(spec, o.lambda, o.directions,
                                             o.samples.value_or(100000),
                                             ctx.meta.seed.value_or(0), ctx.exec);
  for (const auto& c : rep.checks) tally.add(c.verdict);
  emit_checks(rep, "mgf", ctx);
  emit_report(rep, "mgf", ctx,
              {{"lambda", o.lambda}, {"directions", static_cast<double>(o.directions)}});
}

mc::McReport run_coverage(const mc::SamplerSpec& spec, const std::string& method_name,
                          double delta, std::optional<double> eps, std::size_t samples,
                          Context& ctx) {
  const auto method = bounds::parse_method(method_name);
  if (!method) throw UsageError("unknown --method '" + method_name + "'");
  bounds::BoundParams p;
  p.n = spec.n;
  p.m = spec.m;
  p.sigma = spec.sigma;
  p.delta = delta;
  p.eps = eps;
  if (p.eps && !bounds::uses_eps(*method)) {
    throw UsageError("method '" + method_name + "' takes no --eps");
  }
  return mc::coverage_experiment(spec, *method, p, samples, ctx.meta.seed.value_or(0), ctx.exec);
}

void verify_coverage(const VerifyOptions& o, Context& ctx, Tally& tally) {
  const mc::SamplerSpec spec = sampler_from(o, 10);
  const std::size_t samples = o.samples.value_or(spec.is_matrix() ? 10000 : 100000);
  const auto eps = parse_eps(o.eps_text);
  const auto rep = run_coverage(spec, o.method, o.delta, eps, samples, ctx);
  tally.add(rep.verdict);
  emit_report(rep, "coverage", ctx,
              {{"method", o.method}, {"delta", o.delta},
               {"eps", eps ? ParamValue(*eps) : ParamValue(std::string("auto"))}});
}

void verify_matrix(const VerifyOptions& o, Context& ctx, Tally& tally) {
  const int m = o.m.value_or(3), n = o.n.value_or(4);
  const double lambda = o.lambda;
  const auto lemma4 = mc::lemma4_certification(m, n, lambda, o.matrices,
                                               o.samples.value_or(100000),
                                               ctx.meta.seed.value_or(0), ctx.exec);
  for (const auto& c : lemma4.checks) tally.add(c.verdict);
  emit_checks(lemma4, "matrix.lemma4", ctx);
  emit_report(lemma4, "matrix.lemma4", ctx,
              {{"lambda", lambda}, {"matrices", static_cast<double>(o.matrices)}});

  const mc::SamplerSpec spec = mc::SamplerSpec::make(mc::Family::gaussian_matrix, n, o.sigma, m);
  const auto eps = parse_eps(o.eps_text);
  const auto cov =
      run_coverage(spec, "matrix_thm4", o.delta, eps, o.coverage_samples.value_or(10000), ctx);
  tally.add(cov.verdict);
  emit_report(cov, "matrix.coverage", ctx,
              {{"method", std::string("matrix_thm4")}, {"delta", o.delta},
               {"eps", eps ? ParamValue(*eps) : ParamValue(std::string("auto"))}});
}

int cmd_verify(const VerifyOptions& o, Context& ctx) {
  static const std::map<std::string, std::function<void(const VerifyOptions&, Context&, Tally&)>>
      suites = {{"lemma1", verify_lemma1}, {"deriv", verify_deriv},     {"amgf", verify_amgf},
                {"mgf", verify_mgf},       {"coverage", verify_coverage}, {"matrix", verify_matrix}};
  const auto it = suites.find(o.suite);
  if (it == suites.end()) throw UsageError("unknown suite '" + o.suite + "'");
  Tally tally;
  it->second(o, ctx, tally);

  mc::Verdict overall = mc::Verdict::pass;
  if (tally.inconclusive > 0) overall = mc::Verdict::inconclusive;
  if (tally.failed > 0) overall = mc::Verdict::fail;
  OutputRecord r = ctx.record("verify");
  r.params = {{"suite", o.suite}, {"strict", ctx.strict ? 1.0 : 0.0}};
  r.results.push_back({"checks", static_cast<double>(tally.checks), std::nullopt, std::nullopt});
  r.results.push_back({"failed", static_cast<double>(tally.failed), std::nullopt, std::nullopt});
  r.results.push_back(
      {"inconclusive", static_cast<double>(tally.inconclusive), std::nullopt, std::nullopt});
  r.results.push_back({"verdict", std::nullopt, std::nullopt, verdict_text(overall)});
  ctx.emitter.emit(r);

  if (tally.failed > 0) return kExitCheckFailed;
  if (tally.inconclusive > 0) {
    if (ctx.strict) return kExitCheckFailed;
    ctx.err << "warning: " << tally.inconclusive
            << " check(s) inconclusive within the 3-standard-error margin\n";
  }
  return kExitOk;
}

} // namespace

nlohmann::ordered_json OutputRecord::to_json() const {
  ordered_json j;
  j["command"] = command;
  ordered_json p = ordered_json::object();
  for (const auto& [key, value] : params) {
    std::visit([&p, &key](const auto& v) { p[key] = v; }, value);
  }
  j["params"] = std::move(p);
  ordered_json rs = ordered_json::array();
  for (const auto& r : results) {
    ordered_json e;
    e["name"] = r.name;
    e["value"] = r.value ? ordered_json(*r.value) : ordered_json(nullptr);
    e["stderr"] = r.std_error ? ordered_json(*r.std_error) : ordered_json(nullptr);
    e["verdict"] = r.verdict ? ordered_json(*r.verdict) : ordered_json(nullptr);
    rs.push_back(std::move(e));
  }
  j["results"] = std::move(rs);
  ordered_json m;
  m["version"] = meta.version;
  m["seed"] = meta.seed ? ordered_json(*meta.seed) : ordered_json(nullptr);
  m["timestamp"] = meta.timestamp;
  j["meta"] = std::move(m);
  return j;
}

OutputRecord OutputRecord::from_json(const nlohmann::ordered_json& j) {
  OutputRecord r;
  r.command = j.at("command").get<std::string>();
  for (const auto& [key, value] : j.at("params").items()) {
    if (value.is_string()) {
      r.params.emplace_back(key, value.get<std::string>());
    } else {
      r.params.emplace_back(key, value.get<double>());
    }
  }
  auto opt_number = [](const ordered_json& v) -> std::optional<double> {
    if (v.is_null()) return std::nullopt;
    return v.get<double>();
  };
  for (const auto& e : j.at("results")) {
    ResultField f;
    f.name = e.at("name").get<std::string>();
    f.value = opt_number(e.at("value"));
    f.std_error = opt_number(e.at("stderr"));
    if (!e.at("verdict").is_null()) f.verdict = e.at("verdict").get<std::string>();
    r.results.push_back(std::move(f));
  }
  const auto& m = j.at("meta");
  r.meta.version = m.at("version").get<std::string>();
  if (!m.at("seed").is_null()) r.meta.seed = m.at("seed").get<std::uint64_t>();
  r.meta.timestamp = m.at("timestamp").get<std::string>();
  return r;
}

std::string csv_number(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", *v);
  return buf;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sub-Gaussian norm concentration bounds via the averaged MGF", "conc-bounds"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);

  std::string format = "json";
  std::optional<std::uint64_t> seed;
  bool strict = false;
  unsigned workers = 0;
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", seed, "Seed for Monte Carlo commands");
  app.add_flag("--strict", strict, "Treat inconclusive checks as failures");
  app.add_option("--workers", workers, "Worker threads for Monte Carlo (0: all cores)");

  PhiOptions phi;
  auto* phi_cmd = app.add_subcommand("phi", "Evaluate log phi_n(z)");
  phi_cmd->add_option("--n", phi.n, "Dimension")->required();
  phi_cmd->add_option("--z", phi.z, "Argument |lambda X|")->required();

  BoundOptions bound;
  auto* bound_cmd = app.add_subcommand("bound", "Concentration radius for one method");
  bound_cmd->add_option("kind", bound.kind, "vector or matrix")
      ->check(CLI::IsMember({"vector", "matrix"}));
  bound_cmd->add_option("--method", bound.method,
                        "scalar|eps_net|thm2|thm3|hkz|all (vector), thm4 (matrix)");
  bound_cmd->add_option("--n", bound.n, "Dimension (columns for matrices)")->required();
  bound_cmd->add_option("--m", bound.m, "Matrix rows");
  bound_cmd->add_option("--sigma", bound.sigma, "Sub-Gaussian parameter");
  bound_cmd->add_option("--delta", bound.delta, "Failure probability")->required();
  bound_cmd->add_option("--eps", bound.eps, "eps in (0, 1) or 'auto'");

  BoundOptions compare;
  auto* compare_cmd = app.add_subcommand("compare", "All vector methods side by side");
  compare_cmd->add_option("--n", compare.n, "Dimension")->required();
  compare_cmd->add_option("--sigma", compare.sigma, "Sub-Gaussian parameter");
  compare_cmd->add_option("--delta", compare.delta, "Failure probability")->required();
  compare_cmd->add_option("--eps", compare.eps, "eps for the eps-net method, or 'auto'");

  TableOptions table;
  auto* table_cmd = app.add_subcommand("table", "Method comparison over a delta or n sweep");
  table_cmd->add_option("--sweep", table.sweep, "delta or n");
  table_cmd->add_option("--n", table.n, "Dimension for a delta sweep");
  table_cmd->add_option("--n-min", table.n_min, "First n of an n sweep");
  table_cmd->add_option("--n-max", table.n_max, "Last n of an n sweep");
  table_cmd->add_option("--sigma", table.sigma, "Sub-Gaussian parameter");
  table_cmd->add_option("--delta", table.delta, "Failure probability for an n sweep");
  table_cmd->add_option("--deltas", table.deltas, "Failure probabilities for a delta sweep")
      ->delimiter(',');
  table_cmd->add_option("--eps", table.eps, "eps for the eps-net method, or 'auto'");

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run a verification suite");
  verify_cmd->add_option("suite", verify.suite, "lemma1|deriv|amgf|mgf|coverage|matrix")
      ->required();
  verify_cmd->add_option("--n", verify.n, "Dimension (columns for matrices)");
  verify_cmd->add_option("--m", verify.m, "Matrix rows");
  verify_cmd->add_option("--zmin", verify.zmin, "Smallest z of the grid");
  verify_cmd->add_option("--zmax", verify.zmax, "Largest z of the grid");
  verify_cmd->add_option("--grid", verify.grid, "Grid points");
  verify_cmd->add_option("--dist", verify.dist, "gaussian|rademacher|uniform|gaussian_matrix");
  verify_cmd->add_option("--sigma", verify.sigma, "Sampler scale (certified sigma)");
  verify_cmd->add_option("--lambda", verify.lambda, "MGF argument");
  verify_cmd->add_option("--samples", verify.samples, "Monte Carlo samples");
  verify_cmd->add_option("--directions", verify.directions, "Directions for the mgf suite");
  verify_cmd->add_option("--matrices", verify.matrices, "Random matrices for the matrix suite");
  verify_cmd->add_option("--coverage-samples", verify.coverage_samples,
                         "Samples for the matrix coverage check");
  verify_cmd->add_option("--method", verify.method, "Bound method for coverage");
  verify_cmd->add_option("--delta", verify.delta, "Failure probability");
  verify_cmd->add_option("--eps", verify.eps_text, "eps in (0, 1) or 'auto'");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  Context ctx{Emitter(out, format == "csv"), err, Meta{}, strict, ExecutionOptions{workers}};
  ctx.meta.timestamp = utc_timestamp();

  try {
    if (*phi_cmd) return cmd_phi(phi, ctx);
    if (*bound_cmd) return cmd_bound(bound, ctx);
    if (*compare_cmd) return cmd_compare(to_params(compare), ctx);
    if (*table_cmd) {
      const bool json_output = app.get_option("--format")->count() > 0 && format == "json";
      return cmd_table(table, json_output, ctx, out);
    }
    if (*verify_cmd) {
      const bool stochastic = verify.suite != "lemma1" && verify.suite != "deriv";
      if (stochastic) ctx.meta.seed = seed.value_or(0);
      if (!verify.eps_text.empty() && verify.suite == "lemma1") {
        verify.eps = parse_eps(verify.eps_text);
      }
      return cmd_verify(verify, ctx);
    }
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << " (iterations " << e.iterations()
        << ", last gap " << e.last_gap() << ")\n";
    return kExitNumerical;
  } catch (const std::logic_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

} // namespace concbounds::cli
