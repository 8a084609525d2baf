#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cli_config.hpp"
#include "hardy_rellich/constants.hpp"
#include "hardy_rellich/errors.hpp"
#include "hardy_rellich/minseq.hpp"
#include "hardy_rellich/verify.hpp"
#include "json.hpp"

using namespace hr;
using cli::format_double;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct RunConfig {
  std::string family;
  int N = 6;
  std::vector<double> m{0.0};
  int l = 1;
  int k = 0;
  int K = kDefaultSeriesTerms;
  std::uint64_t seed = 20240601;
  int size = kStandardSuiteSize;
  std::optional<double> rel_tol, abs_tol;
  std::string out;
  std::string format = "csv";
  std::string set = "all";
  std::string schedule;
  bool list = false;
  bool restrict_N = false;
};

QuadratureSpec quadrature(const RunConfig& c, QuadratureSpec base) {
  if (c.rel_tol) base.rel_tol = *c.rel_tol;
  if (c.abs_tol) base.abs_tol = *c.abs_tol;
  return base;
}

double single_m(const RunConfig& c) {
  if (c.m.size() != 1) throw DomainError("expected a single value for --m");
  return c.m.front();
}

void emit(const RunConfig& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw ParseError("cannot write '" + c.out + "'");
  f << text;
}

// Ordered (quantity, value) rows rendered as CSV or a JSON object.
using Rows = std::vector<std::pair<std::string, json>>;

std::string render_rows(const Rows& rows, const std::string& format) {
  if (format == "json") {
    json j = json::object();
    for (const auto& [k, v] : rows) j[k] = v;
    return j.dump(2) + "\n";
  }
  std::string s = "quantity,value\n";
  for (const auto& [k, v] : rows) {
    std::string cell;
    if (v.is_number_float())
      cell = format_double(v.get<double>());
    else if (v.is_string())
      cell = v.get<std::string>();
    else
      cell = v.dump();
    if (cell.find(',') != std::string::npos) cell = "\"" + cell + "\"";
    s += k + "," + cell + "\n";
  }
  return s;
}

std::string rational_text(const Rational& r) { return std::to_string(r.num) + "/" + std::to_string(r.den); }

Rows constants_rows(const RunConfig& c) {
  const std::string& f = c.family;
  const int N = c.N;
  Rows rows;
  auto value = [&](double v) { rows.emplace_back("value", v); };
  if (f == "hardy") {
    value(hardy_constant(N));
  } else if (f == "rellich") {
    value(rellich_constant(N));
  } else if (f == "gradient-rellich") {
    value(gradient_rellich_constant(N));
  } else if (f == "sigma") {
    value(sigma(single_m(c), N));
  } else if (f == "sigma-bar") {
    value(sigma_bar(single_m(c), N));
  } else if (f == "amn") {
    const ConstantReport r = a_mn(N, single_m(c));
    value(r.value);
    if (r.exact) rows.emplace_back("exact", rational_text(*r.exact));
    rows.emplace_back("argmin_k", *r.argmin_k);
    rows.emplace_back("branch", r.branch);
    rows.emplace_back("depth", r.depth);
    for (size_t k = 0; k < r.per_mode.size(); ++k) rows.emplace_back("A(" + std::to_string(k) + ")", r.per_mode[k]);
  } else if (f == "mode-quotient") {
    value(mode_quotient(c.k, N, single_m(c)));
  } else if (f == "m-star") {
    value(m_star(N));
  } else if (f == "x0") {
    value(x0(N, single_m(c)));
  } else if (f == "k-bar") {
    rows.emplace_back("value", k_bar(N));
  } else if (f == "thresholds") {
    rows.emplace_back("m_star", m_star(N));
    rows.emplace_back("k_bar", k_bar(N));
    for (int k = 1; k <= k_bar(N); ++k) {
      const std::string s = std::to_string(k);
      if (const auto lo = m1k(N, k)) rows.emplace_back("m1_" + s, *lo);
      if (const auto e = threshold_exact(N, k, false)) rows.emplace_back("m1_" + s + "_exact", rational_text(*e));
      if (const auto hi = m2k(N, k)) rows.emplace_back("m2_" + s, *hi);
      if (const auto e = threshold_exact(N, k, true)) rows.emplace_back("m2_" + s + "_exact", rational_text(*e));
    }
  } else if (f == "reduction-a") {
    value(reduction_constant_A(N, single_m(c)));
  } else if (f == "comparison") {
    if (c.k < 1 || c.k > kComparisonCount) throw DomainError("comparison: --k must be in 1..6");
    const auto cmp = static_cast<Comparison>(c.k - 1);
    rows.emplace_back("name", comparison_name(cmp));
    value(comparison_constant(cmp, N));
    if (const auto e = comparison_constant_exact(cmp, N)) rows.emplace_back("exact", rational_text(*e));
  } else if (f.rfind("higher-order-", 0) == 0) {
    const std::string v = f.substr(13);
    const HigherOrderVariant var = v == "laplacian" ? HigherOrderVariant::Laplacian
                                   : v == "gradient"  ? HigherOrderVariant::Gradient
                                   : v == "mixed"     ? HigherOrderVariant::Mixed
                                                      : throw DomainError("unknown constants family '" + f + "'");
    const double order = single_m(c);
    if (order != std::floor(order)) throw DomainError("higher order: --m is the polyharmonic order, an integer");
    const HigherOrderExpansion e = higher_order_coefficients(N, static_cast<int>(order), c.l, var);
    rows.emplace_back("lhs", std::string(e.lhs_gradient ? "|grad Lap^" : "(Lap^") + std::to_string(e.lhs_laplacian_power) +
                                 (e.lhs_gradient ? " u|^2" : " u)^2"));
    for (size_t i = 0; i < e.terms.size(); ++i) {
      const auto& t = e.terms[i];
      const std::string base = "term" + std::to_string(i + 1) + "_";
      rows.emplace_back(base + "coefficient", t.coefficient);
      rows.emplace_back(base + "density", std::string(t.gradient ? "|grad Lap^" : "(Lap^") +
                                              std::to_string(t.laplacian_power) + (t.gradient ? " u|^2" : " u)^2"));
      rows.emplace_back(base + "weight_power", t.weight_power);
      rows.emplace_back(base + "series", t.series);
    }
  } else {
    throw DomainError("unknown constants family '" + f + "'");
  }
  return rows;
}

std::string amn_table(const RunConfig& c) {
  const double hi = 0.5 * (c.N - 4.0);
  if (c.N < 5) throw DomainError("amn-table: dimension N=" + std::to_string(c.N) + " must be at least 5");
  json arr = json::array();
  std::string csv = "m,a_mn,argmin_k,branch\n";
  for (double m : c.m) {
    if (!(m >= 0.0 && m < hi)) {
      std::cerr << "amn-table: clipped m=" << format_double(m) << " outside [0, (N-4)/2)\n";
      continue;
    }
    const ConstantReport r = a_mn(c.N, m);
    csv += format_double(m) + "," + format_double(r.value) + "," + std::to_string(*r.argmin_k) + ",\"" + r.branch + "\"\n";
    arr.push_back({{"m", m}, {"a_mn", r.value}, {"argmin_k", *r.argmin_k}, {"branch", r.branch}});
  }
  return c.format == "json" ? arr.dump(2) + "\n" : csv;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

int verify(const RunConfig& c) {
  if (c.list) {
    std::string s = "target,kind,description\n";
    json arr = json::array();
    for (const auto& e : registry()) {
      const char* kind = e.kind == CheckKind::Identity ? "identity" : "inequality";
      s += e.id + "," + kind + ",\"" + e.description + "\"\n";
      arr.push_back({{"target", e.id}, {"kind", kind}, {"description", e.description}});
    }
    emit(c, c.format == "json" ? arr.dump(2) + "\n" : s);
    return kExitPass;
  }
  std::vector<std::string> targets;
  if (c.set == "identities" || c.set == "all")
    for (auto& t : targets_of(CheckKind::Identity)) targets.push_back(t);
  if (c.set == "inequalities" || c.set == "all")
    for (auto& t : targets_of(CheckKind::Inequality)) targets.push_back(t);
  if (targets.empty()) targets = split(c.set, ',');
  if (c.K < 1) throw DomainError("verify: --K must be at least 1");
  const auto suite = standard_suite(c.seed, c.size, c.restrict_N ? std::optional<int>(c.N) : std::nullopt);
  const auto reports = run_checks(targets, suite, c.K, quadrature(c, verification_quadrature()));
  emit(c, c.format == "json" ? reports_to_json(reports) : reports_to_csv(reports));
  for (const auto& r : reports) {
    if (r.pass) continue;
    for (const auto& cs : r.cases)
      if (!cs.skipped && !cs.pass) {
        std::cerr << "FAIL " << r.target << " case " << cs.index << " (" << cs.description << "): lhs=" << format_double(cs.lhs)
                  << " rhs=" << format_double(cs.rhs) << " value=" << format_double(cs.value) << "\n";
        return kExitFail;
      }
  }
  return kExitPass;
}

int scan(const RunConfig& c) {
  const auto fam = parse_family(c.family);
  if (!fam) throw DomainError("unknown scan family '" + c.family + "'");
  MinSeqParams base;
  base.N = c.N;
  base.m = single_m(c);
  base.mode_k = c.k;
  const auto schedule = c.schedule.empty() ? default_schedule(*fam, base) : parse_schedule(c.schedule, base);
  const ScanResult r = scan_to_limit(*fam, schedule, quadrature(c, QuadratureSpec{}));
  if (c.format == "json") {
    json j;
    j["family"] = family_name(r.family);
    j["theoretical"] = r.theoretical;
    j["final"] = r.extrapolated;
    if (r.aitken) j["aitken"] = *r.aitken;
    j["monotone"] = r.monotone;
    j["strictly_decreasing"] = r.strictly_decreasing;
    json steps = json::array();
    for (const auto& s : r.steps)
      steps.push_back({{"epsilon", s.params.epsilon},
                       {"a", s.params.a},
                       {"quotient", s.quotient.value},
                       {"numerator", s.quotient.numerator},
                       {"denominator", s.quotient.denominator},
                       {"converged", s.quotient.converged}});
    j["steps"] = steps;
    emit(c, j.dump(2) + "\n");
  } else {
    size_t na = 0;
    for (const auto& st : r.steps) na = std::max(na, st.params.a.size());
    if (!uses_log_factors(r.family)) na = 0;
    std::string s = "step,epsilon";
    for (size_t i = 1; i <= na; ++i) s += ",a" + std::to_string(i);
    s += ",quotient,numerator,denominator,converged,theoretical\n";
    for (size_t i = 0; i < r.steps.size(); ++i) {
      const auto& st = r.steps[i];
      s += std::to_string(i) + "," + format_double(st.params.epsilon);
      for (size_t j = 0; j < na; ++j) s += "," + (j < st.params.a.size() ? format_double(st.params.a[j]) : std::string());
      s += "," + format_double(st.quotient.value) + "," + format_double(st.quotient.numerator) + "," +
           format_double(st.quotient.denominator) + "," + (st.quotient.converged ? "1" : "0") + "," +
           format_double(r.theoretical) + "\n";
    }
    emit(c, s);
  }
  return kExitPass;
}

void add_common(CLI::App* sub, RunConfig& c) {
  sub->add_option("--rel-tol", c.rel_tol, "relative quadrature tolerance");
  sub->add_option("--abs-tol", c.abs_tol, "absolute quadrature tolerance");
  sub->add_option("--out", c.out, "output path (default stdout)");
  sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig c;
  CLI::App app{"Sharp constants, identity checks and Rayleigh quotient scans for Hardy-Rellich inequalities"};
  app.require_subcommand(1);

  auto* constants = app.add_subcommand("constants", "print a constant with its branch metadata");
  constants->add_option("--family", c.family,
                        "hardy, rellich, gradient-rellich, sigma, sigma-bar, amn, mode-quotient, m-star, x0, k-bar, "
                        "thresholds, reduction-a, comparison, higher-order-{laplacian,gradient,mixed}")
      ->required();
  constants->add_option("--N", c.N, "dimension");
  constants->add_option("--m", c.m, "weight m")->expected(1);
  constants->add_option("--k", c.k, "spherical mode, or comparison index 1..6");
  constants->add_option("--l", c.l, "number of weighted steps in the higher order chains");
  add_common(constants, c);

  auto* table = app.add_subcommand("amn-table", "a_mn with argmin mode and branch over a grid of m");
  table->add_option("--N", c.N, "dimension");
  table->add_option("--m", c.m, "comma separated grid of m")->delimiter(',')->required();
  add_common(table, c);

  auto* ver = app.add_subcommand("verify", "run registry identities and inequalities on the random suite");
  ver->add_option("--set", c.set, "identities, inequalities, all, or comma separated target ids");
  ver->add_option("--seed", c.seed, "suite seed");
  ver->add_option("--K", c.K, "series terms for improved inequalities");
  auto* vN = ver->add_option("--N", c.N, "restrict the suite to one dimension");
  ver->add_option("--size", c.size, "number of suite members");
  ver->add_flag("--list", c.list, "list the registry and exit");
  add_common(ver, c);

  auto* sc = app.add_subcommand("scan", "Rayleigh quotients along a minimizing sequence schedule");
  sc->add_option("--family", c.family, "ray1, ray2, t84, e77, amn, cmp1..cmp6")->required();
  sc->add_option("--N", c.N, "dimension");
  sc->add_option("--m", c.m, "weight m")->expected(1);
  sc->add_option("--k", c.k, "spherical mode (amn)");
  sc->add_option("--schedule", c.schedule, "eps:a1,a2;eps:a1,a2;...");
  add_common(sc, c);

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    if (const char* path = std::getenv("RELLICH_CONFIG"); path && *path && !args.empty()) {
      CLI::App* sub = nullptr;
      for (auto* s : app.get_subcommands([](CLI::App*) { return true; }))
        if (s->get_name() == args.front()) sub = s;
      if (sub)
        args = cli::merge_config(args, cli::load_config_file(path),
                                 [sub](const std::string& flag) { return sub->get_option_no_throw(flag) != nullptr; });
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    c.restrict_N = vN->count() > 0;
    if (*constants) {
      emit(c, render_rows(constants_rows(c), c.format));
      return kExitPass;
    }
    if (*table) {
      emit(c, amn_table(c));
      return kExitPass;
    }
    if (*ver) return verify(c);
    return scan(c);
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
  } catch (const hr::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kExitUsage;
}
