// snm: command-line front end for the library.
//
// Exit codes: 0 success, 2 invalid arguments, 3 computation failure, 4 I/O.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "output.hpp"
#include "snm/arithmetic.hpp"
#include "snm/cache.hpp"
#include "snm/constants.hpp"
#include "snm/errors.hpp"
#include "snm/moments.hpp"
#include "snm/parallel.hpp"
#include "snm/prime_table.hpp"
#include "snm/special.hpp"
#include "snm/zeros.hpp"

namespace {

using snm::cli::json;

constexpr const char* kToolVersion = "0.1.0";

struct Globals {
  std::string config;
  bool no_cache = false;
  unsigned threads = 0;
  std::string format;
  std::string out;
};

struct Outcome {
  json payload = json::object();
  /// Text written to --out instead of the rendered payload (zero lists).
  std::string raw_file;
  bool use_raw = false;
  bool cache_hit = false;
};

snm::Cache& cache() {
  static snm::Cache c = snm::Cache::from_environment();
  return c;
}

std::string key_number(double v) { return snm::format_double(v); }

snm::PrimeTable prime_table(std::uint64_t limit, const Globals& g, bool* hit = nullptr) {
  limit = std::max<std::uint64_t>(limit, 2);
  const std::string key = "sieve:limit=" + std::to_string(limit) + ":v" + std::to_string(snm::PrimeTable::kFormatVersion);
  const std::string bytes =
      cache().get_or_make(key, [&] { return snm::sieve(limit).to_bytes(); }, !g.no_cache, hit);
  return snm::PrimeTable::from_bytes(bytes);
}

snm::ZeroList computed_zeros(double t_min, double t_max, const Globals& g, bool* hit = nullptr,
                             snm::ZeroAudit* audit = nullptr) {
  const std::string key = "zeros:tmin=" + key_number(t_min) + ":tmax=" + key_number(t_max) + ":v1";
  bool local_hit = false;
  const std::string text = cache().get_or_make(
      key,
      [&] {
        snm::ZeroAudit a;
        auto list = snm::find_zeros(t_min, t_max, {}, &a);
        if (audit) *audit = a;
        return snm::format_zeros(list);
      },
      !g.no_cache, &local_hit);
  if (hit) *hit = local_hit;
  auto list = snm::parse_zeros(text);
  if (local_hit && audit) *audit = snm::audit_zeros(list);
  return list;
}

/// Zeros from --zeros if given, otherwise computed (and cached) up to `needed`.
snm::ZeroList zeros_for(const std::string& file, double needed, const Globals& g, bool* hit) {
  if (!file.empty()) {
    auto list = snm::load_zeros(file);
    list.require_complete(needed, "zero file");
    return list;
  }
  const double t_max = std::max(1000.0, std::ceil(needed / 500.0) * 500.0);
  return computed_zeros(0.0, t_max, g, hit);
}

std::vector<int> parse_orders(const std::string& spec) {
  std::vector<int> out;
  const auto dots = spec.find("..");
  try {
    if (dots == std::string::npos) {
      out.push_back(std::stoi(spec));
    } else {
      const int a = std::stoi(spec.substr(0, dots));
      const int b = std::stoi(spec.substr(dots + 2));
      if (b < a) throw snm::DomainError("empty order range " + spec);
      for (int n = a; n <= b; ++n) out.push_back(n);
    }
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const snm::DomainError*>(&e)) throw;
    throw snm::DomainError("bad order specification '" + spec + "'");
  }
  for (int n : out) snm::check_order(n);
  return out;
}

std::vector<double> parse_alpha_grid(const std::string& spec) {
  std::vector<double> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      parts.push_back(std::stod(item));
    } catch (const std::logic_error&) {
      throw snm::DomainError("bad alpha grid '" + spec + "'");
    }
  }
  if (parts.size() == 1) return parts;
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
    throw snm::DomainError("alpha grid must be start:stop:step with step > 0");
  }
  std::vector<double> grid;
  const auto count = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
  for (long i = 0; i <= count; ++i) grid.push_back(parts[0] + static_cast<double>(i) * parts[2]);
  return grid;
}

snm::QuadratureSpec spec_with_tol(double tol) {
  snm::QuadratureSpec q;
  if (tol > 0.0) {
    q.abs_tol = tol;
    q.rel_tol = tol;
  }
  q.validate();
  return q;
}

/// Truncation to the given number of decimals, as printed with a trailing "...".
std::string truncate_decimals(double v, int decimals) {
  const double scale = std::pow(10.0, decimals);
  const double t = std::floor(v * scale + 1e-9) / scale;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, t);
  return buf;
}

/// Outward rounding to `digits` significant digits.
std::string outward(double v, int digits, bool up) {
  const int e = static_cast<int>(std::floor(std::log10(std::abs(v))));
  const double scale = std::pow(10.0, digits - 1 - e);
  const double r = (up ? std::ceil(v * scale) : std::floor(v * scale)) / scale;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", std::max(0, digits - 1 - e), r);
  return buf;
}

Outcome table_command(int which, const Globals& g) {
  if (which != 1 && which != 2) throw snm::DomainError("--which must be 1 or 2");
  Outcome o;
  const auto table = prime_table(static_cast<std::uint64_t>(snm::default_x(1)), g, &o.cache_hit);
  json rows = json::array();
  const double two_pi2 = 2.0 * std::numbers::pi * std::numbers::pi;
  for (int n = 1; n <= 10; ++n) {
    const double x = snm::default_x(n);
    const auto e = snm::cn_enclosure(n, x, table);
    json row;
    row["n"] = n;
    row["x"] = x;
    if (which == 1) {
      row["value"] = e.midpoint() / two_pi2;
      row["printed"] = truncate_decimals(e.midpoint() / two_pi2, 6);
    } else {
      row["lo"] = e.lo;
      row["hi"] = e.hi;
      row["lo_printed"] = outward(e.lo, 9, false);
      row["hi_printed"] = outward(e.hi, 9, true);
    }
    rows.push_back(row);
  }
  o.payload["table"] = which;
  o.payload["rows"] = rows;
  return o;
}

/// Appends key=value pairs from the config file as flags unless the command
/// line already has them.
std::vector<std::string> apply_config(std::vector<std::string> args, CLI::App& app) {
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw snm::IoError("cannot open config file " + path);
  auto present = [&](const std::string& flag) {
    return std::any_of(args.begin(), args.end(),
                       [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
  };
  std::function<const CLI::Option*(const CLI::App*, const std::string&)> find =
      [&](const CLI::App* a, const std::string& flag) -> const CLI::Option* {
    if (const auto* opt = a->get_option_no_throw(flag)) return opt;
    for (const auto* sub : a->get_subcommands([](const CLI::App*) { return true; })) {
      if (const auto* opt = find(sub, flag)) return opt;
    }
    return nullptr;
  };
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> extra;
  while (std::getline(in, line)) {
    ++line_no;
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw snm::DomainError("config line " + std::to_string(line_no) + ": expected key=value");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string flag = "--" + key;
    if (key == "config" || present(flag)) continue;
    const CLI::Option* opt = find(&app, flag);
    if (!opt) throw snm::DomainError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (opt->get_expected_min() == 0) {
      if (value == "true" || value == "1" || value == "yes") extra.push_back(flag);
    } else {
      extra.push_back(flag);
      extra.push_back(value);
    }
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

std::string infer_format(const Globals& g) {
  if (!g.format.empty()) return g.format;
  auto ends = [&](const char* ext) {
    const std::string e(ext);
    return g.out.size() >= e.size() && g.out.compare(g.out.size() - e.size(), e.size(), e) == 0;
  };
  if (ends(".csv")) return "csv";
  if (ends(".txt")) return "text";
  return "json";
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw snm::IoError("cannot write output file " + path);
}

int report_error(const std::string& kind, const std::string& message, int code, json extra = json::object()) {
  json err;
  err["kind"] = kind;
  err["message"] = message;
  err["exit_code"] = code;
  for (const auto& [k, v] : extra.items()) err[k] = v;
  std::cerr << json{{"error", err}}.dump() << std::endl;
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  const auto started = std::chrono::steady_clock::now();
  std::vector<std::string> args(argv, argv + argc);

  CLI::App app{"Second moments of S_n(t): constants, special functions, zeta zeros and moment checks", "snm"};
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "Flat key=value file supplying option defaults");
  app.add_flag("--no-cache", g.no_cache, "Ignore and do not update the cache");
  app.add_option("--threads", g.threads, "Worker threads (default: SNM_THREADS or all cores)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--out", g.out, "Output file");

  Outcome result;
  std::function<Outcome()> action;

  // arith
  auto* arith = app.add_subcommand("arith", "Prime sums");
  arith->require_subcommand(1);
  double arith_x = 0.0;
  for (const char* q : {"m", "n", "p", "theta"}) {
    auto* sub = arith->add_subcommand(q, std::string("Prime sum ") + q + "(x)");
    sub->add_option("--x", arith_x, "Argument")->required();
    const std::string which = q;
    sub->callback([&, which] {
      action = [&, which] {
        if (!(arith_x >= 0.0) || arith_x > 1e10) throw snm::DomainError("--x must lie in [0, 1e10]");
        Outcome o;
        const auto table = prime_table(static_cast<std::uint64_t>(std::floor(arith_x)), g, &o.cache_hit);
        double v = 0.0;
        if (which == "m") v = snm::big_m(arith_x, table);
        if (which == "n") v = snm::big_n(arith_x, table);
        if (which == "p") v = snm::p_sum(arith_x, table);
        if (which == "theta") v = snm::chebyshev_theta(arith_x, table);
        o.payload["quantity"] = which;
        o.payload["x"] = arith_x;
        o.payload["value"] = v;
        if (which == "m" && arith_x >= snm::kTailMinX) {
          const auto band = snm::m_band(arith_x);
          o.payload["band_lo"] = band.lower;
          o.payload["band_hi"] = band.upper;
        }
        return o;
      };
    });
  }
  arith->add_subcommand("c0", "c0 = N(600) - theta(600) log 600 + 600")->callback([&] {
    action = [&] {
      Outcome o;
      const auto table = prime_table(600, g, &o.cache_hit);
      o.payload["quantity"] = "c0";
      o.payload["value"] = snm::c0_constant(table);
      return o;
    };
  });

  // special
  auto* special = app.add_subcommand("special", "Special functions and constants");
  special->require_subcommand(1);
  std::string sp_fn;
  int sp_n = 1;
  double sp_x = 0.0;
  double sp_tol = 0.0;
  std::string sp_which;
  auto* sp_eval = special->add_subcommand("eval", "Evaluate g, f, k or khat");
  sp_eval->add_option("--fn", sp_fn)->required()->check(CLI::IsMember({"g", "f", "k", "khat"}));
  sp_eval->add_option("--n", sp_n)->required();
  sp_eval->add_option("--x", sp_x, "Argument (y for khat)")->required();
  sp_eval->add_option("--tol", sp_tol, "Absolute and relative tolerance");
  sp_eval->callback([&] {
    action = [&] {
      const auto q = spec_with_tol(sp_tol);
      snm::Estimate e;
      if (sp_fn == "g") e = snm::eval_g(sp_n, sp_x, q);
      if (sp_fn == "f") e = snm::eval_f(sp_n, sp_x, q, true);
      if (sp_fn == "k") e = snm::eval_k(sp_n, sp_x, q);
      if (sp_fn == "khat") e = snm::eval_k_hat(sp_n, sp_x, q);
      Outcome o;
      o.payload["fn"] = sp_fn;
      o.payload["n"] = sp_n;
      o.payload["x"] = sp_x;
      o.payload["value"] = e.value;
      o.payload["error"] = e.error;
      return o;
    };
  });
  auto* sp_const = special->add_subcommand("const", "mu_n, delta_n or A_n");
  sp_const->add_option("--which", sp_which)->required()->check(CLI::IsMember({"mu", "delta", "A"}));
  sp_const->add_option("--n", sp_n)->required();
  sp_const->add_option("--tol", sp_tol, "Absolute and relative tolerance");
  sp_const->callback([&] {
    action = [&] {
      const auto q = spec_with_tol(sp_tol);
      snm::Estimate e;
      if (sp_which == "mu") e = {snm::mu(sp_n), 0.0};
      if (sp_which == "delta") e = snm::delta(sp_n, q);
      if (sp_which == "A") e = snm::a_constant(sp_n, q);
      Outcome o;
      o.payload["which"] = sp_which;
      o.payload["n"] = sp_n;
      o.payload["value"] = e.value;
      o.payload["error"] = e.error;
      return o;
    };
  });

  // constants
  auto* constants = app.add_subcommand("constants", "Enclosures of C_n");
  constants->require_subcommand(1);
  std::string cn_orders = "1..10";
  double cn_x = 0.0;
  int table_which = 0;
  auto* cn = constants->add_subcommand("cn", "Enclosures for C_n");
  cn->add_option("--n", cn_orders, "Order or range a..b");
  cn->add_option("--x", cn_x, "Partial sum cut (default x_n per order)");
  cn->callback([&] {
    action = [&] {
      const auto orders = parse_orders(cn_orders);
      if (cn_x != 0.0 && !(cn_x >= snm::kTailMinX && cn_x <= 1e10)) throw snm::DomainError("--x must be in [1e5, 1e10]");
      double top = 0.0;
      for (int n : orders) top = std::max(top, cn_x > 0.0 ? cn_x : snm::default_x(n));
      Outcome o;
      const auto table = prime_table(static_cast<std::uint64_t>(top), g, &o.cache_hit);
      json rows = json::array();
      for (int n : orders) {
        const double x = cn_x > 0.0 ? cn_x : snm::default_x(n);
        const auto e = snm::cn_enclosure(n, x, table);
        rows.push_back({{"n", n},
                        {"x", x},
                        {"lo", e.lo},
                        {"hi", e.hi},
                        {"midpoint", e.midpoint()},
                        {"midpoint_over_2pi2", e.midpoint() / (2.0 * std::numbers::pi * std::numbers::pi)}});
      }
      o.payload["rows"] = rows;
      return o;
    };
  });
  auto* ctable = constants->add_subcommand("table", "Reproduce table 1 or 2");
  ctable->add_option("--which", table_which)->required();
  ctable->callback([&] { action = [&] { return table_command(table_which, g); }; });

  auto* tables = app.add_subcommand("tables", "Reproduce table 1 or 2");
  tables->add_option("--which", table_which)->required();
  tables->callback([&] { action = [&] { return table_command(table_which, g); }; });

  // zeros
  auto* zeros = app.add_subcommand("zeros", "Zeros of zeta on the critical line");
  zeros->require_subcommand(1);
  double z_tmin = 0.0;
  double z_tmax = 0.0;
  std::string z_file;
  auto* zc = zeros->add_subcommand("compute", "Find all ordinates up to --tmax");
  zc->add_option("--tmin", z_tmin);
  zc->add_option("--tmax", z_tmax)->required();
  zc->callback([&] {
    action = [&] {
      Outcome o;
      snm::ZeroAudit audit;
      const auto list = computed_zeros(z_tmin, z_tmax, g, &o.cache_hit, &audit);
      o.payload["t_min"] = z_tmin;
      o.payload["t_max"] = list.t_max;
      o.payload["count"] = list.size();
      o.payload["expected"] = audit.expected;
      o.payload["accuracy"] = list.accuracy;
      o.payload["max_abs_s"] = audit.max_abs_s;
      o.payload["deviation_windows"] = audit.deviations.size();
      o.raw_file = snm::format_zeros(list);
      o.use_raw = true;
      return o;
    };
  });
  auto* za = zeros->add_subcommand("audit", "Recount a zero file with the argument principle");
  za->add_option("--file", z_file)->required();
  za->callback([&] {
    action = [&] {
      const auto list = snm::load_zeros(z_file);
      const auto audit = snm::audit_zeros(list);
      Outcome o;
      o.payload["file"] = z_file;
      o.payload["t_max"] = list.t_max;
      o.payload["count"] = list.size();
      o.payload["expected"] = audit.expected;
      o.payload["complete"] = audit.complete;
      o.payload["max_abs_s"] = audit.max_abs_s;
      json rows = json::array();
      for (const auto& w : audit.windows) {
        rows.push_back({{"lo", w.lo}, {"hi", w.hi}, {"found", w.found}, {"expected", w.expected}});
      }
      o.payload["rows"] = rows;
      if (!audit.complete) {
        const auto& w = audit.windows.front();
        throw snm::IncompleteZerosError(w.lo, w.hi, w.found, w.expected);
      }
      return o;
    };
  });

  // moments
  auto* moments = app.add_subcommand("moments", "Moments, pair correlation and representation checks");
  moments->require_subcommand(1);
  int m_n = 1;
  double m_T = 5000.0;
  std::string m_zeros;
  double m_alpha_max = 8.0;
  std::string m_alpha = "0:3:0.05";
  std::string m_method = "direct";
  double m_t = 150.0;
  double m_x = 1000.0;
  double m_window = 50.0;
  auto* mrun = moments->add_subcommand("run", "Second moment of S_n against the predictions");
  mrun->add_option("--n", m_n);
  mrun->add_option("--T", m_T);
  mrun->add_option("--zeros", m_zeros, "Zero file (default: computed)");
  mrun->add_option("--alpha-max", m_alpha_max);
  mrun->callback([&] {
    action = [&] {
      snm::check_order(m_n);
      if (!(m_T >= 10.0 && m_T <= 1e4)) throw snm::DomainError("--T must lie in [10, 1e4]");
      Outcome o;
      const auto list = zeros_for(m_zeros, m_T, g, &o.cache_hit);
      const snm::SnEvaluator eval(list, m_n);
      const auto table = prime_table(static_cast<std::uint64_t>(snm::default_x(m_n)), g);
      const double cn_mid = snm::cn_enclosure(m_n, snm::default_x(m_n), table).midpoint();
      const auto r = snm::moment_report(m_n, m_T, eval, cn_mid, m_alpha_max);
      o.payload["n"] = r.n;
      o.payload["T"] = r.T;
      o.payload["empirical"] = r.empirical;
      o.payload["prediction_main"] = r.prediction_main;
      o.payload["prediction_full"] = r.prediction_full;
      o.payload["f_int_measured"] = r.f_int_measured;
      o.payload["relative_gap"] = r.relative_gap;
      return o;
    };
  });
  auto* mf = moments->add_subcommand("falpha", "F(alpha, T) on a grid");
  mf->add_option("--T", m_T);
  mf->add_option("--alpha", m_alpha, "start:stop:step or a single value");
  mf->add_option("--zeros", m_zeros);
  mf->add_option("--method", m_method)->check(CLI::IsMember({"direct", "spectral"}));
  mf->callback([&] {
    action = [&] {
      if (!(m_T >= 10.0 && m_T <= 1e4)) throw snm::DomainError("--T must lie in [10, 1e4]");
      const auto grid = parse_alpha_grid(m_alpha);
      Outcome o;
      const auto list = zeros_for(m_zeros, m_T, g, &o.cache_hit);
      json rows = json::array();
      for (double a : grid) {
        const auto f = m_method == "direct" ? snm::f_alpha(a, m_T, list) : snm::f_alpha_spectral(a, m_T, list);
        rows.push_back({{"alpha", a}, {"F", f.value}, {"zero_count", f.zero_count}});
      }
      o.payload["T"] = m_T;
      o.payload["method"] = m_method;
      o.payload["rows"] = rows;
      return o;
    };
  });
  auto* mr = moments->add_subcommand("represent", "Representation of S_n(t) by zeros and primes");
  mr->add_option("--n", m_n);
  mr->add_option("--t", m_t);
  mr->add_option("--x", m_x);
  mr->add_option("--window", m_window);
  mr->add_option("--zeros", m_zeros);
  mr->callback([&] {
    action = [&] {
      snm::check_order(m_n);
      if (!(m_t >= 1.0 && m_t + m_window <= 1e4)) throw snm::DomainError("need 1 <= t and t + window <= 1e4");
      if (!(m_x >= 4.0 && m_x <= 1e7)) throw snm::DomainError("--x must lie in [4, 1e7]");
      Outcome o;
      const auto list = zeros_for(m_zeros, m_t + m_window, g, &o.cache_hit);
      const snm::SnEvaluator eval(list, m_n);
      const auto table = prime_table(static_cast<std::uint64_t>(m_x), g);
      const auto r = snm::representation_residual(m_n, m_t, m_x, m_window, eval, table);
      o.payload["n"] = m_n;
      o.payload["t"] = m_t;
      o.payload["x"] = m_x;
      o.payload["window"] = m_window;
      o.payload["s_n"] = r.s_n;
      o.payload["zero_sum"] = r.zero_sum;
      o.payload["prime_sum"] = r.prime_sum;
      o.payload["mu_term"] = r.mu_term;
      o.payload["residual"] = r.residual;
      o.payload["window_tail"] = r.window_tail;
      o.payload["truncation_allowance"] = r.truncation_allowance;
      o.payload["error_scale"] = r.error_scale;
      o.payload["window_zeros"] = r.window_zeros;
      return o;
    };
  });

  try {
    args = apply_config(args, app);
    std::vector<char*> cargs;
    for (auto& a : args) cargs.push_back(a.data());
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << app.help() << std::endl;
    return report_error("usage", e.what(), 2);
  } catch (const snm::IoError& e) {
    return report_error("io", e.what(), 4);
  } catch (const std::exception& e) {
    return report_error("validation", e.what(), 2);
  }

  try {
    if (g.threads > 0) snm::set_worker_count(g.threads);
    result = action();
    const std::string format = infer_format(g);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    if (!g.out.empty()) {
      write_file(g.out, result.use_raw ? result.raw_file : snm::cli::render(result.payload, format));
    }
    if (g.out.empty() && format != "json") {
      std::cout << snm::cli::render(result.payload, format);
    } else {
      json env;
      env["tool_version"] = kToolVersion;
      env["command"] = std::vector<std::string>(args.begin() + 1, args.end());
      env["wall_time_seconds"] = wall;
      env["cache_hit"] = result.cache_hit;
      env["payload"] = result.payload;
      if (!g.out.empty()) env["output_file"] = g.out;
      snm::cli::round_numbers(env);
      std::cout << env.dump(2) << std::endl;
    }
    return 0;
  } catch (const snm::IncompleteZerosError& e) {
    return report_error("incomplete_zeros", e.what(), 3, {{"window_lo", e.window_lo()}, {"window_hi", e.window_hi()}});
  } catch (const snm::ParseError& e) {
    return report_error("parse", e.what(), 4, {{"line", e.line()}});
  } catch (const snm::IoError& e) {
    return report_error("io", e.what(), 4);
  } catch (const snm::DomainError& e) {
    return report_error("validation", e.what(), 2);
  } catch (const snm::PreconditionError& e) {
    return report_error("validation", e.what(), 2);
  } catch (const std::exception& e) {
    return report_error("computation", e.what(), 3);
  }
}
