#ifndef SNM_ZEROS_HPP
#define SNM_ZEROS_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "snm/errors.hpp"
#include "snm/parallel.hpp"
#include "snm/zeta.hpp"

namespace snm {

/// Sorted positive ordinates of zeta zeros with a uniform absolute accuracy,
/// complete (audited) up to t_max.
struct ZeroList {
  std::vector<double> ordinates;
  double accuracy = 1e-9;
  double t_max = 0.0;

  std::size_t size() const noexcept { return ordinates.size(); }

  /// Number of ordinates <= t.
  std::size_t count_upto(double t) const {
    return static_cast<std::size_t>(std::upper_bound(ordinates.begin(), ordinates.end(), t) -
                                    ordinates.begin());
  }

  /// Number of ordinates < t.
  std::size_t count_below(double t) const {
    return static_cast<std::size_t>(std::lower_bound(ordinates.begin(), ordinates.end(), t) -
                                    ordinates.begin());
  }

  /// Throws PreconditionError unless t is within the completeness horizon.
  void require_complete(double t, const char* what) const {
    if (t > t_max) {
      throw PreconditionError(std::string(what) + ": t = " + std::to_string(t) +
                              " beyond zero list horizon " + std::to_string(t_max));
    }
  }
};

struct ZeroSearchOptions {
  /// Largest admissible t_max.
  double horizon = 1e4;
  /// Nominal width of a search window.
  double window = 50.0;
  /// Grid refinements tried when a window's count disagrees with N(t).
  int max_doublings = 3;
  /// Bracket width at which refinement stops.
  double tolerance = 1e-10;
};

/// A window whose sign-change count disagreed with the argument-principle count.
struct WindowReport {
  double lo = 0.0;
  double hi = 0.0;
  long found = 0;
  long expected = 0;
  int doublings = 0;
};

struct ZeroAudit {
  bool complete = true;
  long expected = 0;
  long found = 0;
  /// Windows whose count needed grid refinement or still disagrees.
  std::vector<WindowReport> windows;
  /// Windows where #{gamma <= t} - theta(t)/pi - 1 reached 2 in absolute value.
  std::vector<WindowReport> deviations;
  double max_abs_s = 0.0;
};

namespace detail {

/// Window boundary near `nominal` where |Z| is not small, so the argument
/// count there is well conditioned.
inline double quiet_point(double nominal) {
  double best = nominal;
  double best_abs = -1.0;
  for (int i = 0; i < 16; ++i) {
    const double offset = (i % 2 == 0 ? 1.0 : -1.0) * 0.07 * ((i + 1) / 2);
    const double t = nominal + offset;
    if (t <= 0.0) continue;
    const double a = std::abs(hardy_z(t));
    if (a > best_abs) {
      best = t;
      best_abs = a;
    }
    if (a > 0.2) break;
  }
  return best;
}

/// Scan grid on [a, b]: quarter-Gram spacing (theta step pi/4) above t = 10,
/// step 0.25 below, both divided by 2^level.
inline std::vector<double> scan_grid(double a, double b, int level) {
  std::vector<double> g{a};
  const double div = std::ldexp(1.0, level);
  double t = a;
  while (true) {
    double step = 0.25 / div;
    if (t >= 10.0) step = std::numbers::pi / 4.0 / div / rs_theta(t).derivative;
    t += step;
    if (t >= b) break;
    g.push_back(t);
  }
  g.push_back(b);
  return g;
}

/// Illinois variant of regula falsi on a sign-changing bracket of Z.
inline double refine_root(double l, double r, double zl, double zr, double tol) {
  int side = 0;
  for (int iter = 0; iter < 200 && r - l > tol; ++iter) {
    double m = (l * zr - r * zl) / (zr - zl);
    if (!(m > l && m < r)) m = 0.5 * (l + r);
    if (iter % 8 == 7) m = 0.5 * (l + r);
    const double zm = hardy_z(m);
    if (zm == 0.0) return m;
    if ((zm > 0) == (zl > 0)) {
      l = m;
      zl = zm;
      if (side == -1) zr *= 0.5;
      side = -1;
    } else {
      r = m;
      zr = zm;
      if (side == 1) zl *= 0.5;
      side = 1;
    }
  }
  return 0.5 * (l + r);
}

inline std::vector<double> scan_window(double a, double b, int level, double tol) {
  const auto grid = scan_grid(a, b, level);
  std::vector<double> z(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) z[i] = hardy_z(grid[i]);
  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (z[i] == 0.0) {
      if (i > 0) roots.push_back(grid[i]);
      continue;
    }
    if ((z[i] > 0) != (z[i + 1] > 0) && z[i + 1] != 0.0) {
      roots.push_back(refine_root(grid[i], grid[i + 1], z[i], z[i + 1], tol));
    }
  }
  return roots;
}

inline std::vector<double> window_bounds(double t_min, double t_max, double width) {
  std::vector<double> b{t_min};
  for (double t = t_min + width; t < t_max - 0.5 * width; t += width) b.push_back(quiet_point(t));
  b.push_back(t_max);
  return b;
}

inline long count_at(double t) { return t <= 0.0 ? 0 : zero_count(t); }

}  // namespace detail

/// All zero ordinates in (t_min, t_max]. Each window's sign-change count is
/// checked against the argument-principle count N(b) - N(a); on mismatch the
/// grid density doubles, at most max_doublings times, after which
/// IncompleteZerosError names the window.
inline ZeroList find_zeros(double t_min, double t_max, const ZeroSearchOptions& opt = {},
                           ZeroAudit* audit = nullptr) {
  if (!(t_min >= 0.0) || !(t_max > t_min)) throw DomainError("find_zeros: need 0 <= t_min < t_max");
  if (t_max > opt.horizon) {
    throw PreconditionError("find_zeros: t_max beyond horizon " + std::to_string(opt.horizon));
  }
  const auto bounds = detail::window_bounds(t_min, t_max, opt.window);
  const std::size_t nw = bounds.size() - 1;
  std::vector<long> counts(bounds.size());
  parallel_for(bounds.size(), [&](std::size_t i) { counts[i] = detail::count_at(bounds[i]); });

  std::vector<std::vector<double>> found(nw);
  std::vector<WindowReport> reports(nw);
  parallel_for(nw, [&](std::size_t w) {
    const long expected = counts[w + 1] - counts[w];
    WindowReport rep{bounds[w], bounds[w + 1], 0, expected, 0};
    for (int level = 0; level <= opt.max_doublings; ++level) {
      found[w] = detail::scan_window(bounds[w], bounds[w + 1], level, opt.tolerance);
      rep.found = static_cast<long>(found[w].size());
      rep.doublings = level;
      if (rep.found == expected) break;
    }
    reports[w] = rep;
  });

  ZeroAudit local;
  ZeroAudit& a = audit ? *audit : local;
  a = ZeroAudit{};
  ZeroList out;
  out.t_max = t_max;
  out.accuracy = std::max(1e-9, opt.tolerance);
  for (std::size_t w = 0; w < nw; ++w) {
    a.expected += reports[w].expected;
    a.found += reports[w].found;
    if (reports[w].doublings > 0 || reports[w].found != reports[w].expected) {
      a.windows.push_back(reports[w]);
    }
    if (reports[w].found != reports[w].expected) a.complete = false;
    out.ordinates.insert(out.ordinates.end(), found[w].begin(), found[w].end());
  }
  if (!a.complete) {
    for (const auto& r : a.windows) {
      if (r.found != r.expected) throw IncompleteZerosError(r.lo, r.hi, r.found, r.expected);
    }
  }

  // Running count against theta/pi + 1, sampled just after each ordinate and
  // midway between neighbours.
  std::vector<double> probe;
  for (std::size_t i = 0; i < out.ordinates.size(); ++i) {
    probe.push_back(out.ordinates[i] + 1e-7);
    const double next = i + 1 < out.ordinates.size() ? out.ordinates[i + 1] : t_max;
    probe.push_back(0.5 * (out.ordinates[i] + next));
  }
  const long base = detail::count_at(t_min);
  for (double t : probe) {
    if (t > t_max) continue;
    const double s = static_cast<double>(base + static_cast<long>(out.count_upto(t))) -
                     rs_theta(t).theta / std::numbers::pi - 1.0;
    a.max_abs_s = std::max(a.max_abs_s, std::abs(s));
    if (std::abs(s) >= 2.0) {
      const auto w = static_cast<std::size_t>(
          std::upper_bound(bounds.begin(), bounds.end(), t) - bounds.begin()) - 1;
      const std::size_t k = std::min(w, nw - 1);
      if (a.deviations.empty() || a.deviations.back().lo != bounds[k]) {
        a.deviations.push_back(reports[k]);
      }
    }
  }
  return out;
}

/// Recounts a list against the argument principle, window by window.
inline ZeroAudit audit_zeros(const ZeroList& list, double window = 50.0) {
  ZeroAudit a;
  if (list.t_max <= 0.0) return a;
  const auto bounds = detail::window_bounds(0.0, list.t_max, window);
  std::vector<long> counts(bounds.size());
  parallel_for(bounds.size(), [&](std::size_t i) { counts[i] = detail::count_at(bounds[i]); });
  for (std::size_t w = 0; w + 1 < bounds.size(); ++w) {
    WindowReport r;
    r.lo = bounds[w];
    r.hi = bounds[w + 1];
    r.expected = counts[w + 1] - counts[w];
    r.found = static_cast<long>(list.count_upto(r.hi)) - static_cast<long>(list.count_upto(r.lo));
    a.expected += r.expected;
    a.found += r.found;
    if (r.found != r.expected) {
      a.complete = false;
      a.windows.push_back(r);
    }
  }
  for (std::size_t i = 0; i < list.ordinates.size(); ++i) {
    const double t = list.ordinates[i] + 1e-7;
    const double s = static_cast<double>(i + 1) - rs_theta(t).theta / std::numbers::pi - 1.0;
    a.max_abs_s = std::max(a.max_abs_s, std::abs(s));
  }
  return a;
}

/// Shortest decimal that reads back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string format_zeros(const ZeroList& list) {
  std::string out;
  out += "# accuracy = " + format_double(list.accuracy) + "\n";
  out += "# t_max = " + format_double(list.t_max) + "\n";
  for (double g : list.ordinates) {
    out += format_double(g);
    out += '\n';
  }
  return out;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline bool parse_number(std::string_view s, double& v) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(v);
}

}  // namespace detail

/// Parses the text format: one ascending decimal per line, '#' comments,
/// optional "# accuracy = v" and "# t_max = v" metadata. Without a t_max
/// line the horizon is the last ordinate.
inline ZeroList parse_zeros(std::string_view text, double default_accuracy = 1e-9) {
  ZeroList list;
  list.accuracy = default_accuracy;
  bool have_tmax = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '#') {
      auto body = detail::trim(line.substr(1));
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) continue;
      const auto key = detail::trim(body.substr(0, eq));
      const auto val = detail::trim(body.substr(eq + 1));
      double v = 0.0;
      if (key == "accuracy" || key == "t_max") {
        if (!detail::parse_number(val, v) || !(v >= 0.0)) {
          throw ParseError(line_no, "bad metadata value '" + std::string(val) + "'");
        }
        if (key == "accuracy") {
          list.accuracy = v;
        } else {
          list.t_max = v;
          have_tmax = true;
        }
      }
      continue;
    }
    double v = 0.0;
    if (!detail::parse_number(line, v)) {
      throw ParseError(line_no, "not a decimal number: '" + std::string(line) + "'");
    }
    if (!(v > 0.0)) throw ParseError(line_no, "ordinate must be positive");
    if (!list.ordinates.empty() && !(v > list.ordinates.back())) {
      throw ParseError(line_no, "ordinates must be strictly increasing");
    }
    list.ordinates.push_back(v);
  }
  if (!have_tmax) list.t_max = list.ordinates.empty() ? 0.0 : list.ordinates.back();
  if (!list.ordinates.empty() && list.ordinates.back() > list.t_max) {
    throw ParseError(line_no, "ordinate beyond declared t_max");
  }
  return list;
}

inline void save_zeros(const ZeroList& list, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  const std::string text = format_zeros(list);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("cannot write zero list to " + path.string());
}

inline ZeroList load_zeros(const std::filesystem::path& path, double default_accuracy = 1e-9) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open zero list " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_zeros(ss.str(), default_accuracy);
}

}  // namespace snm

#endif  // SNM_ZEROS_HPP
