#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "formsim/estimator.hpp"
#include "formsim/scenario.hpp"
#include "formsim/simlog.hpp"

namespace formsim {

// Ordered flat key/value summary; serialized one `key = value` per line.
struct Metrics {
  std::vector<std::pair<std::string, double>> values;

  void set(const std::string& key, double v) { values.emplace_back(key, v); }
  bool has(const std::string& key) const {
    for (const auto& [k, v] : values)
      if (k == key) return true;
    return false;
  }
  double get(const std::string& key) const {
    for (const auto& [k, v] : values)
      if (k == key) return v;
    throw std::out_of_range("no metric named '" + key + "'");
  }
};

enum class DisturbanceChannel { velocity, acceleration };

namespace detail {

inline std::pair<std::size_t, std::size_t> window_rows(const std::vector<double>& t,
                                                       double t_begin, double t_end) {
  std::size_t lo = 0;
  while (lo < t.size() && t[lo] < t_begin) ++lo;
  std::size_t hi = t.size();
  while (hi > lo && t[hi - 1] > t_end) --hi;
  if (lo >= hi) throw std::invalid_argument("empty measurement window");
  return {lo, hi};
}

inline double max_abs(const SimLog& log, const std::string& col, std::size_t lo, std::size_t hi) {
  const int c = log.column(col);
  double m = 0.0;
  for (std::size_t r = lo; r < hi; ++r) m = std::max(m, std::abs(log.at(r, c)));
  return m;
}

inline double min_value(const SimLog& log, const std::string& col, std::size_t lo,
                        std::size_t hi) {
  const int c = log.column(col);
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t r = lo; r < hi; ++r) m = std::min(m, log.at(r, c));
  return m;
}

inline const AgentSpec* leader_agent(const ScenarioConfig& cfg) {
  for (const auto& a : cfg.graph.agents) {
    bool has_out = false;
    for (const auto& e : cfg.graph.x_edges)
      if (e.follower == a.id) has_out = true;
    for (const auto& e : cfg.graph.y_edges)
      if (e.follower == a.id) has_out = true;
    if (!has_out && a.profile) return &a;
  }
  return nullptr;
}

}  // namespace detail

// Half peak-to-peak amplitude of a column over [t_begin, t_end].
inline double half_peak_to_peak(const SimLog& log, const std::string& col, double t_begin,
                                double t_end) {
  const auto t = log.times();
  const auto [lo, hi] = detail::window_rows(t, t_begin, t_end);
  const int c = log.column(col);
  double mn = log.at(lo, c), mx = log.at(lo, c);
  for (std::size_t r = lo; r < hi; ++r) {
    mn = std::min(mn, log.at(r, c));
    mx = std::max(mx, log.at(r, c));
  }
  return 0.5 * (mx - mn);
}

// Disturbance amplitudes and per-follower string-stability gains S, measured
// over the final `periods` disturbance periods of the log. The scenario must
// drive its leader with a sinusoid profile. Formation string stable iff every
// follower attenuates (S < 1).
inline Metrics string_stability_gain(const SimLog& log, const ScenarioConfig& cfg,
                                     DisturbanceChannel channel, int periods = 3) {
  const AgentSpec* leader = detail::leader_agent(cfg);
  if (leader == nullptr || !leader->profile)
    throw std::invalid_argument("string stability requires a profiled leader");
  const LeaderProfile& prof = *leader->profile;
  if (prof.kind != ProfileKind::sinusoid_velocity &&
      prof.kind != ProfileKind::sinusoid_acceleration)
    throw std::invalid_argument("string stability requires a sinusoidal disturbance profile");
  const double period = 2.0 * kPi / prof.frequency;
  const auto t = log.times();
  const double span = t.back() - t.front();
  if (span < period)
    throw std::invalid_argument("log window shorter than one disturbance period");
  const int usable = std::min<int>(periods, static_cast<int>(span / period));
  const double t_begin = t.back() - usable * period;

  const std::string field = channel == DisturbanceChannel::velocity ? ".v" : ".u";
  Metrics m;
  const double leader_amp = half_peak_to_peak(log, leader->id + field, t_begin, t.back());
  m.set("amplitude." + leader->id, leader_amp);

  double s_sum = 0.0;
  int s_count = 0;
  bool stable = true;
  for (const auto& a : cfg.graph.agents) {
    if (a.id == leader->id) continue;
    const double amp = half_peak_to_peak(log, a.id + field, t_begin, t.back());
    m.set("amplitude." + a.id, amp);
    const double s = amp / leader_amp;
    m.set("S." + a.id, s);
    s_sum += s;
    ++s_count;
    if (!(s < 1.0)) stable = false;
  }
  if (s_count > 0) {
    m.set("S_mean", s_sum / s_count);
    m.set("string_stable", stable ? 1.0 : 0.0);
  }
  return m;
}

struct BoundCheck {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool is_lower_bound = false;  // pass when value >= bound
  bool pass = false;
};

struct BoundReport {
  std::vector<BoundCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Discretization allowance when asserting barrier non-negativity.
inline constexpr double kBarrierTolerance = 1e-3;

// Post-transient maxima of the logged estimation and tracking errors against
// the analytic ultimate bounds, plus the barrier minima.
inline BoundReport bound_report(const SimLog& log, const ScenarioConfig& cfg,
                                const GuubBounds& bounds) {
  const EstimatorGains gains = derive_gains(cfg.g_d);
  const auto t = log.times();
  const auto [lo, hi] = detail::window_rows(t, cfg.transient_time(), t.back());

  BoundReport rep;
  auto upper = [&rep](const std::string& name, double value, double bound) {
    rep.checks.push_back({name, value, bound, false, value <= bound});
  };
  auto lower = [&rep](const std::string& name, double value, double bound) {
    rep.checks.push_back({name, value, bound, true, value >= bound});
  };

  const double vel_bound = velocity_envelope(gains, bounds);
  for (const auto& col : log.columns()) {
    auto ends_with = [&col](const char* suffix) {
      const std::string s(suffix);
      return col.size() > s.size() && col.compare(col.size() - s.size(), s.size(), s) == 0;
    };
    if (col.rfind("est.", 0) == 0) {
      if (ends_with(".e_dx") || ends_with(".e_dy"))
        upper("max |" + col + "|", detail::max_abs(log, col, lo, hi), bounds.eps_d);
      else if (ends_with(".e_vx") || ends_with(".e_vy"))
        upper("max |" + col + "|", detail::max_abs(log, col, lo, hi), vel_bound);
    } else if (col.rfind("x.", 0) == 0 && ends_with(".track")) {
      upper("max |" + col + "|", detail::max_abs(log, col, lo, hi), bounds.eps_x + bounds.eps_d);
    } else if (col.rfind("y.", 0) == 0 && ends_with(".track")) {
      upper("max |" + col + "|", detail::max_abs(log, col, lo, hi), bounds.eps_y + bounds.eps_d);
    } else if (col.rfind("x.", 0) == 0 && ends_with(".h1")) {
      lower("min " + col, detail::min_value(log, col, lo, hi), -kBarrierTolerance);
    } else if (col.rfind("y.", 0) == 0 && ends_with(".h2")) {
      lower("min " + col, detail::min_value(log, col, lo, hi), -kBarrierTolerance);
    }
  }
  return rep;
}

// Flat summary of a run: barrier minima, post-transient error maxima,
// saturation/geometry counters, and (for sinusoid scenarios) amplitudes and S.
inline Metrics summarize(const SimLog& log, const ScenarioConfig& cfg) {
  Metrics m;
  const auto t = log.times();
  m.set("rows", static_cast<double>(log.row_count()));
  m.set("t_end", t.back());
  const auto [plo, phi] = detail::window_rows(t, cfg.transient_time(), t.back());

  double min_h1 = std::numeric_limits<double>::infinity();
  double min_h2 = min_h1, min_h1_post = min_h1, min_h2_post = min_h1;
  for (const auto& col : log.columns()) {
    auto ends_with = [&col](const char* suffix) {
      const std::string s(suffix);
      return col.size() > s.size() && col.compare(col.size() - s.size(), s.size(), s) == 0;
    };
    if (col.rfind("x.", 0) == 0 && ends_with(".h1")) {
      min_h1 = std::min(min_h1, detail::min_value(log, col, 0, log.row_count()));
      min_h1_post = std::min(min_h1_post, detail::min_value(log, col, plo, phi));
    } else if (col.rfind("y.", 0) == 0 && ends_with(".h2")) {
      min_h2 = std::min(min_h2, detail::min_value(log, col, 0, log.row_count()));
      min_h2_post = std::min(min_h2_post, detail::min_value(log, col, plo, phi));
    } else if (col.rfind("est.", 0) == 0 &&
               (ends_with(".e_dx") || ends_with(".e_vx") || ends_with(".e_dy") ||
                ends_with(".e_vy") || ends_with(".pos_err") || ends_with(".vel_err"))) {
      m.set("max_abs." + col, detail::max_abs(log, col, plo, phi));
    } else if ((col.rfind("x.", 0) == 0 || col.rfind("y.", 0) == 0) && ends_with(".track")) {
      m.set("max_abs." + col, detail::max_abs(log, col, plo, phi));
    }
  }
  if (std::isfinite(min_h1)) {
    m.set("min_h1", min_h1);
    m.set("min_h1_post_transient", min_h1_post);
  }
  if (std::isfinite(min_h2)) {
    m.set("min_h2", min_h2);
    m.set("min_h2_post_transient", min_h2_post);
  }

  // saturation: commanded vs applied inputs
  for (const auto& a : cfg.graph.agents) {
    if (!log.has_column(a.id + ".u_cmd")) continue;
    long sat = 0;
    const int uc = log.column(a.id + ".u_cmd"), ua = log.column(a.id + ".u");
    const int oc = log.column(a.id + ".omega_cmd"), oa = log.column(a.id + ".omega");
    for (std::size_t r = 0; r < log.row_count(); ++r)
      if (log.at(r, uc) != log.at(r, ua) || log.at(r, oc) != log.at(r, oa)) ++sat;
    m.set("saturation_steps." + a.id, static_cast<double>(sat));
  }
  for (const auto& col : log.columns()) {
    if (col.rfind("y.", 0) == 0 && col.size() > 5 &&
        col.compare(col.size() - 5, 5, ".geom") == 0) {
      double events = 0.0;
      const int c = log.column(col);
      for (std::size_t r = 0; r < log.row_count(); ++r) events += log.at(r, c);
      m.set("geometry_events." + col.substr(0, col.size() - 5), events);
    }
  }

  const AgentSpec* leader = detail::leader_agent(cfg);
  if (leader && leader->profile &&
      (leader->profile->kind == ProfileKind::sinusoid_velocity ||
       leader->profile->kind == ProfileKind::sinusoid_acceleration)) {
    const auto channel = leader->profile->kind == ProfileKind::sinusoid_velocity
                             ? DisturbanceChannel::velocity
                             : DisturbanceChannel::acceleration;
    const Metrics s = string_stability_gain(log, cfg, channel);
    for (const auto& [k, v] : s.values) m.set(k, v);
  }
  return m;
}

}  // namespace formsim
