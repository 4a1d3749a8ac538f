#pragma once

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "formsim/controller.hpp"
#include "formsim/dynamics.hpp"
#include "formsim/estimator.hpp"
#include "formsim/formation.hpp"
#include "formsim/integrate.hpp"
#include "formsim/lyapunov.hpp"
#include "formsim/scenario.hpp"
#include "formsim/simlog.hpp"

namespace formsim {

struct RunResult {
  SimLog log;
  RuntimePlan plan;
  bool aborted = false;
  std::string abort_reason;
  double abort_time = 0.0;
  long saturation_steps = 0;  // steps on which any command was clamped
  long geometry_events = 0;   // lateral-law guard activations
  SafetyEvaluation safety;
};

namespace detail {

struct EdgeRef {
  int follower = -1;
  int predecessor = -1;
  const EdgeControlParams* params = nullptr;
  int estimator = -1;
};

// Tie-breaking helper: stable index of an id within the plan order.
inline int index_of(const std::vector<std::string>& order, const std::string& id) {
  for (std::size_t i = 0; i < order.size(); ++i)
    if (order[i] == id) return static_cast<int>(i);
  throw std::logic_error("id '" + id + "' missing from the runtime plan");
}

}  // namespace detail

// Runs the coupled simulation: per step, measurements and controls are
// sampled from the pre-step snapshot and held, then agent and estimator
// states advance together in one RK4 step (measurement-dependent estimator
// terms are re-evaluated at the integration stages). Deterministic for a
// fixed config and seed.
inline RunResult run_scenario(const ScenarioConfig& cfg) {
  {
    const auto rep = validate_scenario(cfg);
    if (!rep.ok()) throw std::invalid_argument("invalid scenario: " + rep.join());
  }
  const EstimatorGains gains = derive_gains(cfg.g_d);
  const Eigen::Matrix4d p_mat =
      solve_lyapunov(error_matrix(gains, 0.0), Eigen::Matrix4d::Identity()).P;

  RunResult result;
  result.plan = wire(cfg.graph, gains);
  const RuntimePlan& plan = result.plan;
  const int n_agents = static_cast<int>(plan.order.size());
  const int n_est = static_cast<int>(plan.estimators.size());

  // agents in plan order
  std::vector<const AgentSpec*> agents(n_agents);
  for (int i = 0; i < n_agents; ++i) agents[i] = cfg.graph.find(plan.order[i]);

  std::vector<int> est_obs(n_est), est_tgt(n_est);
  for (int m = 0; m < n_est; ++m) {
    est_obs[m] = detail::index_of(plan.order, plan.estimators[m].observer);
    est_tgt[m] = detail::index_of(plan.order, plan.estimators[m].target);
  }

  std::vector<detail::EdgeRef> x_refs, y_refs;
  for (const auto& e : cfg.graph.x_edges) {
    detail::EdgeRef r;
    r.follower = detail::index_of(plan.order, e.follower);
    r.predecessor = detail::index_of(plan.order, e.predecessor);
    r.params = &e.params;
    x_refs.push_back(r);
  }
  for (const auto& e : cfg.graph.y_edges) {
    detail::EdgeRef r;
    r.follower = detail::index_of(plan.order, e.follower);
    r.predecessor = detail::index_of(plan.order, e.predecessor);
    r.params = &e.params;
    y_refs.push_back(r);
  }
  for (const auto& w : plan.followers) {
    const int fi = detail::index_of(plan.order, w.id);
    for (auto& r : x_refs)
      if (r.follower == fi) r.estimator = w.x_estimator;
    for (auto& r : y_refs)
      if (r.follower == fi) r.estimator = w.y_estimator;
  }
  // follower wiring keyed by agent index
  std::vector<const FollowerWiring*> wiring(n_agents, nullptr);
  for (const auto& w : plan.followers)
    wiring[detail::index_of(plan.order, w.id)] = &w;

  // column layout
  std::vector<std::string> cols{"t"};
  for (int i = 0; i < n_agents; ++i) {
    const std::string& id = plan.order[i];
    for (const char* f : {".x", ".y", ".phi", ".v", ".u_cmd", ".omega_cmd", ".u", ".omega"})
      cols.push_back(id + f);
  }
  std::vector<std::string> est_tag(n_est);
  for (int m = 0; m < n_est; ++m) {
    est_tag[m] = "est." + plan.estimators[m].observer + ":" + plan.estimators[m].target;
    for (const char* f : {".d", ".theta", ".d_x", ".d_y", ".dx_hat", ".v1x_hat", ".dy_hat",
                          ".v1y_hat", ".psi_hat", ".v1_hat", ".e_dx", ".e_vx", ".e_dy", ".e_vy",
                          ".pos_err", ".vel_err", ".V_est"})
      cols.push_back(est_tag[m] + f);
  }
  std::vector<std::string> x_tag(x_refs.size()), y_tag(y_refs.size());
  for (std::size_t i = 0; i < x_refs.size(); ++i) {
    x_tag[i] = "x." + plan.order[x_refs[i].follower] + ":" + plan.order[x_refs[i].predecessor];
    for (const char* f : {".h1", ".alpha_h1", ".V_x", ".track"}) cols.push_back(x_tag[i] + f);
  }
  for (std::size_t i = 0; i < y_refs.size(); ++i) {
    y_tag[i] = "y." + plan.order[y_refs[i].follower] + ":" + plan.order[y_refs[i].predecessor];
    for (const char* f : {".h2", ".V_y", ".track", ".geom"}) cols.push_back(y_tag[i] + f);
  }
  cols.push_back("V_total");
  if (!x_refs.empty()) cols.push_back("min_h1_so_far");
  if (!y_refs.empty()) cols.push_back("min_h2_so_far");
  result.log = SimLog(cols);

  // flat coupled state: agents then estimators
  std::vector<double> state(4 * (n_agents + n_est), 0.0);
  auto agent_slot = [&](int i) { return 4 * i; };
  auto est_slot = [&](int m) { return 4 * (n_agents + m); };
  for (int i = 0; i < n_agents; ++i) {
    state[agent_slot(i) + 0] = agents[i]->start.x;
    state[agent_slot(i) + 1] = agents[i]->start.y;
    state[agent_slot(i) + 2] = wrap_angle(agents[i]->start.phi);
    state[agent_slot(i) + 3] = agents[i]->start.v;
  }

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> noise_d(n_est, 0.0), noise_theta(n_est, 0.0);
  auto draw_noise = [&]() {
    if (!cfg.noise.enabled()) return;
    for (int m = 0; m < n_est; ++m) {
      noise_d[m] = cfg.noise.d_std > 0.0 ? cfg.noise.d_std * gauss(rng) : 0.0;
      noise_theta[m] = cfg.noise.theta_std > 0.0 ? cfg.noise.theta_std * gauss(rng) : 0.0;
    }
  };

  constexpr double kCoincidence = 1e-9;
  constexpr double kNoisyFloor = 1e-6;

  // true and noisy snapshot measurements per estimator
  std::vector<RelativeMeasurement> meas_true(n_est), meas(n_est);
  auto snapshot_measurements = [&](std::string* fail) {
    for (int m = 0; m < n_est; ++m) {
      const int oi = agent_slot(est_obs[m]);
      const int ti = agent_slot(est_tgt[m]);
      const double dx_w = state[ti + 0] - state[oi + 0];
      const double dy_w = state[ti + 1] - state[oi + 1];
      const double d = std::hypot(dx_w, dy_w);
      if (d < kCoincidence) {
        std::ostringstream msg;
        msg << "agents '" << plan.estimators[m].observer << "' and '"
            << plan.estimators[m].target << "' coincide (d = " << d << ")";
        *fail = msg.str();
        return false;
      }
      const double theta = wrap_angle(std::atan2(dy_w, dx_w) - state[oi + 2]);
      meas_true[m] = measurement_from_polar(d, theta);
      meas[m] = cfg.noise.enabled()
                    ? measurement_from_polar(std::max(d + noise_d[m], kNoisyFloor),
                                             theta + noise_theta[m])
                    : meas_true[m];
    }
    return true;
  };

  draw_noise();
  {
    std::string fail;
    if (!snapshot_measurements(&fail)) throw std::invalid_argument("degenerate start: " + fail);
  }
  for (int m = 0; m < n_est; ++m) {
    const EstimatorState e0 = init_estimator(meas[m], state[agent_slot(est_obs[m]) + 3]);
    state[est_slot(m) + 0] = e0.d_x_hat;
    state[est_slot(m) + 1] = e0.v1x_hat;
    state[est_slot(m) + 2] = e0.d_y_hat;
    state[est_slot(m) + 3] = e0.v1y_hat;
  }

  std::vector<ControlInput> raw(n_agents), applied(n_agents);
  std::vector<double> prev_omega(n_agents, 0.0);
  std::vector<char> geom_flag(y_refs.size(), 0);

  auto compute_controls = [&](double t) {
    bool clamped = false;
    std::fill(geom_flag.begin(), geom_flag.end(), 0);
    for (int i = 0; i < n_agents; ++i) {
      if (!wiring[i]) {
        raw[i] = agents[i]->profile ? agents[i]->profile->inputs_at(t) : ControlInput{};
        applied[i] = clamp_input(raw[i], cfg.limits);
      } else {
        const FollowerWiring& w = *wiring[i];
        const detail::EdgeRef& ye = y_refs[w.y_edge];
        const detail::EdgeRef& xe = x_refs[w.x_edge];
        EstimatorState ey{state[est_slot(w.y_estimator) + 0], state[est_slot(w.y_estimator) + 1],
                          state[est_slot(w.y_estimator) + 2], state[est_slot(w.y_estimator) + 3]};
        const LateralCommand lat =
            control_lateral(ey, meas[w.y_estimator], *ye.params, gains, prev_omega[i]);
        if (lat.geometry_degenerate) {
          geom_flag[w.y_edge] = 1;
          ++result.geometry_events;
        }
        EstimatorState ex{state[est_slot(w.x_estimator) + 0], state[est_slot(w.x_estimator) + 1],
                          state[est_slot(w.x_estimator) + 2], state[est_slot(w.x_estimator) + 3]};
        const double omega_applied =
            std::clamp(lat.omega, -cfg.limits.omega_max, cfg.limits.omega_max);
        const double u_raw = control_longitudinal(ex, meas[w.x_estimator],
                                                  state[agent_slot(i) + 3], omega_applied,
                                                  *xe.params, gains);
        raw[i] = {u_raw, lat.omega};
        applied[i] = {std::clamp(u_raw, -cfg.limits.u_max, cfg.limits.u_max), omega_applied};
        prev_omega[i] = omega_applied;
      }
      if (raw[i].u != applied[i].u || raw[i].omega != applied[i].omega) clamped = true;
    }
    if (clamped) ++result.saturation_steps;
  };

  auto log_row = [&](double t) {
    std::vector<double> row;
    row.reserve(result.log.columns().size());
    row.push_back(t);
    for (int i = 0; i < n_agents; ++i) {
      const int s = agent_slot(i);
      row.insert(row.end(), {state[s], state[s + 1], state[s + 2], state[s + 3], raw[i].u,
                             raw[i].omega, applied[i].u, applied[i].omega});
    }
    double v_total = 0.0;
    std::vector<double> est_rows;
    for (int m = 0; m < n_est; ++m) {
      const int s = est_slot(m);
      const EstimatorState e{state[s], state[s + 1], state[s + 2], state[s + 3]};
      const int oi = agent_slot(est_obs[m]);
      const int ti = agent_slot(est_tgt[m]);
      const double psi = angle_diff(state[ti + 2], state[oi + 2]);
      const double v_tgt = state[ti + 3];
      const double v1x = v_tgt * std::cos(psi);
      const double v1y = v_tgt * std::sin(psi);
      const EstimationError err{meas_true[m].d_x - e.d_x_hat, v1x - e.v1x_hat,
                                meas_true[m].d_y - e.d_y_hat, v1y - e.v1y_hat};
      Eigen::Vector4d ev(err.e_dx, err.e_vx, err.e_dy, err.e_vy);
      const double v_est = ev.dot(p_mat * ev);
      v_total += v_est;
      row.insert(row.end(),
                 {meas[m].d, meas[m].theta, meas[m].d_x, meas[m].d_y, e.d_x_hat, e.v1x_hat,
                  e.d_y_hat, e.v1y_hat, e.psi_hat(), e.v1_hat(), err.e_dx, err.e_vx, err.e_dy,
                  err.e_vy, std::abs(std::hypot(e.d_x_hat, e.d_y_hat) - meas_true[m].d),
                  std::abs(e.v1_hat() - v_tgt), v_est});
    }
    for (std::size_t i = 0; i < x_refs.size(); ++i) {
      const detail::EdgeRef& r = x_refs[i];
      const double v_f = state[agent_slot(r.follower) + 3];
      const double h1 = eval_h1(meas[r.estimator].d_x, v_f, r.params->d_s, r.params->T);
      result.safety.observe_h1(h1, gains);
      const double dxh = state[est_slot(r.estimator) + 0];
      const double v_x = 0.5 * (dxh - r.params->d_star_x - r.params->T * v_f) *
                         (dxh - r.params->d_star_x - r.params->T * v_f);
      v_total += v_x;
      const double track = meas_true[r.estimator].d_x - r.params->d_star_x - r.params->T * v_f;
      row.insert(row.end(), {h1, class_k(gains, h1), v_x, track});
    }
    for (std::size_t i = 0; i < y_refs.size(); ++i) {
      const detail::EdgeRef& r = y_refs[i];
      const double h2 = eval_h2(meas[r.estimator].d_y, r.params->d_s);
      result.safety.observe_h2(h2);
      const double dyh = state[est_slot(r.estimator) + 2];
      const double v_y = 0.5 * (dyh - r.params->d_star_y) * (dyh - r.params->d_star_y);
      v_total += v_y;
      const double track = meas_true[r.estimator].d_y - r.params->d_star_y;
      row.insert(row.end(), {h2, v_y, track, static_cast<double>(geom_flag[i])});
    }
    row.push_back(v_total);
    if (!x_refs.empty()) row.push_back(result.safety.min_h1_so_far);
    if (!y_refs.empty()) row.push_back(result.safety.min_h2_so_far);
    result.log.push_row(std::move(row));
  };

  // coupled vector field with controls held; estimator measurement terms are
  // recomputed from the stage states (plus the step's held noise offsets)
  auto field = [&](const std::vector<double>& s, std::vector<double>& ds) {
    for (int i = 0; i < n_agents; ++i) {
      const int a = agent_slot(i);
      ds[a + 0] = s[a + 3] * std::cos(s[a + 2]);
      ds[a + 1] = s[a + 3] * std::sin(s[a + 2]);
      ds[a + 2] = applied[i].omega;
      ds[a + 3] = applied[i].u;
    }
    for (int m = 0; m < n_est; ++m) {
      const int oi = agent_slot(est_obs[m]);
      const int ti = agent_slot(est_tgt[m]);
      const double dx_w = s[ti + 0] - s[oi + 0];
      const double dy_w = s[ti + 1] - s[oi + 1];
      const double d0 = std::hypot(dx_w, dy_w);
      const double theta = wrap_angle(std::atan2(dy_w, dx_w) - s[oi + 2]);
      const double d = cfg.noise.enabled() ? std::max(d0 + noise_d[m], kNoisyFloor) : d0;
      const double th = cfg.noise.enabled() ? theta + noise_theta[m] : theta;
      const double dxm = d * std::cos(th);
      const double dym = d * std::sin(th);
      const int e = est_slot(m);
      const std::array<double, 4> est{s[e], s[e + 1], s[e + 2], s[e + 3]};
      const std::array<double, 4> rates =
          estimator_rates(est, gains, dxm - est[0], dym - est[2], dxm, dym, s[oi + 3],
                          applied[est_obs[m]].omega);
      for (int j = 0; j < 4; ++j) ds[e + j] = rates[j];
    }
  };

  const long n = cfg.step_count();
  for (long k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;
    std::string fail;
    if (!snapshot_measurements(&fail)) {
      result.aborted = true;
      result.abort_reason = fail;
      result.abort_time = t;
      break;
    }
    compute_controls(t);
    log_row(t);
    if (k == n) break;

    rk4_step_inplace(state, cfg.dt, field);

    for (int i = 0; i < n_agents; ++i) {
      const int a = agent_slot(i);
      state[a + 2] = wrap_angle(state[a + 2]);
      state[a + 3] = std::clamp(state[a + 3], 0.0, cfg.limits.v_max);
    }
    bool finite = true;
    for (double v : state)
      if (!std::isfinite(v)) finite = false;
    if (!finite) {
      result.aborted = true;
      result.abort_reason = "non-finite state after integration step";
      result.abort_time = t + cfg.dt;
      break;
    }
    draw_noise();
  }
  return result;
}

}  // namespace formsim
