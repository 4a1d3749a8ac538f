#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "formsim/controller.hpp"
#include "formsim/dynamics.hpp"
#include "formsim/profile.hpp"

namespace formsim {

enum class AgentRole { leader, follower };

struct AgentSpec {
  std::string id;
  AgentState start;
  std::optional<LeaderProfile> profile;  // required for scripted agents, forbidden for followers
};

struct ControlEdge {
  std::string follower;
  std::string predecessor;
  EdgeControlParams params;
};

// Estimation-only tap: wires an estimator without any control law.
struct ObserverEdge {
  std::string observer;
  std::string target;
};

// Formation topology: a DAG with typed X+ and Y edges. A scenario with no
// control edges is a pure estimation setup driven by observer edges.
struct FormationGraph {
  std::vector<AgentSpec> agents;
  std::vector<ControlEdge> x_edges;
  std::vector<ControlEdge> y_edges;
  std::vector<ObserverEdge> observer_edges;

  const AgentSpec* find(const std::string& id) const {
    for (const auto& a : agents)
      if (a.id == id) return &a;
    return nullptr;
  }
  bool has_control_edges() const { return !x_edges.empty() || !y_edges.empty(); }
};

struct ValidationReport {
  std::vector<std::string> errors;
  bool ok() const { return errors.empty(); }
  std::string join(const char* sep = "; ") const {
    std::string out;
    for (std::size_t i = 0; i < errors.size(); ++i) {
      if (i) out += sep;
      out += errors[i];
    }
    return out;
  }
};

namespace detail {

inline bool valid_id(const std::string& id) {
  if (id.empty()) return false;
  for (char c : id)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

// Kahn's algorithm over the union of control edges; returns the node ids in
// topological order (predecessors first), ties broken by id. Nodes left over
// sit on a cycle.
inline bool topological_order(const FormationGraph& g, std::vector<std::string>* order,
                              std::vector<std::string>* cyclic) {
  std::map<std::string, std::set<std::string>> preds_of;  // follower -> predecessors
  std::map<std::string, int> pending;                     // unresolved predecessor count
  for (const auto& a : g.agents) pending[a.id] = 0;
  auto add = [&](const ControlEdge& e) {
    if (preds_of[e.follower].insert(e.predecessor).second) ++pending[e.follower];
  };
  for (const auto& e : g.x_edges) add(e);
  for (const auto& e : g.y_edges) add(e);

  std::set<std::string> ready;
  for (const auto& [id, n] : pending)
    if (n == 0) ready.insert(id);
  order->clear();
  std::set<std::string> done;
  while (!ready.empty()) {
    const std::string id = *ready.begin();
    ready.erase(ready.begin());
    order->push_back(id);
    done.insert(id);
    for (auto& [fol, preds] : preds_of) {
      if (done.count(fol) || ready.count(fol)) continue;
      if (preds.count(id) && --pending[fol] == 0) ready.insert(fol);
    }
  }
  if (order->size() == g.agents.size()) return true;
  cyclic->clear();
  for (const auto& a : g.agents)
    if (!done.count(a.id)) cyclic->push_back(a.id);
  return false;
}

}  // namespace detail

// Structural validation of the graph constraints plus per-edge feasibility.
inline ValidationReport validate(const FormationGraph& g, const EstimatorGains& gains) {
  ValidationReport rep;
  auto err = [&rep](const std::string& m) { rep.errors.push_back(m); };

  if (g.agents.empty()) err("no agents defined");
  std::set<std::string> ids;
  for (const auto& a : g.agents) {
    if (!detail::valid_id(a.id)) err("invalid agent id '" + a.id + "' (use [A-Za-z0-9_])");
    if (!ids.insert(a.id).second) err("duplicate agent id '" + a.id + "'");
  }

  auto check_endpoint = [&](const std::string& id, const char* what) {
    if (!ids.count(id)) err(std::string(what) + " references unknown agent '" + id + "'");
  };
  for (const auto& e : g.x_edges) {
    check_endpoint(e.follower, "X+ edge");
    check_endpoint(e.predecessor, "X+ edge");
    if (e.follower == e.predecessor) err("X+ self-edge on '" + e.follower + "'");
  }
  for (const auto& e : g.y_edges) {
    check_endpoint(e.follower, "Y edge");
    check_endpoint(e.predecessor, "Y edge");
    if (e.follower == e.predecessor) err("Y self-edge on '" + e.follower + "'");
  }
  for (const auto& e : g.observer_edges) {
    check_endpoint(e.observer, "observer edge");
    check_endpoint(e.target, "observer edge");
    if (e.observer == e.target) err("observer self-edge on '" + e.observer + "'");
  }
  if (!rep.ok()) return rep;  // endpoint errors poison the structural checks below

  if (g.has_control_edges()) {
    std::map<std::string, int> x_count, y_count;
    for (const auto& e : g.x_edges) ++x_count[e.follower];
    for (const auto& e : g.y_edges) ++y_count[e.follower];

    std::vector<std::string> leaders;
    for (const auto& a : g.agents) {
      const int nx = x_count.count(a.id) ? x_count[a.id] : 0;
      const int ny = y_count.count(a.id) ? y_count[a.id] : 0;
      if (nx == 0 && ny == 0) {
        leaders.push_back(a.id);
        if (!a.profile) err("leader '" + a.id + "' has no input profile");
        continue;
      }
      if (nx == 0) err("follower '" + a.id + "' is missing its X+ edge");
      if (ny == 0) err("follower '" + a.id + "' is missing its Y edge");
      if (nx > 1)
        err("follower '" + a.id +
            "' has multiple X+ edges; combining X+ commands is undefined, use exactly one");
      if (ny > 1)
        err("follower '" + a.id +
            "' has multiple Y edges; combining Y commands is undefined, use exactly one");
      if (a.profile) err("follower '" + a.id + "' must not carry an input profile");
    }
    if (leaders.empty())
      err("no leader: every agent has outgoing control edges");
    else if (leaders.size() > 1) {
      std::string names;
      for (const auto& l : leaders) names += " '" + l + "'";
      err("exactly one leader required; agents without outgoing edges:" + names);
    }

    std::vector<std::string> order, cyclic;
    if (!detail::topological_order(g, &order, &cyclic)) {
      std::string names;
      for (const auto& c : cyclic) names += " '" + c + "'";
      err("control edges contain a cycle through:" + names);
    }

    for (const auto& e : g.x_edges) {
      const std::string tag = "X+ edge " + e.follower + "->" + e.predecessor + ": ";
      if (!(e.params.T > 0.0)) err(tag + "time headway T must be positive");
      if (!(e.params.d_s > 0.0)) err(tag + "d_s must be positive on X+ edges");
      if (e.params.T > 0.0 && e.params.d_s > 0.0) {
        const auto feas = check_feasibility(e.params, gains, EdgeKind::x_plus);
        for (const auto& c : feas.checks)
          if (!c.satisfied) err(tag + c.message);
      }
    }
    for (const auto& e : g.y_edges) {
      const std::string tag = "Y edge " + e.follower + "->" + e.predecessor + ": ";
      if (e.params.d_s == 0.0) {
        err(tag + "d_s must be nonzero on Y edges");
        continue;
      }
      const auto feas = check_feasibility(e.params, gains, EdgeKind::y);
      for (const auto& c : feas.checks)
        if (!c.satisfied) err(tag + c.message);
    }
  } else {
    if (g.observer_edges.empty())
      err("nothing to simulate: no control edges and no observer edges");
    for (const auto& a : g.agents)
      if (!a.profile) err("scripted agent '" + a.id + "' has no input profile");
  }
  return rep;
}

struct EstimatorBinding {
  std::string observer;
  std::string target;
};

struct FollowerWiring {
  std::string id;
  int x_edge = -1;       // index into graph.x_edges
  int y_edge = -1;       // index into graph.y_edges
  int x_estimator = -1;  // index into RuntimePlan::estimators
  int y_estimator = -1;
};

// Deterministic wiring of estimator instances and control-law inputs.
struct RuntimePlan {
  std::vector<std::string> order;            // topological, ties by id
  std::vector<EstimatorBinding> estimators;  // one per distinct (observer, target)
  std::vector<FollowerWiring> followers;     // sorted by id
};

// Instantiates one estimator per distinct (follower, predecessor) pair; a
// follower whose X+ and Y predecessors coincide shares a single instance.
inline RuntimePlan wire(const FormationGraph& g, const EstimatorGains& gains) {
  const auto rep = validate(g, gains);
  if (!rep.ok()) throw std::invalid_argument("cannot wire invalid graph: " + rep.join());

  RuntimePlan plan;
  std::vector<std::string> cyclic;
  detail::topological_order(g, &plan.order, &cyclic);

  auto estimator_index = [&plan](const std::string& obs, const std::string& tgt) {
    for (std::size_t i = 0; i < plan.estimators.size(); ++i)
      if (plan.estimators[i].observer == obs && plan.estimators[i].target == tgt)
        return static_cast<int>(i);
    plan.estimators.push_back({obs, tgt});
    return static_cast<int>(plan.estimators.size() - 1);
  };

  std::vector<std::string> follower_ids;
  for (const auto& e : g.x_edges) follower_ids.push_back(e.follower);
  std::sort(follower_ids.begin(), follower_ids.end());
  for (const auto& id : follower_ids) {
    FollowerWiring w;
    w.id = id;
    for (std::size_t i = 0; i < g.x_edges.size(); ++i)
      if (g.x_edges[i].follower == id) w.x_edge = static_cast<int>(i);
    for (std::size_t i = 0; i < g.y_edges.size(); ++i)
      if (g.y_edges[i].follower == id) w.y_edge = static_cast<int>(i);
    w.x_estimator = estimator_index(id, g.x_edges[w.x_edge].predecessor);
    w.y_estimator = estimator_index(id, g.y_edges[w.y_edge].predecessor);
    plan.followers.push_back(std::move(w));
  }
  for (const auto& e : g.observer_edges) estimator_index(e.observer, e.target);
  return plan;
}

}  // namespace formsim
