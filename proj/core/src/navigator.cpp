#include "spinnav/navigator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "spinnav/errors.hpp"

namespace spinnav {

const CrossingEdge& CrossingGraph::edge(int n, int k) const {
  if (n > k) std::swap(n, k);
  check_state_index(params, n);
  check_state_index(params, k);
  if (n == k) throw std::invalid_argument("CrossingGraph::edge: n == k");
  // lexicographic layout: (0,1)..(0,N), (1,2)..(1,N), ...
  const std::size_t idx = static_cast<std::size_t>(n) * params.N -
                          static_cast<std::size_t>(n) * (n - 1) / 2 + (k - n - 1);
  return edges[idx];
}

std::vector<double> CrossingGraph::distinct_times() const {
  std::vector<double> times;
  times.reserve(edges.size());
  for (const auto& e : edges) times.push_back(e.time);
  std::sort(times.begin(), times.end());
  const double tol = 1e-9 * params.xi / params.A;
  std::vector<double> out;
  for (double t : times)
    if (out.empty() || t - out.back() > tol) out.push_back(t);
  return out;
}

CrossingGraph build_crossing_graph(const SystemParams& p) {
  p.validate();
  CrossingGraph g;
  g.params = p;
  g.edges.reserve(static_cast<std::size_t>(p.N + 1) * p.N / 2);
  for (int n = 0; n <= p.N; ++n) {
    for (int k = n + 1; k <= p.N; ++k) {
      CrossingEdge e;
      e.n = n;
      e.k = k;
      e.time = crossing_time(p, n, k);
      e.order = k - n;
      e.energy = energy(p, n, e.time);
      e.n_invariant = (n == 0 || k == p.N);
      g.edges.push_back(e);
    }
  }
  return g;
}

namespace {

// advisory pulse for a hop: smallest width passing the sweep condition when
// the separation threshold allows it, amplitude with 2x headroom for direct
// hops and the N xi scaling seed for multi-quantum ones
Pulse recommend_pulse(const SystemParams& p, const CrossingEdge& e, double margin = 5.0) {
  const double sep_width = 0.2 * p.xi / p.A;
  const double adiab_width = margin / std::sqrt(p.A);
  const double width = std::min(sep_width, adiab_width);
  double omega0;
  if (e.order == 1) {
    const double f = coupling_factor(p, e.n);
    omega0 = 2.0 * margin * std::sqrt(p.A) / f;
  } else {
    omega0 = p.N * p.xi;
  }
  return Pulse::make_gaussian(omega0, e.time, width);
}

bool edge_allowed(const CrossingEdge& e, const RouteConstraints& c) {
  if (c.max_order && e.order > *c.max_order) return false;
  if (c.require_n_invariant && !e.n_invariant) return false;
  switch (c.strategy) {
    case RouteStrategy::sequential: return e.order == 1;
    case RouteStrategy::direct: return true;  // endpoint filter applied separately
    case RouteStrategy::n_invariant: return e.n_invariant;
  }
  return false;
}

struct SearchState {
  int node;
  double time;     // arrival time (last hop's crossing time)
  int max_order;
  int hops;
  int parent;      // index into the state pool, -1 for the root
  int edge_index;  // edge taken to get here
};

}  // namespace

Route plan_route(const CrossingGraph& g, int source, int target, const RouteConstraints& c) {
  const SystemParams& p = g.params;
  check_state_index(p, source);
  check_state_index(p, target);
  if (source == target) throw std::invalid_argument("plan_route: source == target");

  // candidate edges under the constraints
  std::vector<int> allowed;
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const CrossingEdge& e = g.edges[i];
    if (!edge_allowed(e, c)) continue;
    if (c.strategy == RouteStrategy::direct &&
        !(std::min(e.n, e.k) == std::min(source, target) &&
          std::max(e.n, e.k) == std::max(source, target)))
      continue;
    allowed.push_back(static_cast<int>(i));
  }

  std::vector<std::vector<int>> adjacency(p.dim());
  for (int ei : allowed) {
    adjacency[g.edges[ei].n].push_back(ei);
    adjacency[g.edges[ei].k].push_back(ei);
  }

  // layered BFS keeping, per node, the pareto set over (arrival time,
  // max order, hops): smaller is better in every coordinate
  std::vector<SearchState> pool;
  std::vector<std::vector<int>> pareto(p.dim());
  pool.push_back({source, -std::numeric_limits<double>::infinity(), 0, 0, -1, -1});
  pareto[source].push_back(0);

  std::vector<int> frontier{0};
  std::vector<int> goal_states;

  while (!frontier.empty() && goal_states.empty()) {
    std::vector<int> next;
    for (int si : frontier) {
      const SearchState s = pool[si];
      for (int ei : adjacency[s.node]) {
        const CrossingEdge& e = g.edges[ei];
        if (!(e.time > s.time)) continue;  // hop times strictly increasing
        SearchState cand;
        cand.node = (e.n == s.node) ? e.k : e.n;
        cand.time = e.time;
        cand.max_order = std::max(s.max_order, e.order);
        cand.hops = s.hops + 1;
        cand.parent = si;
        cand.edge_index = ei;

        bool dominated = false;
        auto& entries = pareto[cand.node];
        for (int other : entries) {
          const SearchState& o = pool[other];
          if (o.time <= cand.time && o.max_order <= cand.max_order && o.hops <= cand.hops) {
            dominated = true;
            break;
          }
        }
        if (dominated) continue;
        entries.erase(std::remove_if(entries.begin(), entries.end(),
                                     [&](int other) {
                                       const SearchState& o = pool[other];
                                       return cand.time <= o.time &&
                                              cand.max_order <= o.max_order &&
                                              cand.hops <= o.hops;
                                     }),
                      entries.end());
        const int idx = static_cast<int>(pool.size());
        pool.push_back(cand);
        entries.push_back(idx);
        next.push_back(idx);
        if (cand.node == target) goal_states.push_back(idx);
      }
    }
    frontier = std::move(next);
  }

  if (goal_states.empty()) {
    std::ostringstream os;
    os << "plan_route: no feasible route " << source << " -> " << target
       << " under the given constraints";
    if (c.strategy == RouteStrategy::sequential && source > target)
      os << " (adjacent-hop times decrease along descending chains; a single "
            "forward sweep cannot realize them)";
    throw InfeasibleError(os.str());
  }

  // fewer hops guaranteed by the layered search; break ties by max order,
  // then completion time
  const int best = *std::min_element(goal_states.begin(), goal_states.end(), [&](int a, int b) {
    const SearchState& sa = pool[a];
    const SearchState& sb = pool[b];
    if (sa.max_order != sb.max_order) return sa.max_order < sb.max_order;
    return sa.time < sb.time;
  });

  Route route;
  route.params = p;
  route.source = source;
  route.target = target;
  std::vector<int> chain;
  for (int si = best; pool[si].parent >= 0; si = pool[si].parent) chain.push_back(si);
  std::reverse(chain.begin(), chain.end());
  for (int si : chain) {
    const SearchState& s = pool[si];
    RouteHop hop;
    hop.edge = g.edges[s.edge_index];
    hop.to = s.node;
    hop.from = (hop.edge.n == s.node) ? hop.edge.k : hop.edge.n;
    hop.recommended = recommend_pulse(p, hop.edge);
    route.hops.push_back(hop);
  }
  return route;
}

Schedule schedule_from_route(const Route& r, const std::vector<double>& omega0_per_hop,
                             double width) {
  if (omega0_per_hop.size() != r.hops.size())
    throw std::invalid_argument("schedule_from_route: one omega0 per hop required");
  Schedule s;
  for (std::size_t i = 0; i < r.hops.size(); ++i)
    s.pulses.push_back(Pulse::make_gaussian(omega0_per_hop[i], r.hops[i].edge.time, width));
  if (r.hops.empty()) return s;
  const auto report = validate_schedule(s, r.params);
  if (!report.ok)
    throw InfeasibleError("schedule_from_route: schedule fails validation\n" + report.summary());
  return s;
}

Schedule schedule_from_route(const Route& r, double omega0, double width) {
  return schedule_from_route(r, std::vector<double>(r.hops.size(), omega0), width);
}

AdiabaticityReport adiabaticity_check(const SystemParams& p, const CrossingEdge& e,
                                      const Pulse& pulse, double margin) {
  p.validate();
  pulse.validate();
  const double width = pulse.effective_width();
  if (std::fabs(pulse.t0 - e.time) > 2.0 * width)
    throw std::invalid_argument("adiabaticity_check: pulse is not centered within two widths "
                                "of the crossing");
  const double omega = pulse.envelope(e.time);

  AdiabaticityReport rep;
  rep.margin = margin;
  if (e.order == 1) {
    rep.effective_coupling = coupling_factor(p, std::min(e.n, e.k)) * omega;
    rep.perturbative = true;
  } else {
    const double scale = p.N * p.xi;
    rep.effective_coupling = scale * std::pow(omega / scale, e.order);
    rep.perturbative = omega < scale;
  }
  const double sqrtA = std::sqrt(p.A);
  rep.coupling_ratio = rep.effective_coupling / sqrtA;
  rep.sweep_ratio = sqrtA * width;
  rep.coupling_ok = rep.coupling_ratio >= margin;
  rep.sweep_ok = rep.sweep_ratio >= margin;
  rep.pass = rep.coupling_ok && rep.sweep_ok;
  return rep;
}

std::string AdiabaticityReport::summary() const {
  std::ostringstream os;
  os << "coupling ratio " << coupling_ratio << (coupling_ok ? " (ok)" : " (FAIL)")
     << ", sweep ratio " << sweep_ratio << (sweep_ok ? " (ok)" : " (FAIL)")
     << ", margin " << margin;
  if (!perturbative)
    os << " [omega >= N xi: perturbative coupling estimate outside its regime]";
  return os.str();
}

double effective_coupling_estimate(const SystemParams& p, int n, int k, double omega) {
  p.validate();
  check_state_index(p, n);
  check_state_index(p, k);
  if (std::abs(n - k) < 2)
    throw std::invalid_argument("effective_coupling_estimate: |n-k| must be >= 2");
  if (!(omega >= 0.0) || !std::isfinite(omega))
    throw std::invalid_argument("effective_coupling_estimate: omega must be >= 0");
  const double scale = p.N * p.xi;
  if (omega >= scale)
    throw std::domain_error("effective_coupling_estimate: omega >= N xi, outside the "
                            "perturbative regime; the scale is meaningless there");
  return std::pow(omega / scale, std::abs(n - k));
}

Schedule ghz_schedule(const SystemParams& p, double rotation_time, const Pulse& pulse_template) {
  p.validate();
  pulse_template.validate();
  if (p.N < 2) throw std::invalid_argument("ghz_schedule: needs N >= 2");
  const double t_pulse = p.xi / p.A;  // t_1N
  const double width = pulse_template.effective_width();
  if (!(rotation_time <= t_pulse - 2.0 * width))
    throw std::invalid_argument("ghz_schedule: rotation must precede the t_1N pulse by at "
                                "least two pulse widths");
  const double t_01 = crossing_time(p, 0, 1);
  const double t_0N = crossing_time(p, 0, p.N);
  for (double tc : {t_01, t_0N}) {
    if (std::fabs(rotation_time - tc) <= 2.0 * width)
      throw std::invalid_argument("ghz_schedule: rotation time collides with a crossing window");
  }

  Schedule s;
  Rotation rot;
  rot.t = rotation_time;
  rot.a = 0;
  rot.b = 1;
  rot.angle = 0.5 * M_PI;
  s.rotations.push_back(rot);
  Pulse pulse = pulse_template;
  pulse.t0 = t_pulse;
  pulse.validate();
  s.pulses.push_back(pulse);
  return s;
}

}  // namespace spinnav
