#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spinnav/pulses.hpp"
#include "spinnav/system.hpp"

namespace spinnav {

// Diabatic crossing between |n> and |k| (n < k) at t_nk = (n + k - N) xi/A.
//
// N-invariance convention: an edge touching a product state (node 0 or node
// N) is flagged invariant because its crossing time can be written without N
// in the family's natural labeling -- t = k xi/A for (k, N) edges with the
// partner labeled by its excitation count, and t = -d xi/A for (0, N-d)
// edges with the partner labeled by its distance from the top. Reaching a
// partner labeled the other way round (e.g. |1> from |0>) still requires
// exact knowledge of N.
struct CrossingEdge {
  int n = 0;
  int k = 0;
  double time = 0.0;
  int order = 0;            // |n - k|, the number of quanta exchanged
  double energy = 0.0;      // common diabatic energy at the crossing
  bool n_invariant = false;
};

struct CrossingGraph {
  SystemParams params;
  std::vector<CrossingEdge> edges;  // all (N+1)N/2 unordered pairs

  const CrossingEdge& edge(int n, int k) const;
  std::vector<double> distinct_times() const;  // sorted, 2N-1 values
};

CrossingGraph build_crossing_graph(const SystemParams& p);

enum class RouteStrategy {
  sequential,   // adjacent hops only
  direct,       // a single (possibly multi-quantum) hop
  n_invariant,  // hops flagged N-invariant only
};

struct RouteConstraints {
  RouteStrategy strategy = RouteStrategy::sequential;
  std::optional<int> max_order;
  bool require_n_invariant = false;  // additional filter for any strategy
};

struct RouteHop {
  CrossingEdge edge;
  int from = 0;
  int to = 0;
  Pulse recommended;  // advisory amplitude/width suggestion for this hop
};

// Time-ordered chain of hops: consecutive hops share a state and hop times
// increase strictly along the route (a single forward sweep traverses each
// crossing once).
struct Route {
  SystemParams params;
  int source = 0;
  int target = 0;
  std::vector<RouteHop> hops;
};

// Plans a route subject to the constraints. Ties are broken by fewer hops,
// then lower maximum hop order, then earliest completion time. Throws
// InfeasibleError when no time-ordered route satisfies the constraints
// (e.g. descending sequential requests, whose adjacent-hop times decrease).
Route plan_route(const CrossingGraph& g, int source, int target,
                 const RouteConstraints& c = {});

// One Gaussian pulse per hop, centered on the hop's crossing time.
Schedule schedule_from_route(const Route& r, const std::vector<double>& omega0_per_hop,
                             double width);
Schedule schedule_from_route(const Route& r, double omega0, double width);

// Adiabatic-passage margins for a pulse applied at an edge: the transfer
// needs Omega_nk(t_nk) T >> sqrt(A) T >> 1. For adjacent states the coupling
// is the direct factor; for multi-quantum edges it is estimated
// perturbatively as (N xi) (omega/(N xi))^order, which is only meaningful
// for omega < N xi (flagged via `perturbative`).
struct AdiabaticityReport {
  double coupling_ratio = 0.0;       // Omega_nk(t_nk) / sqrt(A)
  double sweep_ratio = 0.0;          // sqrt(A) T
  double effective_coupling = 0.0;   // Omega_nk(t_nk) [1/T]
  bool perturbative = true;
  bool coupling_ok = false;
  bool sweep_ok = false;
  bool pass = false;
  double margin = 0.0;

  std::string summary() const;
};

AdiabaticityReport adiabaticity_check(const SystemParams& p, const CrossingEdge& e,
                                      const Pulse& pulse, double margin = 5.0);

// Order-of-magnitude scale (omega/(N xi))^|n-k| of the multi-quantum coupling
// between |n> and |k>; requires |n-k| >= 2 and the perturbative regime
// omega < N xi (throws std::domain_error otherwise).
double effective_coupling_estimate(const SystemParams& p, int n, int k, double omega);

// The GHZ sequence from e_0: a pi/2 rotation on {|0>,|1>} at rotation_time,
// then one adiabatic pulse at the N-invariant crossing t_1N = xi/A. The
// rotation must sit at least two pulse widths before the pulse and clear of
// the t_01 and t_0N crossing windows.
Schedule ghz_schedule(const SystemParams& p, double rotation_time, const Pulse& pulse_template);

}  // namespace spinnav
