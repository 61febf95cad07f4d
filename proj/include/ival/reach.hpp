#ifndef IVAL_REACH_HPP
#define IVAL_REACH_HPP

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "ival/expr.hpp"
#include "ival/network.hpp"

namespace ival {

// verification abort: pole hit, embedding order violated, non-finite rates
struct ReachError : std::runtime_error {
    double time;
    ReachError(double t, const std::string& what)
        : std::runtime_error("t=" + format_double(t) + ": " + what), time(t) {}
};

// dx/dt = f(x, u, w); f must evaluate in point mode and box mode with a
// monotone natural inclusion function
struct OpenLoopSystem {
    size_t state_dim = 0;
    size_t input_dim = 0;
    size_t dist_dim = 0;
    ComposedFunction f;  // arity state+input+dist -> state
};

OpenLoopSystem make_system(size_t n, size_t p, size_t q, ComposedFunction f);

enum class BoundMethod { crown_localized, ibp_global };

struct ClosedLoopSetup {
    OpenLoopSystem system;
    FeedForwardNetwork controller;         // in = state_dim, out = input_dim
    double control_period = 0.0;           // > 0; control held between instants
    std::function<Box(double)> disturbance;  // [w](t), piecewise-constant per step
    BoundMethod bound_method = BoundMethod::crown_localized;
};

void validate(const ClosedLoopSetup& setup);

struct ReachTube {
    std::vector<double> times;  // strictly increasing grid
    std::vector<Box> boxes;     // boxes[0] == initial set
    double step = 0.0;
    std::vector<double> control_instants;
    std::vector<double> fallback_events;  // localization fallbacks, if any
    uint64_t seed = 0;
    double wall_clock_seconds = 0.0;
};

struct EmbeddingRates {
    std::vector<double> lower, upper;
    bool used_fallback = false;
};

// lower_rate_i / upper_rate_i: the i-th output endpoint of the natural
// inclusion of f on the i-th lower/upper face of x
EmbeddingRates open_embedding_rhs(const OpenLoopSystem& sys, const Box& x, const Box& u,
                                  const Box& w);

// per face: control interval from the localized affine bounds (interval
// bound propagation as the fallback when the face leaves the bound region,
// or always, under BoundMethod::ibp_global), then the open-loop face rate
EmbeddingRates closed_embedding_rhs(const ClosedLoopSetup& setup, const Box& x, const Box& w,
                                    const AffineBoundPair& bounds);

// Forward Euler on the doubled embedding state. Controller bounds are
// recomputed at every control instant on the then-current box; that step
// advances with the face-wise closed-loop rates, and the remaining steps of
// the hold advance open-loop under the held control interval, which contains
// every control value the sampled-data loop can apply during the hold.
ReachTube euler_reach(const ClosedLoopSetup& setup, const Box& x0, double t0, double t_end,
                      double h);

// open-loop tube under user-supplied interval control/disturbance schedules
ReachTube open_reach_with_global_u(const OpenLoopSystem& sys, const Box& x0,
                                   const std::function<Box(double)>& u_schedule,
                                   const std::function<Box(double)>& w_schedule, double t0,
                                   double t_end, double h);

struct McReport {
    size_t trajectories = 0;
    size_t checked_states = 0;
    size_t violations = 0;
    std::vector<double> min_margin;      // per coordinate, over all trajectories/steps
    std::vector<double> max_violation;   // per coordinate, penetration depth (0 if none)
};

// simulate true sampled-data closed-loop trajectories (point Euler, same
// grid; exact N(x) at control instants; disturbance redrawn each step) and
// audit containment in the tube
McReport mc_check(const ClosedLoopSetup& setup, const Box& x0, size_t n_traj, uint64_t seed,
                  const ReachTube& tube);

// one record per grid time: {"t": ..., "lower": [...], "upper": [...]}
void write_tube_jsonl(const ReachTube& tube, std::ostream& out);
// columns t, lo_1..lo_n, hi_1..hi_n
void write_tube_csv(const ReachTube& tube, std::ostream& out);
std::string mc_report_json(const McReport& report);

}  // namespace ival

#endif
