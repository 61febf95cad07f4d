#ifndef IVAL_SCENARIOS_HPP
#define IVAL_SCENARIOS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ival/reach.hpp"

namespace ival {

// malformed scenario configuration; the CLI maps this to exit code 2
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Kinematic single-track vehicle, state (px, py, phi, v), input (u1, u2):
//   px' = v cos(phi + beta(u2))      phi' = v/lr sin(beta(u2))
//   py' = v sin(phi + beta(u2))      v'   = u1
// with slip angle beta(u2) = arctan(lf/(lf+lr) tan(u2)).
struct VehicleParams {
    double lf = 1.0;
    double lr = 1.0;
};

// point mode is the exact right-hand side; box mode its natural inclusion.
// A steering interval crossing the tan pole surfaces as a ReachError from
// the integrator.
ComposedFunction vehicle_recipe(const VehicleParams& params);

struct ScenarioConfig {
    std::string system = "vehicle";  // "vehicle" or "expr"
    VehicleParams vehicle;
    std::vector<std::string> dynamics;  // expr systems: one expression per state
    std::vector<std::string> state_vars, input_vars, dist_vars;
    Box initial_box;
    double t0 = 0.0;
    double t_end = 1.25;
    double step = 0.05;
    double control_period = 0.25;
    Box disturbance;  // constant-in-time box; may be zero-dimensional
    std::string network_path;
    BoundMethod bound_method = BoundMethod::crown_localized;
    uint64_t seed = 2023;
    std::vector<size_t> partition;  // empty or all-ones: no partitioning
    size_t mc_trajectories = 100;
    size_t timing_runs = 1;  // repeated tube computations for runtime stats
    std::map<std::string, std::string> outputs;  // tube_jsonl, tube_csv, mc_report, plot_xy, stats
};

ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig scenario_from_json(const std::string& text);

// the benchmark scenario: initial set [7.95,8.05]^2 x (-2pi/3 +- 0.005) x
// [1.995,2.005], horizon [0, 1.25], step 0.05, control every 0.25
ScenarioConfig default_vehicle_scenario();

ClosedLoopSetup build_setup(const ScenarioConfig& cfg, FeedForwardNetwork controller);

struct ScenarioResult {
    ReachTube tube;                 // hull tube when partitioned
    std::vector<ReachTube> cell_tubes;  // per-cell tubes (partitioned runs)
    McReport mc;
    double runtime_mean_seconds = 0.0;
    double runtime_std_seconds = 0.0;
};

// run the tube (timing_runs times for the runtime stats), Monte Carlo audit,
// and write every file named in cfg.outputs
ScenarioResult run_scenario(const ScenarioConfig& cfg, const FeedForwardNetwork& controller);

// write (px, py) tube projection: columns t, px_lo, px_hi, py_lo, py_hi
void write_plot_xy_csv(const ReachTube& tube, std::ostream& out);

// the two-decomposition demo: f(x1,x2) = ((x1+x2)^2, 4 sin((x1-x2)/4)) and
// its expanded form, on [-1,1]^2, single-box and partitioned, plus sampled
// image points
struct Fig1Result {
    Box single_a, single_b;
    PartitionedResult part_a, part_b;
    std::vector<std::vector<double>> samples;  // image points
    size_t samples_outside = 0;                // count not inside all four enclosures
};

Fig1Result run_fig1_demo(std::span<const size_t> counts, size_t n_samples, uint64_t seed);
std::string fig1_to_json(const Fig1Result& r);

ComposedFunction fig1_decomposition_a();
ComposedFunction fig1_decomposition_b();

}  // namespace ival

#endif
