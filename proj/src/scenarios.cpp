#include "ival/scenarios.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "ival/rng.hpp"

namespace ival {

ComposedFunction vehicle_recipe(const VehicleParams& params) {
    if (!(params.lf > 0.0) || !(params.lr > 0.0))
        throw std::invalid_argument("vehicle_recipe: wheelbase lengths must be positive");
    // inputs: px=0, py=1, phi=2, v=3, u1=4, u2=5
    RecipeBuilder rb(6);
    const size_t phi = rb.input(2), v = rb.input(3), u1 = rb.input(4), u2 = rb.input(5);
    // a steering interval across the tan pole must abort rather than flow
    // through arctan, which would silently saturate the slip angle
    const size_t steer = rb.require_finite(rb.tan(u2), "steering tan(u2)");
    const size_t beta = rb.arctan(rb.scale(params.lf / (params.lf + params.lr), steer));
    const size_t heading = rb.add(phi, beta);
    const size_t px_dot = rb.mul(v, rb.cos(heading));
    const size_t py_dot = rb.mul(v, rb.sin(heading));
    const size_t phi_dot = rb.scale(1.0 / params.lr, rb.mul(v, rb.sin(beta)));
    return rb.build({px_dot, py_dot, phi_dot, u1});
}

namespace {

using nlohmann::json;

Box box_from_json(const json& j) {
    if (!j.is_array()) throw ConfigError("config: box must be an array of [lo, hi] pairs");
    std::vector<double> lo, hi;
    for (const auto& pair : j) {
        if (!pair.is_array() || pair.size() != 2)
            throw ConfigError("config: box entries must be [lo, hi] pairs");
        lo.push_back(pair[0].get<double>());
        hi.push_back(pair[1].get<double>());
    }
    try {
        return Box(std::move(lo), std::move(hi));
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: bad box: ") + e.what());
    }
}

json box_to_json(const Box& b) {
    json j = json::array();
    for (size_t i = 0; i < b.dim(); ++i) j.push_back(json::array({b.lo(i), b.hi(i)}));
    return j;
}

}  // namespace

ScenarioConfig scenario_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    ScenarioConfig cfg;
    try {
        cfg.system = j.value("system", std::string("vehicle"));
        if (cfg.system != "vehicle" && cfg.system != "expr")
            throw ConfigError("config: system must be 'vehicle' or 'expr'");
        if (j.contains("params")) {
            cfg.vehicle.lf = j["params"].value("lf", 1.0);
            cfg.vehicle.lr = j["params"].value("lr", 1.0);
        }
        if (cfg.system == "expr") {
            cfg.dynamics = j.at("dynamics").get<std::vector<std::string>>();
            cfg.state_vars = j.at("state_vars").get<std::vector<std::string>>();
            cfg.input_vars = j.value("input_vars", std::vector<std::string>{});
            cfg.dist_vars = j.value("dist_vars", std::vector<std::string>{});
            if (cfg.dynamics.size() != cfg.state_vars.size())
                throw ConfigError("config: dynamics count must match state_vars");
        }
        cfg.initial_box = box_from_json(j.at("initial_box"));
        cfg.t0 = j.value("t0", 0.0);
        cfg.t_end = j.value("t_end", 1.25);
        cfg.step = j.value("step", 0.05);
        cfg.control_period = j.value("control_period", 0.25);
        if (j.contains("disturbance_box")) cfg.disturbance = box_from_json(j["disturbance_box"]);
        cfg.network_path = j.value("network", std::string());
        const std::string method = j.value("bound_method", std::string("crown_localized"));
        if (method == "crown_localized")
            cfg.bound_method = BoundMethod::crown_localized;
        else if (method == "ibp_global")
            cfg.bound_method = BoundMethod::ibp_global;
        else
            throw ConfigError("config: bound_method must be crown_localized or ibp_global");
        cfg.seed = j.value("seed", static_cast<uint64_t>(2023));
        if (j.contains("partition")) cfg.partition = j["partition"].get<std::vector<size_t>>();
        cfg.mc_trajectories = j.value("mc_trajectories", static_cast<size_t>(100));
        cfg.timing_runs = j.value("timing_runs", static_cast<size_t>(1));
        if (j.contains("outputs"))
            cfg.outputs = j["outputs"].get<std::map<std::string, std::string>>();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!(cfg.step > 0.0)) throw ConfigError("config: step must be > 0");
    if (!(cfg.t_end > cfg.t0)) throw ConfigError("config: t_end must be > t0");
    if (!(cfg.control_period > 0.0)) throw ConfigError("config: control_period must be > 0");
    if (!cfg.partition.empty() && cfg.partition.size() != cfg.initial_box.dim())
        throw ConfigError("config: partition counts must match the state dimension");
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return scenario_from_json(ss.str());
}

ScenarioConfig default_vehicle_scenario() {
    constexpr double third = 2.0 * std::numbers::pi / 3.0;
    ScenarioConfig cfg;
    cfg.initial_box = Box({7.95, 7.95, -third - 0.005, 1.995}, {8.05, 8.05, -third + 0.005, 2.005});
    return cfg;
}

ClosedLoopSetup build_setup(const ScenarioConfig& cfg, FeedForwardNetwork controller) {
    ComposedFunction f;
    size_t n, p, q;
    if (cfg.system == "vehicle") {
        f = vehicle_recipe(cfg.vehicle);
        n = 4;
        p = 2;
        q = 0;
    } else {
        std::vector<std::string> vars = cfg.state_vars;
        vars.insert(vars.end(), cfg.input_vars.begin(), cfg.input_vars.end());
        vars.insert(vars.end(), cfg.dist_vars.begin(), cfg.dist_vars.end());
        f = compile_expressions(cfg.dynamics, vars);
        n = cfg.state_vars.size();
        p = cfg.input_vars.size();
        q = cfg.dist_vars.size();
    }
    if (cfg.disturbance.dim() != q)
        throw ConfigError("config: disturbance_box dimension must match the disturbance inputs");
    ClosedLoopSetup setup;
    setup.system = make_system(n, p, q, std::move(f));
    setup.controller = std::move(controller);
    setup.control_period = cfg.control_period;
    const Box w = cfg.disturbance;
    setup.disturbance = [w](double) { return w; };
    setup.bound_method = cfg.bound_method;
    validate(setup);
    return setup;
}

namespace {

bool trivial_partition(const std::vector<size_t>& counts) {
    for (size_t k : counts)
        if (k != 1) return false;
    return true;
}

void write_named_output(const std::map<std::string, std::string>& outputs, const std::string& key,
                        const std::function<void(std::ostream&)>& writer) {
    const auto it = outputs.find(key);
    if (it == outputs.end()) return;
    std::ofstream out(it->second);
    if (!out) throw ConfigError("config: cannot open output file " + it->second);
    writer(out);
}

}  // namespace

void write_plot_xy_csv(const ReachTube& tube, std::ostream& out) {
    out << "t,px_lo,px_hi,py_lo,py_hi\n";
    for (size_t j = 0; j < tube.times.size(); ++j) {
        const Box& b = tube.boxes[j];
        out << format_double(tube.times[j]) << "," << format_double(b.lo(0)) << ","
            << format_double(b.hi(0)) << "," << format_double(b.lo(1)) << ","
            << format_double(b.hi(1)) << "\n";
    }
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, const FeedForwardNetwork& controller) {
    const ClosedLoopSetup setup = build_setup(cfg, controller);
    ScenarioResult result;

    const bool partitioned = !cfg.partition.empty() && !trivial_partition(cfg.partition);
    std::vector<Box> cells =
        partitioned ? split_uniform(cfg.initial_box, cfg.partition) : std::vector<Box>{cfg.initial_box};

    auto run_once = [&]() {
        std::vector<ReachTube> tubes(cells.size());
        std::vector<std::exception_ptr> errors(cells.size());
        const long n_cells = static_cast<long>(cells.size());
#pragma omp parallel for schedule(dynamic)
        for (long c = 0; c < n_cells; ++c) {
            const auto i = static_cast<size_t>(c);
            try {
                tubes[i] = euler_reach(setup, cells[i], cfg.t0, cfg.t_end, cfg.step);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
        for (const std::exception_ptr& e : errors)
            if (e) std::rethrow_exception(e);
        return tubes;
    };

    const size_t runs = std::max<size_t>(1, cfg.timing_runs);
    std::vector<double> timings(runs);
    std::vector<ReachTube> tubes;
    for (size_t r = 0; r < runs; ++r) {
        const auto start = std::chrono::steady_clock::now();
        tubes = run_once();
        timings[r] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    double mean = 0.0;
    for (double t : timings) mean += t;
    mean /= static_cast<double>(runs);
    double var = 0.0;
    for (double t : timings) var += (t - mean) * (t - mean);
    result.runtime_mean_seconds = mean;
    result.runtime_std_seconds = runs > 1 ? std::sqrt(var / static_cast<double>(runs - 1)) : 0.0;

    if (tubes.size() == 1) {
        result.tube = tubes.front();
    } else {
        // hull tube across the partition cells, per grid time
        result.tube = tubes.front();
        for (size_t j = 0; j < result.tube.boxes.size(); ++j) {
            std::vector<Box> at_j;
            at_j.reserve(tubes.size());
            for (const ReachTube& t : tubes) at_j.push_back(t.boxes[j]);
            result.tube.boxes[j] = hull(at_j);
        }
        result.cell_tubes = std::move(tubes);
    }
    result.tube.seed = cfg.seed;

    if (cfg.mc_trajectories > 0)
        result.mc = mc_check(setup, cfg.initial_box, cfg.mc_trajectories, cfg.seed, result.tube);

    write_named_output(cfg.outputs, "tube_jsonl",
                       [&](std::ostream& o) { write_tube_jsonl(result.tube, o); });
    write_named_output(cfg.outputs, "tube_csv",
                       [&](std::ostream& o) { write_tube_csv(result.tube, o); });
    write_named_output(cfg.outputs, "mc_report",
                       [&](std::ostream& o) { o << mc_report_json(result.mc) << "\n"; });
    if (setup.system.state_dim >= 2)
        write_named_output(cfg.outputs, "plot_xy",
                           [&](std::ostream& o) { write_plot_xy_csv(result.tube, o); });
    write_named_output(cfg.outputs, "stats", [&](std::ostream& o) {
        json s;
        s["runs"] = runs;
        s["runtime_mean_seconds"] = result.runtime_mean_seconds;
        s["runtime_std_seconds"] = result.runtime_std_seconds;
        s["control_instants"] = result.tube.control_instants;
        s["fallback_events"] = result.tube.fallback_events;
        o << s.dump() << "\n";
    });
    return result;
}

ComposedFunction fig1_decomposition_a() {
    return compile_expressions({"(x1 + x2)^2", "4*sin((x1 - x2)/4)"}, {"x1", "x2"});
}

ComposedFunction fig1_decomposition_b() {
    return compile_expressions(
        {"x1^2 + 2*x1*x2 + x2^2", "4*sin(x1/4)*cos(x2/4) - 4*cos(x1/4)*sin(x2/4)"}, {"x1", "x2"});
}

Fig1Result run_fig1_demo(std::span<const size_t> counts, size_t n_samples, uint64_t seed) {
    const Box domain({-1.0, -1.0}, {1.0, 1.0});
    const ComposedFunction fa = fig1_decomposition_a();
    const ComposedFunction fb = fig1_decomposition_b();

    Fig1Result r;
    r.single_a = natural_evaluate(fa, domain);
    r.single_b = natural_evaluate(fb, domain);
    r.part_a = partitioned_evaluate(fa, domain, counts);
    r.part_b = partitioned_evaluate(fb, domain, counts);

    const std::vector<Box> cells = split_uniform(domain, counts);
    SplitMix64 rng(seed);
    r.samples.reserve(n_samples);
    for (size_t s = 0; s < n_samples; ++s) {
        const std::vector<double> x = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        // both decompositions evaluate the same function; each enclosure is
        // audited against its own point-mode image
        const std::vector<double> ya = point_evaluate(fa, x);
        const std::vector<double> yb = point_evaluate(fb, x);
        bool ok = r.single_a.contains(ya) && r.single_b.contains(yb);
        // the per-cell unions must cover the image of every sample; find the
        // sample's cell(s) and test those outputs
        bool in_union_a = false, in_union_b = false;
        for (size_t c = 0; c < cells.size(); ++c) {
            if (!cells[c].contains(x)) continue;
            if (r.part_a.cell_results[c].contains(ya)) in_union_a = true;
            if (r.part_b.cell_results[c].contains(yb)) in_union_b = true;
        }
        if (!(ok && in_union_a && in_union_b)) ++r.samples_outside;
        r.samples.push_back(ya);
    }
    return r;
}

std::string fig1_to_json(const Fig1Result& r) {
    json j;
    j["single_a"] = box_to_json(r.single_a);
    j["single_b"] = box_to_json(r.single_b);
    j["hull_a"] = box_to_json(r.part_a.hull);
    j["hull_b"] = box_to_json(r.part_b.hull);
    json cells_a = json::array(), cells_b = json::array();
    for (const Box& b : r.part_a.cell_results) cells_a.push_back(box_to_json(b));
    for (const Box& b : r.part_b.cell_results) cells_b.push_back(box_to_json(b));
    j["cells_a"] = std::move(cells_a);
    j["cells_b"] = std::move(cells_b);
    json samples = json::array();
    for (const auto& s : r.samples) samples.push_back(s);
    j["samples"] = std::move(samples);
    j["samples_outside"] = r.samples_outside;
    return j.dump();
}

}  // namespace ival
