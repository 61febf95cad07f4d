#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ival/scenarios.hpp"

namespace {

// "l1,u1;l2,u2;..."
ival::Box parse_box_spec(const std::string& spec) {
    std::vector<double> lo, hi;
    std::stringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, ';')) {
        const size_t comma = part.find(',');
        if (comma == std::string::npos)
            throw ival::ConfigError("box: expected 'lo,hi' pairs separated by ';'");
        lo.push_back(std::stod(part.substr(0, comma)));
        hi.push_back(std::stod(part.substr(comma + 1)));
    }
    if (lo.empty()) throw ival::ConfigError("box: empty specification");
    try {
        return ival::Box(std::move(lo), std::move(hi));
    } catch (const std::exception& e) {
        throw ival::ConfigError(std::string("box: ") + e.what());
    }
}

std::vector<size_t> parse_counts(const std::string& spec) {
    std::vector<size_t> counts;
    std::stringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, ',')) counts.push_back(std::stoul(part));
    return counts;
}

void print_box(const ival::Box& b, std::ostream& out) {
    for (size_t i = 0; i < b.dim(); ++i)
        out << ival::to_string(b.interval(i)) << (i + 1 < b.dim() ? " " : "\n");
}

ival::FeedForwardNetwork controller_for(const ival::ScenarioConfig& cfg) {
    if (!cfg.network_path.empty()) return ival::load_network(cfg.network_path);
    // seeded stand-in controller sized to the configured system
    size_t n = 4, p = 2;
    if (cfg.system == "expr") {
        n = cfg.state_vars.size();
        p = cfg.input_vars.size();
    }
    if (p == 0)
        throw ival::ConfigError("config: a closed-loop run needs at least one control input");
    const size_t dims[] = {n, 100, 100, p};
    return ival::random_network(dims, cfg.seed, 0.1);
}

int run_eval(const std::string& expr_list, const std::string& vars_csv, const std::string& box_spec,
             size_t partition_per_axis, int inflate_ulps) {
    std::vector<std::string> exprs;
    {
        std::stringstream ss(expr_list);
        std::string e;
        while (std::getline(ss, e, ';'))
            if (!e.empty()) exprs.push_back(e);
    }
    std::vector<std::string> vars;
    {
        std::stringstream ss(vars_csv);
        std::string v;
        while (std::getline(ss, v, ','))
            if (!v.empty()) vars.push_back(v);
    }
    const ival::ComposedFunction f = ival::compile_expressions(exprs, vars);
    const ival::Box box = parse_box_spec(box_spec);
    ival::Box out({}, {});
    if (partition_per_axis > 1) {
        const std::vector<size_t> counts(box.dim(), partition_per_axis);
        out = ival::partitioned_evaluate(f, box, counts).hull;
    } else {
        out = ival::natural_evaluate(f, box);
    }
    if (inflate_ulps > 0) {
        std::vector<double> lo(out.dim()), hi(out.dim());
        for (size_t i = 0; i < out.dim(); ++i) {
            const ival::Interval v = ival::inflate(out.interval(i), inflate_ulps);
            lo[i] = v.lo;
            hi[i] = v.hi;
        }
        out = ival::Box(std::move(lo), std::move(hi));
    }
    print_box(out, std::cout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"interval arithmetic and reachability toolkit"};
    app.require_subcommand(1);

    // eval
    std::string expr_list, vars_csv = "x", box_spec;
    size_t eval_partition = 1;
    int inflate_ulps = 0;
    auto* eval = app.add_subcommand("eval", "evaluate expressions over an input box");
    eval->add_option("--expr", expr_list, "expressions, ';'-separated")->required();
    eval->add_option("--vars", vars_csv, "variable names, ','-separated");
    eval->add_option("--box", box_spec, "input box 'l1,u1;l2,u2;...'")->required();
    eval->add_option("--partition", eval_partition, "uniform cells per axis");
    eval->add_option("--inflate", inflate_ulps, "widen each output endpoint by k ulps");

    // demo fig1
    std::string demo_kind = "fig1";
    std::string demo_partition = "32,32";
    size_t demo_samples = 2000;
    uint64_t demo_seed = 2023;
    std::string demo_out;
    auto* demo = app.add_subcommand("demo", "built-in demos");
    demo->add_option("kind", demo_kind, "demo name (fig1)");
    demo->add_option("--partition", demo_partition, "cells per axis, e.g. 32,32");
    demo->add_option("--samples", demo_samples, "sampled image points");
    demo->add_option("--seed", demo_seed, "sampling seed");
    demo->add_option("--out", demo_out, "write demo data (JSON) to this file");

    // reach / mc
    std::string config_path, reach_partition, net_override;
    auto* reach = app.add_subcommand("reach", "compute a reach tube from a scenario config");
    reach->add_option("--config", config_path, "scenario config (JSON)")->required();
    reach->add_option("--partition", reach_partition, "override partition counts kx,ky,...");
    reach->add_option("--net", net_override, "override controller weight file");

    std::string mc_config;
    size_t mc_samples = 0;
    auto* mc = app.add_subcommand("mc", "Monte Carlo containment audit of a scenario");
    mc->add_option("--config", mc_config, "scenario config (JSON)")->required();
    mc->add_option("--samples", mc_samples, "trajectory count override");

    // bounds
    std::string bounds_net, bounds_box, bounds_method = "ibp";
    auto* bounds = app.add_subcommand("bounds", "network output bounds over an input box");
    bounds->add_option("--net", bounds_net, "network weight file")->required();
    bounds->add_option("--box", bounds_box, "input box 'l1,u1;...'")->required();
    bounds->add_option("--method", bounds_method, "ibp | crown");

    // gen-net
    std::string gen_dims = "4,100,100,2", gen_out = "net.json";
    uint64_t gen_seed = 2023;
    double gen_scale = 0.1;
    auto* gen = app.add_subcommand("gen-net", "generate a seeded random relu network");
    gen->add_option("--dims", gen_dims, "layer sizes, e.g. 4,100,100,2");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--scale", gen_scale, "final-layer scale factor");
    gen->add_option("--out", gen_out, "output weight file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*eval) return run_eval(expr_list, vars_csv, box_spec, eval_partition, inflate_ulps);

        if (*demo) {
            if (demo_kind != "fig1") throw ival::ConfigError("demo: unknown demo " + demo_kind);
            const std::vector<size_t> counts = parse_counts(demo_partition);
            const ival::Fig1Result r = ival::run_fig1_demo(counts, demo_samples, demo_seed);
            std::cerr << "decomposition A single box: ";
            print_box(r.single_a, std::cerr);
            std::cerr << "decomposition B single box: ";
            print_box(r.single_b, std::cerr);
            std::cerr << "decomposition A partition hull: ";
            print_box(r.part_a.hull, std::cerr);
            std::cerr << "decomposition B partition hull: ";
            print_box(r.part_b.hull, std::cerr);
            std::cerr << "samples outside any enclosure: " << r.samples_outside << "\n";
            if (!demo_out.empty()) {
                std::ofstream out(demo_out);
                if (!out) throw ival::ConfigError("demo: cannot open " + demo_out);
                out << ival::fig1_to_json(r) << "\n";
            }
            return r.samples_outside == 0 ? 0 : 1;
        }

        if (*reach || *mc) {
            ival::ScenarioConfig cfg = ival::load_scenario(*reach ? config_path : mc_config);
            if (*reach && !reach_partition.empty()) cfg.partition = parse_counts(reach_partition);
            if (*reach && !net_override.empty()) cfg.network_path = net_override;
            if (*mc && mc_samples > 0) cfg.mc_trajectories = mc_samples;
            const ival::ScenarioResult r = ival::run_scenario(cfg, controller_for(cfg));
            std::cerr << "tube: " << r.tube.times.size() << " grid points, "
                      << r.tube.control_instants.size() << " control instants\n";
            std::cerr << "runtime: mean " << r.runtime_mean_seconds << " s, std "
                      << r.runtime_std_seconds << " s\n";
            if (cfg.mc_trajectories > 0)
                std::cerr << "mc: " << r.mc.trajectories << " trajectories, " << r.mc.violations
                          << " violations\n";
            return r.mc.violations == 0 ? 0 : 1;
        }

        if (*bounds) {
            const ival::FeedForwardNetwork net = ival::load_network(bounds_net);
            const ival::Box box = parse_box_spec(bounds_box);
            if (bounds_method == "ibp") {
                print_box(ival::ibp_bounds(net, box), std::cout);
            } else if (bounds_method == "crown") {
                const ival::AffineBoundPair b = ival::crown_bounds(net, box);
                print_box(ival::localized_incl(b, box), std::cout);
            } else {
                throw ival::ConfigError("bounds: method must be ibp or crown");
            }
            return 0;
        }

        if (*gen) {
            const std::vector<size_t> dims = parse_counts(gen_dims);
            ival::save_network(ival::random_network(dims, gen_seed, gen_scale), gen_out);
            std::cerr << "wrote " << gen_out << "\n";
            return 0;
        }
    } catch (const ival::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ival::ReachError& e) {
        std::cerr << "verification abort: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
