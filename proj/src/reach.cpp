#include "ival/reach.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "ival/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ival {

OpenLoopSystem make_system(size_t n, size_t p, size_t q, ComposedFunction f) {
    if (f.input_arity() != n + p + q)
        throw std::invalid_argument("make_system: f input arity must be state+input+dist");
    if (f.output_arity() != n)
        throw std::invalid_argument("make_system: f output arity must equal state dim");
    return OpenLoopSystem{n, p, q, std::move(f)};
}

void validate(const ClosedLoopSetup& setup) {
    if (setup.controller.input_dim() != setup.system.state_dim)
        throw std::invalid_argument("setup: controller input dim != state dim");
    if (setup.controller.output_dim() != setup.system.input_dim)
        throw std::invalid_argument("setup: controller output dim != control dim");
    if (!(setup.control_period > 0.0))
        throw std::invalid_argument("setup: control period must be > 0");
    if (!setup.disturbance) throw std::invalid_argument("setup: missing disturbance map");
}

EmbeddingRates open_embedding_rhs(const OpenLoopSystem& sys, const Box& x, const Box& u,
                                  const Box& w) {
    if (x.dim() != sys.state_dim || u.dim() != sys.input_dim || w.dim() != sys.dist_dim)
        throw std::invalid_argument("open_embedding_rhs: dimension mismatch");
    EmbeddingRates r;
    r.lower.resize(sys.state_dim);
    r.upper.resize(sys.state_dim);
    for (size_t i = 0; i < sys.state_dim; ++i) {
        const Box lo_img = natural_evaluate(sys.f, concat(face_box(x, i, Face::lower), u, w));
        const Box hi_img = natural_evaluate(sys.f, concat(face_box(x, i, Face::upper), u, w));
        r.lower[i] = lo_img.lo(i);
        r.upper[i] = hi_img.hi(i);
    }
    return r;
}

namespace {

Box control_interval_for_face(const ClosedLoopSetup& setup, const AffineBoundPair& bounds,
                              const Box& face, bool& fallback) {
    if (setup.bound_method == BoundMethod::ibp_global)
        return ibp_bounds(setup.controller, face);
    try {
        return localized_incl(bounds, face);
    } catch (const LocalizationError&) {
        fallback = true;
        return ibp_bounds(setup.controller, face);
    }
}

}  // namespace

EmbeddingRates closed_embedding_rhs(const ClosedLoopSetup& setup, const Box& x, const Box& w,
                                    const AffineBoundPair& bounds) {
    const OpenLoopSystem& sys = setup.system;
    if (x.dim() != sys.state_dim || w.dim() != sys.dist_dim)
        throw std::invalid_argument("closed_embedding_rhs: dimension mismatch");
    EmbeddingRates r;
    r.lower.resize(sys.state_dim);
    r.upper.resize(sys.state_dim);
    for (size_t i = 0; i < sys.state_dim; ++i) {
        const Box lo_face = face_box(x, i, Face::lower);
        const Box hi_face = face_box(x, i, Face::upper);
        const Box lo_u = control_interval_for_face(setup, bounds, lo_face, r.used_fallback);
        const Box hi_u = control_interval_for_face(setup, bounds, hi_face, r.used_fallback);
        r.lower[i] = natural_evaluate(sys.f, concat(lo_face, lo_u, w)).lo(i);
        r.upper[i] = natural_evaluate(sys.f, concat(hi_face, hi_u, w)).hi(i);
    }
    return r;
}

namespace {

size_t grid_steps(double t0, double t_end, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("reach: step must be > 0");
    if (!(t_end > t0)) throw std::invalid_argument("reach: t_end must be > t0");
    const double raw = (t_end - t0) / h;
    const auto n = static_cast<size_t>(std::llround(raw));
    if (n < 1 || std::fabs(static_cast<double>(n) * h - (t_end - t0)) > 1e-9 * std::max(1.0, t_end - t0))
        throw std::invalid_argument("reach: horizon is not a whole number of steps");
    return n;
}

void check_rates_finite(const EmbeddingRates& r, double t) {
    for (size_t i = 0; i < r.lower.size(); ++i)
        if (!std::isfinite(r.lower[i]) || !std::isfinite(r.upper[i]))
            throw ReachError(t, "non-finite embedding rate in coordinate " + std::to_string(i) +
                                    " (inclusion hit a pole)");
}

// the one Euler update expression, shared by the embedding and the Monte
// Carlo truth so degenerate runs agree bitwise
inline double euler_step(double x, double h, double rate) { return x + h * rate; }

Box advance(const Box& x, double h, const EmbeddingRates& r, double t_next) {
    std::vector<double> lo(x.dim()), hi(x.dim());
    for (size_t i = 0; i < x.dim(); ++i) {
        lo[i] = euler_step(x.lo(i), h, r.lower[i]);
        hi[i] = euler_step(x.hi(i), h, r.upper[i]);
        if (!(lo[i] <= hi[i]))
            throw ReachError(t_next, "embedding order violated in coordinate " +
                                         std::to_string(i) + " (unstable step)");
    }
    return Box(std::move(lo), std::move(hi));
}

}  // namespace

ReachTube euler_reach(const ClosedLoopSetup& setup, const Box& x0, double t0, double t_end,
                      double h) {
    validate(setup);
    if (x0.dim() != setup.system.state_dim)
        throw std::invalid_argument("euler_reach: initial box dimension mismatch");
    if (!x0.finite()) throw std::invalid_argument("euler_reach: initial box must be finite");
    const size_t n_steps = grid_steps(t0, t_end, h);
    const auto t_start = std::chrono::steady_clock::now();

    ReachTube tube;
    tube.step = h;
    tube.times.reserve(n_steps + 1);
    tube.boxes.reserve(n_steps + 1);
    tube.times.push_back(t0);
    tube.boxes.push_back(x0);

    Box x = x0;
    AffineBoundPair bounds;
    Box held_u;
    size_t n_holds = 0;
    for (size_t j = 0; j < n_steps; ++j) {
        const double t = t0 + static_cast<double>(j) * h;
        const double next_instant = t0 + static_cast<double>(n_holds) * setup.control_period;
        const Box w = setup.disturbance(t);
        EmbeddingRates rates;
        try {
            if (t >= next_instant - 0.5 * h) {
                // control instant: refresh bounds on the current box and
                // advance with the face-wise closed-loop rates
                tube.control_instants.push_back(t);
                ++n_holds;
                if (setup.bound_method == BoundMethod::crown_localized) {
                    bounds = crown_bounds(setup.controller, x);
                    held_u = localized_incl(bounds, x);
                } else {
                    held_u = ibp_bounds(setup.controller, x);
                }
                rates = closed_embedding_rhs(setup, x, w, bounds);
                if (rates.used_fallback) tube.fallback_events.push_back(t);
            } else {
                rates = open_embedding_rhs(setup.system, x, held_u, w);
            }
        } catch (const StageError& e) {
            throw ReachError(t, e.what());
        }
        check_rates_finite(rates, t);
        x = advance(x, h, rates, t0 + static_cast<double>(j + 1) * h);
        tube.times.push_back(t0 + static_cast<double>(j + 1) * h);
        tube.boxes.push_back(x);
    }
    tube.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return tube;
}

ReachTube open_reach_with_global_u(const OpenLoopSystem& sys, const Box& x0,
                                   const std::function<Box(double)>& u_schedule,
                                   const std::function<Box(double)>& w_schedule, double t0,
                                   double t_end, double h) {
    if (x0.dim() != sys.state_dim)
        throw std::invalid_argument("open_reach: initial box dimension mismatch");
    if (!x0.finite()) throw std::invalid_argument("open_reach: initial box must be finite");
    const size_t n_steps = grid_steps(t0, t_end, h);
    const auto t_start = std::chrono::steady_clock::now();

    ReachTube tube;
    tube.step = h;
    tube.times.push_back(t0);
    tube.boxes.push_back(x0);
    Box x = x0;
    for (size_t j = 0; j < n_steps; ++j) {
        const double t = t0 + static_cast<double>(j) * h;
        EmbeddingRates rates;
        try {
            rates = open_embedding_rhs(sys, x, u_schedule(t), w_schedule(t));
        } catch (const StageError& e) {
            throw ReachError(t, e.what());
        }
        check_rates_finite(rates, t);
        x = advance(x, h, rates, t0 + static_cast<double>(j + 1) * h);
        tube.times.push_back(t0 + static_cast<double>(j + 1) * h);
        tube.boxes.push_back(x);
    }
    tube.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return tube;
}

McReport mc_check(const ClosedLoopSetup& setup, const Box& x0, size_t n_traj, uint64_t seed,
                  const ReachTube& tube) {
    validate(setup);
    if (tube.boxes.empty()) throw std::invalid_argument("mc_check: empty tube");
    const size_t n = setup.system.state_dim;
    const double h = tube.step;

    McReport report;
    report.trajectories = n_traj;
    report.min_margin.assign(n, std::numeric_limits<double>::infinity());
    report.max_violation.assign(n, 0.0);
    if (n_traj == 0) return report;

    const size_t n_states = tube.boxes.size();
    std::vector<size_t> violations_per_traj(n_traj, 0);
    std::vector<std::vector<double>> min_margin_per_traj(n_traj);
    std::vector<std::vector<double>> max_violation_per_traj(n_traj);
    std::vector<std::exception_ptr> errors(n_traj);

    auto run_trajectory = [&](size_t m) {
        SplitMix64 rng = SplitMix64::substream(seed, m);
        std::vector<double>& min_margin = min_margin_per_traj[m];
        std::vector<double>& max_violation = max_violation_per_traj[m];
        min_margin.assign(n, std::numeric_limits<double>::infinity());
        max_violation.assign(n, 0.0);
        size_t& bad = violations_per_traj[m];

        std::vector<double> x(n);
        for (size_t i = 0; i < n; ++i) x[i] = rng.uniform(x0.lo(i), x0.hi(i));

        auto audit = [&](size_t step) {
            const Box& b = tube.boxes[step];
            bool violated = false;
            for (size_t i = 0; i < n; ++i) {
                const double lo_margin = x[i] - b.lo(i);
                const double hi_margin = b.hi(i) - x[i];
                const double margin = std::min(lo_margin, hi_margin);
                min_margin[i] = std::min(min_margin[i], margin);
                if (margin < 0.0) {
                    violated = true;
                    max_violation[i] = std::max(max_violation[i], -margin);
                }
            }
            if (violated) ++bad;
        };
        audit(0);

        std::vector<double> u(setup.system.input_dim, 0.0);
        std::vector<double> w(setup.system.dist_dim);
        std::vector<double> z(n + setup.system.input_dim + setup.system.dist_dim);
        size_t n_holds = 0;
        const double t0 = tube.times.front();
        for (size_t j = 0; j + 1 < n_states; ++j) {
            const double t = tube.times[j];
            if (t >= t0 + static_cast<double>(n_holds) * setup.control_period - 0.5 * h) {
                u = setup.controller.forward(x);
                ++n_holds;
            }
            const Box wbox = setup.disturbance(t);
            for (size_t i = 0; i < w.size(); ++i) w[i] = rng.uniform(wbox.lo(i), wbox.hi(i));
            std::copy(x.begin(), x.end(), z.begin());
            std::copy(u.begin(), u.end(), z.begin() + static_cast<long>(n));
            std::copy(w.begin(), w.end(), z.begin() + static_cast<long>(n + u.size()));
            const std::vector<double> rate = point_evaluate(setup.system.f, z);
            for (size_t i = 0; i < n; ++i) x[i] = euler_step(x[i], h, rate[i]);
            audit(j + 1);
        }
    };

    const long m_count = static_cast<long>(n_traj);
#pragma omp parallel for schedule(static)
    for (long m = 0; m < m_count; ++m) {
        try {
            run_trajectory(static_cast<size_t>(m));
        } catch (...) {
            errors[static_cast<size_t>(m)] = std::current_exception();
        }
    }
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);

    for (size_t m = 0; m < n_traj; ++m) {
        report.violations += violations_per_traj[m];
        for (size_t i = 0; i < n; ++i) {
            report.min_margin[i] = std::min(report.min_margin[i], min_margin_per_traj[m][i]);
            report.max_violation[i] = std::max(report.max_violation[i], max_violation_per_traj[m][i]);
        }
    }
    report.checked_states = n_traj * n_states;
    return report;
}

void write_tube_jsonl(const ReachTube& tube, std::ostream& out) {
    for (size_t j = 0; j < tube.times.size(); ++j) {
        out << "{\"t\": " << format_double(tube.times[j]) << ", \"lower\": [";
        const Box& b = tube.boxes[j];
        for (size_t i = 0; i < b.dim(); ++i)
            out << (i ? ", " : "") << format_double(b.lo(i));
        out << "], \"upper\": [";
        for (size_t i = 0; i < b.dim(); ++i)
            out << (i ? ", " : "") << format_double(b.hi(i));
        out << "]}\n";
    }
}

void write_tube_csv(const ReachTube& tube, std::ostream& out) {
    const size_t n = tube.boxes.empty() ? 0 : tube.boxes.front().dim();
    out << "t";
    for (size_t i = 0; i < n; ++i) out << ",lo_" << (i + 1);
    for (size_t i = 0; i < n; ++i) out << ",hi_" << (i + 1);
    out << "\n";
    for (size_t j = 0; j < tube.times.size(); ++j) {
        out << format_double(tube.times[j]);
        for (size_t i = 0; i < n; ++i) out << "," << format_double(tube.boxes[j].lo(i));
        for (size_t i = 0; i < n; ++i) out << "," << format_double(tube.boxes[j].hi(i));
        out << "\n";
    }
}

std::string mc_report_json(const McReport& report) {
    nlohmann::json j;
    j["trajectories"] = report.trajectories;
    j["checked_states"] = report.checked_states;
    j["violations"] = report.violations;
    j["min_margin"] = report.min_margin;
    j["max_violation"] = report.max_violation;
    return j.dump();
}

}  // namespace ival
