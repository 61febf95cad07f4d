// Timing comparison of the serial reference kernels against the OpenMP
// variants, with a bitwise agreement check on every result.
#include <chrono>
#include <cstdio>
#include <vector>

#include "ival/kernels.hpp"
#include "ival/rng.hpp"
#include "ival/scenarios.hpp"

namespace {

using ival::Interval;

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::vector<Interval> random_intervals(size_t n, uint64_t seed) {
    ival::SplitMix64 rng(seed);
    std::vector<Interval> out;
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        const double a = rng.uniform(-10.0, 10.0);
        const double b = rng.uniform(-10.0, 10.0);
        out.emplace_back(std::min(a, b), std::max(a, b));
    }
    return out;
}

bool bitwise_equal(std::span<const Interval> a, std::span<const Interval> b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i].lo != b[i].lo || a[i].hi != b[i].hi) return false;
    return true;
}

template <typename F>
double time_best_of(int reps, F&& fn) {
    double best = 1e30;
    for (int r = 0; r < reps; ++r) {
        const double t0 = now_seconds();
        fn();
        best = std::min(best, now_seconds() - t0);
    }
    return best;
}

void report(const char* name, double serial, double parallel, bool equal) {
    std::printf("%-22s serial %9.4f ms   parallel %9.4f ms   speedup %5.2fx   %s\n", name,
                serial * 1e3, parallel * 1e3, serial / parallel,
                equal ? "bitwise-equal" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    const size_t map_n = argc > 1 ? std::stoul(argv[1]) : 1u << 20;
    const size_t mat_n = argc > 2 ? std::stoul(argv[2]) : 256;
    const int reps = argc > 3 ? std::stoi(argv[3]) : 3;

    std::printf("openmp: %s, max threads %d\n", ival::kernels::openmp_enabled() ? "on" : "off",
                ival::kernels::max_threads());

    bool all_equal = true;

    {
        const std::vector<Interval> in = random_intervals(map_n, 11);
        std::vector<Interval> out_s(map_n), out_p(map_n);
        const ival::UnaryFn f = [](const Interval& v) { return ival::sin_incl(v); };
        const double ts =
            time_best_of(reps, [&] { ival::kernels::map_unary_serial(f, in, out_s); });
        const double tp =
            time_best_of(reps, [&] { ival::kernels::map_unary_parallel(f, in, out_p); });
        const bool eq = bitwise_equal(out_s, out_p);
        all_equal = all_equal && eq;
        report("map sin", ts, tp, eq);
    }

    {
        const std::vector<Interval> a = random_intervals(map_n, 12);
        const std::vector<Interval> b = random_intervals(map_n, 13);
        std::vector<Interval> out_s(map_n), out_p(map_n);
        const ival::BinaryFn f = [](const Interval& x, const Interval& y) {
            return ival::mul(x, y);
        };
        const std::vector<size_t> shape = {map_n};
        const std::vector<size_t> stride = {1};
        const double ts = time_best_of(reps, [&] {
            ival::kernels::map_binary_serial(f, a.data(), stride.data(), b.data(), stride.data(),
                                             out_s.data(), shape.data(), 1, map_n);
        });
        const double tp = time_best_of(reps, [&] {
            ival::kernels::map_binary_parallel(f, a.data(), stride.data(), b.data(), stride.data(),
                                               out_p.data(), shape.data(), 1, map_n);
        });
        const bool eq = bitwise_equal(out_s, out_p);
        all_equal = all_equal && eq;
        report("map mul", ts, tp, eq);
    }

    {
        const std::vector<Interval> A = random_intervals(mat_n * mat_n, 14);
        const std::vector<Interval> B = random_intervals(mat_n * mat_n, 15);
        std::vector<Interval> C_s(mat_n * mat_n), C_p(mat_n * mat_n);
        const double ts = time_best_of(reps, [&] {
            ival::kernels::matmul_serial(A.data(), B.data(), C_s.data(), mat_n, mat_n, mat_n);
        });
        const double tp = time_best_of(reps, [&] {
            ival::kernels::matmul_parallel(A.data(), B.data(), C_p.data(), mat_n, mat_n, mat_n);
        });
        const bool eq = bitwise_equal(C_s, C_p);
        all_equal = all_equal && eq;
        report("matmul", ts, tp, eq);
    }

    {
        // partitioned natural-inclusion evaluation drives the same kernels
        // end to end through the expression engine
        const ival::ComposedFunction f = ival::fig1_decomposition_a();
        const ival::Box domain({-1.0, -1.0}, {1.0, 1.0});
        const std::vector<size_t> counts = {64, 64};
        ival::PartitionedResult r;
        const double tp = time_best_of(reps, [&] { r = ival::partitioned_evaluate(f, domain, counts); });
        std::printf("%-22s %zu cells in %9.4f ms (hull [%g, %g] x [%g, %g])\n", "partitioned eval",
                    r.cell_results.size(), tp * 1e3, r.hull.lo(0), r.hull.hi(0), r.hull.lo(1),
                    r.hull.hi(1));
    }

    return all_equal ? 0 : 1;
}
