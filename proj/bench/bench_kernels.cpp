// Drift evaluation: triad convolution vs pseudospectral, and threaded vs serial ensembles.
#include "ferro/diagnostics.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

using namespace ferro;

namespace {

template <class F>
double seconds_per_call(F&& f, double budget = 0.5)
{
    using clock = std::chrono::steady_clock;
    int n = 0;
    auto t0 = clock::now();
    double el = 0;
    do {
        f();
        ++n;
        el = std::chrono::duration<double>(clock::now() - t0).count();
    } while (el < budget);
    return el / n;
}

GalerkinState random_state(int kmax, std::uint64_t seed)
{
    GalerkinState s(kmax);
    RngStream rng(seed, 0);
    for (double& v : s.y) v = rng.normal() / std::sqrt(double(s.y.size()));
    return s;
}

NoiseModel bench_noise()
{
    std::array<std::vector<NoiseMember>, 4> m;
    for (auto& ch : m)
        ch = {{{1, 0, 0}, {0, 0.3, 0}, Wave::Cos}, {{0, 1, 0}, {0, 0, 0.3}, Wave::Sin},
              {{0, 0, 1}, {0.3, 0, 0}, Wave::Cos}};
    return NoiseModel(m);
}

}  // namespace

int main(int argc, char** argv)
{
    const int kmax_max = argc > 1 ? std::atoi(argv[1]) : 8;
    PhysicalParams p;
    std::printf("drift evaluation, seconds per call\n");
    std::printf("%4s %8s %14s %14s %9s\n", "K", "dim", "triad", "pseudospectral", "speedup");
    for (int K = 1; K <= kmax_max; ++K) {
        GalerkinState s = random_state(K, 1);
        double ps = seconds_per_call([&] { assemble_drift(s, p, Path::Pseudospectral); });
        double tr = seconds_per_call([&] { assemble_drift(s, p, Path::Triad); }, K >= 6 ? 0.0 : 0.5);
        std::printf("%4d %8zu %14.4e %14.4e %9.1f\n", K, s.y.size(), tr, ps, tr / ps);
    }

    const NoiseModel noise = bench_noise();
    RunConfig rc;
    rc.T = 0.1;
    rc.dt = 2e-3;
    rc.ensemble_size = 16;
    rc.seed = 5;
    rc.keep_snapshots = false;
    GalerkinState y0 = random_state(2, 2);
    const int threads = omp_get_max_threads();
    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();
    EnsembleResult serial = ensemble_run(y0, rc, p, noise, Execution::Serial);
    auto t1 = clock::now();
    EnsembleResult par = ensemble_run(y0, rc, p, noise, Execution::Parallel);
    auto t2 = clock::now();
    bool same = true;
    for (std::size_t m = 0; m < serial.members.size(); ++m)
        same = same && serial.members[m].final_state.y == par.members[m].final_state.y;
    double ts = std::chrono::duration<double>(t1 - t0).count();
    double tp = std::chrono::duration<double>(t2 - t1).count();
    std::printf("\nensemble K=2, %d members, %zu steps\n", rc.ensemble_size, rc.steps());
    std::printf("  serial   %8.3f s\n  openmp   %8.3f s  (%d threads, speedup %.2f)\n", ts, tp, threads, ts / tp);
    std::printf("  results %s\n", same ? "bit-identical" : "DIFFER");
    return same ? 0 : 1;
}
