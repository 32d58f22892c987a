#pragma once

#include "ferro/galerkin.hpp"
#include "ferro/ledger.hpp"
#include "ferro/rng.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace ferro {

enum class Scheme { EulerMaruyama, TamedEM };

std::string_view to_string(Scheme s);
Scheme scheme_from_string(std::string_view s);

struct RunConfig {
    double T = 1.0;
    double dt = 1e-3;
    /// Stop when E_tot^(1/2) >= R at a grid point. Unset means 1e3 * E_tot(0)^(1/2).
    std::optional<double> stopping_radius;
    Scheme scheme = Scheme::EulerMaruyama;
    int ensemble_size = 1;
    std::uint64_t seed = 0;
    int snapshot_stride = 10;
    /// Each increment is the sum of `substeps` draws on a grid of dt/substeps.
    int substeps = 1;
    Path path = Path::Pseudospectral;
    bool record_ledger = false;
    bool keep_snapshots = true;
    bool check_constraints = false;

    std::size_t steps() const;
    std::vector<std::string> violations() const;
    void validate() const;
};

/// Gaussian increments reproducible from (seed, channel, step) alone.
class BrownianPath {
public:
    BrownianPath(std::uint64_t seed, std::size_t channels, double dt, int substeps = 1);

    std::size_t channels() const { return channels_; }
    double dt() const { return dt_; }
    double increment(std::size_t step, std::size_t channel) const;
    void increments(std::size_t step, std::span<double> out) const;

private:
    CounterRng rng_;
    std::size_t channels_;
    double dt_;
    int substeps_;
};

/// One explicit step: y + Y(y) dt [/(1 + dt |Y|) when tamed] + sum_k Z_k dbeta_k.
GalerkinState step(const GalerkinState& y, const DriftVector& drift, const std::vector<GalerkinState>& diffusion,
                   std::span<const double> increments, double dt, Scheme scheme);

/// Running integrals of a trajectory's ledger (rate columns times dt, increment columns summed).
struct LedgerTotals {
    std::array<double, kLedgerWidth> sum{};
    double energy0 = 0;
    double energy_final = 0;
    double energy_sup = 0;
    double dissipation_integral = 0;
    QuadNorms quad{};  ///< time integrals of the unweighted norms
};

struct TrajectoryRecord {
    std::uint64_t seed = 0;  ///< Brownian seed actually used
    double radius = 0;
    std::vector<double> times;
    std::vector<GalerkinState> states;
    /// Brownian increments accumulated between consecutive snapshots, per channel.
    std::vector<std::vector<double>> snapshot_increments;
    std::optional<double> stopped_at;
    std::string failure;
    std::size_t steps_taken = 0;
    EnergyLedger ledger;
    LedgerTotals totals;
    double max_divergence_ratio = 0;  ///< max over steps of |div u|/|grad u| and |div B|/|grad B|
    GalerkinState final_state;
};

TrajectoryRecord integrate(const GalerkinState& initial, const RunConfig& config, const PhysicalParams& params,
                           const NoiseModel& noise, std::size_t member = 0);

struct Stats {
    std::size_t n = 0;
    double mean = 0;
    double variance = 0;
    double se = 0;
    double ci_lo = 0, ci_hi = 0;  ///< 95% normal interval
};
Stats summarize(std::span<const double> x);

struct EnsembleResult {
    std::vector<TrajectoryRecord> members;
    std::size_t survivors = 0;
    std::vector<std::size_t> failed;
    Stats energy_final, energy_sup, residual, martingale;
};

/// Serial is the reference the threaded run must reproduce bit for bit.
enum class Execution { Parallel, Serial };

/// Members run concurrently; member m uses seed mix_seed(config.seed, m). Aggregation is in member order.
EnsembleResult ensemble_run(const GalerkinState& initial, const RunConfig& config, const PhysicalParams& params,
                            const NoiseModel& noise, Execution exec = Execution::Parallel);

/// ||div f|| / ||grad f||, 0 for constant fields.
double divergence_norm_ratio(const SpectralField& f);

}  // namespace ferro
