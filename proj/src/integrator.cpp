#include "ferro/integrator.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ferro {

std::string_view to_string(Scheme s) { return s == Scheme::TamedEM ? "tamed_em" : "euler_maruyama"; }

Scheme scheme_from_string(std::string_view s)
{
    if (s == "euler_maruyama") return Scheme::EulerMaruyama;
    if (s == "tamed_em") return Scheme::TamedEM;
    throw std::invalid_argument("unknown scheme '" + std::string(s) + "'");
}

std::size_t RunConfig::steps() const { return static_cast<std::size_t>(std::llround(T / dt)); }

std::vector<std::string> RunConfig::violations() const
{
    std::vector<std::string> v;
    if (!(T > 0)) v.push_back("run.T must be positive");
    if (!(dt > 0) || !(dt <= T)) v.push_back("run.dt must satisfy 0 < dt <= T");
    if (T > 0 && dt > 0 && std::abs(steps() * dt - T) > 1e-9 * T) v.push_back("run.T must be a multiple of run.dt");
    if (stopping_radius && !(*stopping_radius > 0)) v.push_back("run.stopping_radius must be positive");
    if (ensemble_size < 1) v.push_back("run.ensemble_size must be at least 1");
    if (snapshot_stride < 1) v.push_back("run.snapshot_stride must be at least 1");
    if (substeps < 1) v.push_back("run.substeps must be at least 1");
    return v;
}

void RunConfig::validate() const
{
    auto v = violations();
    if (v.empty()) return;
    std::string msg;
    for (auto& s : v) msg += s + "; ";
    throw std::invalid_argument(msg);
}

BrownianPath::BrownianPath(std::uint64_t seed, std::size_t channels, double dt, int substeps)
    : rng_(seed), channels_(channels), dt_(dt), substeps_(substeps)
{
    if (substeps < 1) throw std::invalid_argument("substeps must be at least 1");
}

double BrownianPath::increment(std::size_t step, std::size_t channel) const
{
    double s = 0;
    std::size_t base = step * static_cast<std::size_t>(substeps_);
    for (int i = 0; i < substeps_; ++i) s += rng_.normal(channel, base + i);
    return s * std::sqrt(dt_ / substeps_);
}

void BrownianPath::increments(std::size_t step, std::span<double> out) const
{
    for (std::size_t c = 0; c < out.size(); ++c) out[c] = increment(step, c);
}

GalerkinState step(const GalerkinState& y, const DriftVector& drift, const std::vector<GalerkinState>& diffusion,
                   std::span<const double> increments, double dt, Scheme scheme)
{
    GalerkinState out = y;
    double factor = dt;
    if (scheme == Scheme::TamedEM) factor = dt / (1.0 + dt * coeff_norm(drift));
    for (std::size_t i = 0; i < out.y.size(); ++i) out.y[i] += factor * drift.y[i];
    for (std::size_t j = 0; j < diffusion.size(); ++j) {
        double db = increments[j];
        if (db == 0.0) continue;
        const auto& col = diffusion[j].y;
        for (std::size_t i = 0; i < out.y.size(); ++i) out.y[i] += col[i] * db;
    }
    for (double v : out.y)
        if (!std::isfinite(v)) throw std::runtime_error("non-finite state after step");
    return out;
}

double divergence_norm_ratio(const SpectralField& f)
{
    double num = 0, den = 0;
    for (std::size_t i = 0; i < f.modes(); ++i) {
        IVec3 k = f.wavevector(i);
        const CVec3& v = f.data()[i];
        cplx d = double(k[0]) * v[0] + double(k[1]) * v[1] + double(k[2]) * v[2];
        num += std::norm(d);
        den += norm_sq(k) * (std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]));
    }
    return den > 0 ? std::sqrt(num / den) : 0.0;
}

TrajectoryRecord integrate(const GalerkinState& initial, const RunConfig& config, const PhysicalParams& params,
                           const NoiseModel& noise, std::size_t member)
{
    config.validate();
    TrajectoryRecord rec;
    rec.seed = mix_seed(config.seed, member);
    const std::size_t nsteps = config.steps();
    const std::size_t nch = noise.total();
    BrownianPath bm(rec.seed, nch, config.dt, config.substeps);

    GalerkinState y = initial;
    const double e0 = energy_total(y, params.mu0);
    if (config.stopping_radius)
        rec.radius = *config.stopping_radius;
    else
        rec.radius = e0 > 0 ? 1e3 * std::sqrt(e0) : std::numeric_limits<double>::infinity();
    rec.totals.energy0 = e0;
    rec.totals.energy_sup = e0;

    std::vector<GalerkinState> cols;
    std::vector<double> db(nch, 0.0), acc(nch, 0.0);

    auto snapshot = [&](std::size_t n) {
        if (!config.keep_snapshots) return;
        rec.times.push_back(n * config.dt);
        rec.states.push_back(y);
        if (rec.times.size() > 1) rec.snapshot_increments.push_back(acc);
        std::fill(acc.begin(), acc.end(), 0.0);
    };
    auto check = [&]() {
        if (!config.check_constraints) return;
        Fields f = reconstruct_fields(y, params.mu0);
        rec.max_divergence_ratio =
            std::max({rec.max_divergence_ratio, divergence_norm_ratio(f.u), divergence_norm_ratio(f.B)});
    };

    snapshot(0);
    check();
    std::size_t n = 0;
    try {
        for (; n < nsteps; ++n) {
            double e = energy_total(y, params.mu0);
            if (std::sqrt(e) >= rec.radius) {
                rec.stopped_at = n * config.dt;
                break;
            }
            DriftVector drift = assemble_drift(y, params, config.path);
            assemble_diffusion_into(y, noise, params.mu0, cols);
            bm.increments(n, db);
            GalerkinState next = step(y, drift, cols, db, config.dt, config.scheme);
            if (config.record_ledger) {
                QuadNorms q{};
                LedgerRow row = ito_ledger_step(y, next, cols, db, params, noise, config.dt, &q);
                for (int c = 0; c < kQuadCount; ++c) rec.totals.quad[c] += q[c] * config.dt;
                row.step = n;
                row.t = n * config.dt;
                for (int c = 0; c < kLedgerWidth; ++c) {
                    bool rate = (c >= kFirstDiss && c <= kSrcCurl) || (c >= kFirstHs && c <= kLastHs);
                    rec.totals.sum[c] += rate ? row.v[c] * config.dt : row.v[c];
                }
                rec.totals.dissipation_integral += row.dissipation() * config.dt;
                rec.ledger.push_back(row);
            }
            for (std::size_t c = 0; c < nch; ++c) acc[c] += db[c];
            y = std::move(next);
            rec.totals.energy_sup = std::max(rec.totals.energy_sup, energy_total(y, params.mu0));
            check();
            if ((n + 1) % config.snapshot_stride == 0 || n + 1 == nsteps) snapshot(n + 1);
        }
        if (!rec.stopped_at && n == nsteps && std::sqrt(energy_total(y, params.mu0)) >= rec.radius)
            rec.stopped_at = nsteps * config.dt;
    } catch (const std::exception& ex) {
        std::ostringstream os;
        os << "step " << n << ": " << ex.what();
        rec.failure = os.str();
    }
    if (rec.stopped_at && config.keep_snapshots && (rec.times.empty() || rec.times.back() != *rec.stopped_at))
        snapshot(n);
    rec.steps_taken = n;
    rec.totals.energy_final = energy_total(y, params.mu0);
    rec.final_state = std::move(y);
    if (config.record_ledger) rec.totals.sum[kEtot] = rec.totals.energy_final;
    return rec;
}

Stats summarize(std::span<const double> x)
{
    Stats s;
    s.n = x.size();
    if (s.n == 0) return s;
    double m = 0;
    for (double v : x) m += v;
    m /= double(s.n);
    double q = 0;
    for (double v : x) q += (v - m) * (v - m);
    s.mean = m;
    s.variance = s.n > 1 ? q / double(s.n - 1) : 0.0;
    s.se = std::sqrt(s.variance / double(s.n));
    s.ci_lo = m - 1.959963984540054 * s.se;
    s.ci_hi = m + 1.959963984540054 * s.se;
    return s;
}

EnsembleResult ensemble_run(const GalerkinState& initial, const RunConfig& config, const PhysicalParams& params,
                            const NoiseModel& noise, Execution exec)
{
    config.validate();
    EnsembleResult out;
    const long m = config.ensemble_size;
    out.members.resize(m);
    // Warm shared caches before the parallel region.
    Layout::get(initial.kmax);
#pragma omp parallel for schedule(dynamic) if (exec == Execution::Parallel)
    for (long i = 0; i < m; ++i) out.members[i] = integrate(initial, config, params, noise, std::size_t(i));

    std::vector<double> ef, es, res, mart;
    for (long i = 0; i < m; ++i) {
        const auto& r = out.members[i];
        if (!r.failure.empty()) {
            out.failed.push_back(std::size_t(i));
            continue;
        }
        ef.push_back(r.totals.energy_final);
        es.push_back(r.totals.energy_sup);
        res.push_back(r.totals.sum[kResidual]);
        double mg = 0;
        for (int c = kFirstMart; c <= kLastMart; ++c) mg += r.totals.sum[c];
        mart.push_back(mg);
    }
    out.survivors = ef.size();
    out.energy_final = summarize(ef);
    out.energy_sup = summarize(es);
    out.residual = summarize(res);
    out.martingale = summarize(mart);
    return out;
}

}  // namespace ferro
