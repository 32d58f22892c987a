#include "ferro/ledger.hpp"

#include <stdexcept>

namespace ferro {

double LedgerRow::dissipation() const
{
    double s = 0;
    for (int i = kFirstDiss; i <= kLastDiss; ++i) s += v[i];
    return s;
}

double LedgerRow::hilbert_schmidt() const
{
    double s = 0;
    for (int i = kFirstHs; i <= kLastHs; ++i) s += v[i];
    return s;
}

double LedgerRow::martingale() const
{
    double s = 0;
    for (int i = kFirstMart; i <= kLastMart; ++i) s += v[i];
    return s;
}

double energy_total(const GalerkinState& s, double mu0) { return q_inner(s, s, mu0); }

double energy_total(const Fields& f, double mu0)
{
    return l2_norm_sq(f.u) + l2_norm_sq(f.w) + l2_norm_sq(f.M) + mu0 * l2_norm_sq(f.H);
}

QuadNorms quadratic_norms(const Fields& f)
{
    DiffOps du = diff_ops(f.u), dw = diff_ops(f.w), dM = diff_ops(f.M), dH = diff_ops(f.H);
    QuadNorms q{};
    q[kQGradU] = du.grad_norm_sq;
    q[kQGradW] = dw.grad_norm_sq;
    q[kQCurlM] = dM.curl_norm_sq;
    q[kQDivM] = dM.div_norm_sq;
    q[kQCurlH] = dH.curl_norm_sq;
    q[kQM] = dM.l2_norm_sq;
    q[kQH] = dH.l2_norm_sq;
    q[kQDivW] = dw.div_norm_sq;
    q[kQVortex] = l2_norm_sq(curl(f.u) - 2.0 * f.w);
    return q;
}

void energy_rates(const Fields& f, const PhysicalParams& p, LedgerRow& row, QuadNorms* norms)
{
    QuadNorms q = quadratic_norms(f);
    auto& v = row.v;
    v[kDissGradU] = 2 * p.nu * q[kQGradU];
    v[kDissGradW] = 2 * p.lambda1 * q[kQGradW];
    v[kDissM] = 2 * p.lambda * (q[kQCurlM] + q[kQDivM]);
    v[kDissDivM] = 2 * p.mu0 * p.lambda * q[kQDivM];
    v[kDissCurlH] = 2 / p.sigma * q[kQCurlH];
    v[kDissTauM] = 2 / p.tau * q[kQM];
    v[kDissTauH] = 2 * p.mu0 * p.chi0 / p.tau * q[kQH];
    v[kDissDivW] = 2 * (p.lambda1 + p.lambda2) * q[kQDivW];
    v[kDissVortex] = 2 * p.alpha * q[kQVortex];
    v[kSrcMH] = 2 * (p.chi0 + p.mu0) / p.tau * inner(f.M, f.H);
    v[kSrcCurl] = 2 * p.mu0 * p.lambda * inner(curl(f.M), curl(f.H));
    if (norms) *norms = q;
}

LedgerRow ito_ledger_step(const GalerkinState& before, const GalerkinState& after,
                          const std::vector<GalerkinState>& diffusion, std::span<const double> increments,
                          const PhysicalParams& p, const NoiseModel& noise, double dt, QuadNorms* norms)
{
    if (diffusion.size() != noise.total() || increments.size() != noise.total())
        throw std::invalid_argument("diffusion columns do not match the noise model");
    LedgerRow row;
    auto& v = row.v;
    double e0 = energy_total(before, p.mu0);
    v[kEtot] = e0;
    v[kDeltaE] = energy_total(after, p.mu0) - e0;
    energy_rates(reconstruct_fields(before, p.mu0), p, row, norms);

    const int hs_col[4] = {kHsF1, kHsF2, kHsG, kHsF3};
    const int mart_col[4] = {kMartU, kMartW, kMartM, kMartH};
    for (std::size_t j = 0; j < diffusion.size(); ++j) {
        Channel c = column_channel(noise, j).first;
        v[hs_col[int(c)]] += q_inner(diffusion[j], diffusion[j], p.mu0);
        v[mart_col[int(c)]] += 2.0 * q_inner(before, diffusion[j], p.mu0) * increments[j];
    }
    v[kResidual] = v[kDeltaE] - (-row.dissipation() + row.sources() + row.hilbert_schmidt()) * dt - row.martingale();
    return row;
}

}  // namespace ferro
