#pragma once

#include "ferro/galerkin.hpp"

#include <array>
#include <string_view>
#include <vector>

namespace ferro {

/// Columns of one energy-ledger row. Rate columns (dissipation, source, Hilbert-Schmidt) are evaluated
/// at the left endpoint of the step; martingale columns, dE and the residual are increments over the step.
enum LedgerCol : int {
    kEtot,
    kDeltaE,
    kDissGradU,    ///< 2 nu |grad u|^2
    kDissGradW,    ///< 2 lambda1 |grad w|^2
    kDissM,        ///< 2 lambda (|curl M|^2 + |div M|^2)
    kDissDivM,     ///< 2 mu0 lambda |div M|^2
    kDissCurlH,    ///< (2/sigma) |curl H|^2
    kDissTauM,     ///< (2/tau) |M|^2
    kDissTauH,     ///< (2 mu0 chi0/tau) |H|^2
    kDissDivW,     ///< 2 (lambda1 + lambda2) |div w|^2
    kDissVortex,   ///< 2 alpha |curl u - 2 w|^2
    kSrcMH,        ///< 2 (chi0 + mu0)/tau (M, H)
    kSrcCurl,      ///< 2 mu0 lambda (curl M, curl H)
    kHsG,          ///< (mu0 + 1) |P G(M)|^2
    kHsF1,         ///< |P F1(u)|^2
    kHsF2,         ///< |P F2(w)|^2
    kHsF3,         ///< |P F3(H)|^2 / mu0
    kMartU,        ///< 2 (u, P F1 dbeta1)
    kMartW,        ///< 2 (w, P F2 dbeta2)
    kMartM,        ///< 2 (M, P G dbeta3) - 2 mu0 (H, P G dbeta3)
    kMartH,        ///< 2 (H_a, P F3 dbeta4)
    kResidual,     ///< dE - (-D + S + HS) dt - martingale
    kLedgerWidth
};

inline constexpr std::array<std::string_view, kLedgerWidth> kLedgerNames{
    "E_tot",        "dE",          "diss_grad_u", "diss_grad_w", "diss_M",  "diss_div_M",
    "diss_curl_H",  "diss_tau_M",  "diss_tau_H",  "diss_div_w",  "diss_vortex", "src_MH",
    "src_curl",     "hs_G",        "hs_F1",       "hs_F2",       "hs_F3",   "mart_u",
    "mart_w",       "mart_M",      "mart_H",      "residual"};

inline constexpr int kFirstDiss = kDissGradU, kLastDiss = kDissVortex;
inline constexpr int kFirstHs = kHsG, kLastHs = kHsF3;
inline constexpr int kFirstMart = kMartU, kLastMart = kMartH;

struct LedgerRow {
    std::size_t step = 0;
    double t = 0;
    std::array<double, kLedgerWidth> v{};

    double dissipation() const;
    double sources() const { return v[kSrcMH] + v[kSrcCurl]; }
    double hilbert_schmidt() const;
    double martingale() const;
};

using EnergyLedger = std::vector<LedgerRow>;

/// Unweighted squared norms entering the a priori estimates.
enum QuadNorm : int { kQGradU, kQGradW, kQCurlM, kQDivM, kQCurlH, kQM, kQH, kQDivW, kQVortex, kQuadCount };
using QuadNorms = std::array<double, kQuadCount>;

QuadNorms quadratic_norms(const Fields& f);

/// |u|^2 + |w|^2 + |M|^2 + mu0 |H|^2
double energy_total(const GalerkinState& s, double mu0);
double energy_total(const Fields& f, double mu0);

/// Dissipation and source rates at a state (the deterministic part of the ledger).
void energy_rates(const Fields& f, const PhysicalParams& p, LedgerRow& row, QuadNorms* norms = nullptr);

/// One full ledger row for an Euler step from `before` to `after`.
LedgerRow ito_ledger_step(const GalerkinState& before, const GalerkinState& after,
                          const std::vector<GalerkinState>& diffusion, std::span<const double> increments,
                          const PhysicalParams& p, const NoiseModel& noise, double dt, QuadNorms* norms = nullptr);

}  // namespace ferro
