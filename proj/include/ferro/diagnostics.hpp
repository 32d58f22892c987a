#pragma once

#include "ferro/integrator.hpp"

#include <array>
#include <string>
#include <vector>

namespace ferro {

struct EstimateRow {
    std::string name;
    double lhs = 0;
    double rhs = 0;
    double se = 0;
    bool pass = false;
    double margin() const { return rhs - lhs; }
};

/// One audit; a row passes when lhs <= rhs + 3 se.
struct EstimateReport {
    std::string audit;
    std::vector<EstimateRow> rows;
    std::vector<std::string> notes;

    void add(std::string name, double lhs, double rhs, double se = 0);
    /// A yes/no check; `value` is reported in both columns.
    void add_check(std::string name, bool ok, double value = 0);
    bool pass() const;
};

// ---- admissibility ----

enum class AdmissibilityMode { Strict, Relaxed };
std::string_view to_string(AdmissibilityMode m);
AdmissibilityMode admissibility_mode_from_string(std::string_view s);

struct AdmissibilityParams {
    double C0 = 1.0;
    double ell_star = 0.5;
    double C4_bdg = 2.0;
    std::array<double, 4> c{2, 2, 2, 2};  ///< velocity, rotation, magnetization, field
};

struct AdmissibilityReport {
    AdmissibilityMode mode = AdmissibilityMode::Relaxed;
    std::array<double, 4> ell_bounds{};  ///< the four lower bounds on ell*
    bool ell_ok = true;
    std::array<double, 4> c_threshold{};  ///< c_i must exceed these
    std::array<bool, 4> c_ok{};
    double lambda_lo = 0, lambda_hi = 0;
    double remark_hi = 0;  ///< relaxed mode: upper end capped at 1
    bool window_nonempty = false;
    std::vector<std::string> failures;
    bool pass() const { return failures.empty(); }
    bool contains(double lambda) const { return window_nonempty && lambda > lambda_lo && lambda < lambda_hi; }
};

AdmissibilityReport admissibility_check(const PhysicalParams& p, const AdmissibilityParams& a,
                                        AdmissibilityMode mode);

// ---- a priori estimates ----

/// Coefficients of |grad u|^2, |grad w|^2, |curl M|^2, |curl H|^2, |div M|^2 in the energy estimate.
struct Brackets {
    std::array<double, 5> value{};
    static constexpr std::array<const char*, 5> names{"grad_u", "grad_w", "curl_M", "curl_H", "div_M"};
    bool positive() const;
    std::vector<std::string> violations() const;
};
Brackets energy_brackets(const PhysicalParams& p, const std::array<double, 4>& c, double C0);

/// Values of lambda where the curl_M and div_M brackets vanish (NaN when there is no real root).
struct BracketRoots {
    double curl_lo = 0, curl_hi = 0;
    double div = 0;
};
BracketRoots bracket_roots(const PhysicalParams& p, const std::array<double, 4>& c, double C0);

/// Pre-Gronwall energy inequality averaged over the surviving members (ledgers required).
EstimateReport apriori_check(const EnsembleResult& ens, const PhysicalParams& p, const std::array<double, 4>& c,
                             double C0);

/// E[sup E_tot^p] and E[(int D)^p] against fitted constants times (1 + E_tot(0))^p, checked for stability
/// between the first half and the whole ensemble.
struct MomentReport {
    double p = 2;
    double sup_moment = 0, sup_moment_half = 0;
    double diss_moment = 0, diss_moment_half = 0;
    double C_sup = 0, C_sup_half = 0;
    double C_diss = 0, C_diss_half = 0;
    EstimateReport report;
};
MomentReport pmoment_check(const EnsembleResult& ens, double p, double stability = 0.2);

// ---- dual norms of the drift ----

/// |f|_{X'} for f in a Galerkin space X, via spectral dual weights (|k|^2 on V, 1 + |k|^2 otherwise).
double dual_norm_field(const SpectralField& f, Space space);

struct DualNormTerm {
    std::string name;
    double exponent = 2;
    double integral = 0;
};

/// Time integrals of the dual norms of every drift operator, left-endpoint on the snapshot grid.
std::vector<DualNormTerm> drift_dual_norm_audit(const TrajectoryRecord& traj, const PhysicalParams& p,
                                                Path path = Path::Pseudospectral);

// ---- translation estimates ----

enum class Component { U, W, M, H, B };
inline constexpr std::array<Component, 5> kComponents{Component::U, Component::W, Component::M, Component::H,
                                                      Component::B};
std::string_view to_string(Component c);
/// Norm exponent and the smallest power of theta in the translation bound.
double translation_exponent(Component c);
double translation_leading_rate(Component c);

struct TranslationFit {
    Component component = Component::U;
    std::vector<double> theta;
    std::vector<double> moment;  ///< E |X(t + theta) - X(t)|^q in the dual norm
    double slope = 0;
    double required = 0;
    bool pass = false;
};

/// `lags` are in snapshot intervals; each path contributes `samples` random start times.
std::vector<TranslationFit> translation_diagnostic(const EnsembleResult& ens, double mu0,
                                                   const std::vector<int>& lags, int samples, std::uint64_t seed,
                                                   double tolerance = 0.05);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// ---- weak form ----

enum class Equation { U, W, M, B };
std::string_view to_string(Equation e);
Space test_space(Equation e);

/// Weak-form defect at the final snapshot for a test function in the equation's Galerkin span:
/// <X(T) - X(0), phi> - sum_j [<drift(t_j), phi> dt_j + sum_k <noise_k(t_j), phi> dbeta_k,j].
double weak_residual(const TrajectoryRecord& traj, const SpectralField& phi, Equation eq, const PhysicalParams& p,
                     const NoiseModel& noise, Path path = Path::Pseudospectral);

/// Single basis functions cycling through the four equations.
std::vector<std::pair<Equation, SpectralField>> weak_test_functions(int kmax, int count, std::uint64_t seed);

// ---- step-size studies ----

/// One value per step size; the Brownian paths are shared across step sizes through substeps.
struct ConvergenceStudy {
    std::vector<double> dt, value, se;
    double slope = 0;  ///< log-log slope of |value| against dt
};

/// Ensemble mean of the summed ledger residual over [0, T].
ConvergenceStudy ito_residual_study(const GalerkinState& initial, RunConfig base, const PhysicalParams& p,
                                    const NoiseModel& noise, const std::vector<double>& dts);

/// RMS over members and test functions of the weak-form defect. The snapshot stride is held fixed in
/// steps, so the quadrature interval shrinks with dt.
ConvergenceStudy weak_residual_study(const GalerkinState& initial, RunConfig base, const PhysicalParams& p,
                                     const NoiseModel& noise, const std::vector<double>& dts,
                                     const std::vector<std::pair<Equation, SpectralField>>& tests);

// ---- operator suites ----

/// Field with standard normal coefficients in the orthonormal basis of `space`.
SpectralField random_field(int kmax, Space space, RngStream& rng);

/// Cancellation identities on random operands; each row's lhs is the largest |value| divided by the
/// product of operand L2 norms.
EstimateReport operator_identity_suite(int kmax, int samples, std::uint64_t seed, const NoiseModel& noise,
                                       Path path = Path::Pseudospectral, double tolerance = 1e-10);

/// Largest relative difference between the triad and pseudospectral evaluations of every nonlinear
/// operator and of the drift, over random states.
EstimateReport path_equivalence_suite(int kmax, int samples, std::uint64_t seed, const PhysicalParams& p,
                                      double tolerance = 1e-9);

/// Per-member lhs - rhs of the pre-Gronwall inequality (negative means it holds pathwise up to the martingale).
std::vector<double> apriori_margins(const EnsembleResult& ens, const PhysicalParams& p,
                                    const std::array<double, 4>& c, double C0);

/// Constant M = chi0 H with everything else zero: a noise-free equilibrium.
GalerkinState stationary_state(int kmax, const Vec3& h, const PhysicalParams& p);

}  // namespace ferro
