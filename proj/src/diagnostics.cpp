#include "ferro/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ferro {

namespace {

std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

double mean_of(const std::vector<double>& x)
{
    double s = 0;
    for (double v : x) s += v;
    return x.empty() ? 0.0 : s / double(x.size());
}

std::vector<const TrajectoryRecord*> survivors(const EnsembleResult& ens)
{
    std::vector<const TrajectoryRecord*> out;
    for (const auto& m : ens.members)
        if (m.failure.empty()) out.push_back(&m);
    return out;
}

}  // namespace

void EstimateReport::add(std::string name, double lhs, double rhs, double se)
{
    bool ok = std::isfinite(lhs) && std::isfinite(rhs) && lhs <= rhs + 3.0 * se;
    rows.push_back({std::move(name), lhs, rhs, se, ok});
}

void EstimateReport::add_check(std::string name, bool ok, double value)
{
    rows.push_back({std::move(name), value, value, 0.0, ok});
}

bool EstimateReport::pass() const
{
    for (const auto& r : rows)
        if (!r.pass) return false;
    return true;
}

// ---- admissibility ----

std::string_view to_string(AdmissibilityMode m) { return m == AdmissibilityMode::Strict ? "strict" : "relaxed"; }

AdmissibilityMode admissibility_mode_from_string(std::string_view s)
{
    if (s == "strict") return AdmissibilityMode::Strict;
    if (s == "relaxed") return AdmissibilityMode::Relaxed;
    throw std::invalid_argument("unknown admissibility mode '" + std::string(s) + "'");
}

AdmissibilityReport admissibility_check(const PhysicalParams& p, const AdmissibilityParams& a,
                                        AdmissibilityMode mode)
{
    p.validate();
    if (!(a.C0 > 0) || !(a.ell_star > 0) || !(a.C4_bdg > 0))
        throw std::invalid_argument("admissibility constants C0, ell_star and C4_bdg must be positive");
    AdmissibilityReport r;
    r.mode = mode;
    const double mu = p.mu0, sg = p.sigma, C0 = a.C0, l = a.ell_star;

    r.ell_bounds = {1.0 / (mu * std::sqrt(sg * C0)), std::sqrt((mu + 1) / (mu * sg * C0)), (mu + 1) / mu,
                    2.0 * std::pow(3.0, 16) * a.C4_bdg * a.C4_bdg};
    if (mode == AdmissibilityMode::Strict) {
        static const char* what[4] = {"1/(mu0 sqrt(sigma C0))", "sqrt((mu0+1)/(mu0 sigma C0))", "(mu0+1)/mu0",
                                      "2 3^16 C(4)^2"};
        for (int i = 0; i < 4; ++i)
            if (!(l > r.ell_bounds[i])) {
                r.ell_ok = false;
                r.failures.push_back("ell_star = " + fmt(l) + " does not exceed " + what[i] + " = " +
                                     fmt(r.ell_bounds[i]));
            }
    }

    r.c_threshold = {(2 * l + 2 - 2 * p.nu) / (l + 1), (2 * l + 2 - 2 * p.lambda1) / (l + 1),
                     2 - 1 / (sg * mu * mu * (mu + 1) * l * l * C0), 2 - (mu + 1) / (sg * mu * C0 * l * l)};
    static const char* cname[4] = {"c_velocity", "c_rotation", "c_magnetization", "c_field"};
    for (int i = 0; i < 4; ++i) {
        r.c_ok[i] = a.c[i] > r.c_threshold[i] && a.c[i] > 0 && a.c[i] <= 2;
        if (!r.c_ok[i])
            r.failures.push_back(std::string(cname[i]) + " = " + fmt(a.c[i]) + " outside (" +
                                 fmt(std::max(r.c_threshold[i], 0.0)) + ", 2]");
    }

    const double top = 1 / (sg * mu * mu * l);
    const double rad = top * top - (mu + 1) * (2 - a.c[2]) * C0 / (sg * mu * mu);
    r.lambda_hi = top;
    if (rad < 0) {
        r.lambda_lo = std::numeric_limits<double>::quiet_NaN();
        r.failures.push_back("negative radicand in the lambda window: c_magnetization = " + fmt(a.c[2]) +
                             " is below its window");
        return r;
    }
    double lo1 = top - std::sqrt(rad);
    double lo2 = l * (2 - a.c[2]) * C0 / 2 + (2 - a.c[3]) * C0 * l / (2 * mu * (mu + 1));
    r.lambda_lo = std::max(lo1, lo2);
    r.remark_hi = mode == AdmissibilityMode::Relaxed ? std::min(r.lambda_hi, 1.0) : r.lambda_hi;
    r.window_nonempty = r.lambda_lo < r.lambda_hi;
    if (!r.window_nonempty) {
        r.failures.push_back(std::string("empty lambda window: lower bound ") + fmt(r.lambda_lo) + " from " +
                             (lo2 >= lo1 ? "the c_magnetization/c_field term" : "the radicand term") +
                             " is not below 1/(sigma mu0^2 ell_star) = " + fmt(r.lambda_hi));
    } else if (!r.contains(p.lambda)) {
        r.failures.push_back("lambda = " + fmt(p.lambda) + " outside the admissible window (" + fmt(r.lambda_lo) +
                             ", " + fmt(r.lambda_hi) + ")");
    }
    return r;
}

// ---- a priori estimates ----

bool Brackets::positive() const
{
    for (double v : value)
        if (!(v > 0)) return false;
    return true;
}

std::vector<std::string> Brackets::violations() const
{
    std::vector<std::string> out;
    for (std::size_t i = 0; i < value.size(); ++i)
        if (!(value[i] > 0)) out.push_back(std::string("bracket ") + names[i] + " = " + fmt(value[i]) + " <= 0");
    return out;
}

Brackets energy_brackets(const PhysicalParams& p, const std::array<double, 4>& c, double C0)
{
    const double mu = p.mu0;
    Brackets b;
    b.value[0] = 2 * p.nu - (2 - c[0]);
    b.value[1] = 2 * p.lambda1 - (2 - c[1]);
    b.value[2] = p.lambda * (2 - p.sigma * mu * mu * p.lambda) - (mu + 1) * (2 - c[2]) * C0;
    b.value[3] = 1 / p.sigma - (2 - c[3]) * C0 / mu;
    b.value[4] = 2 * (mu + 1) * p.lambda - (mu + 1) * (2 - c[2]) * C0 - (2 - c[3]) * C0 / mu;
    return b;
}

BracketRoots bracket_roots(const PhysicalParams& p, const std::array<double, 4>& c, double C0)
{
    const double mu = p.mu0, s = p.sigma * mu * mu;
    const double q = (mu + 1) * (2 - c[2]) * C0;
    BracketRoots r;
    double disc = 1 - s * q;
    if (disc < 0) {
        r.curl_lo = r.curl_hi = std::numeric_limits<double>::quiet_NaN();
    } else {
        r.curl_lo = (1 - std::sqrt(disc)) / s;
        r.curl_hi = (1 + std::sqrt(disc)) / s;
    }
    r.div = (q + (2 - c[3]) * C0 / mu) / (2 * (mu + 1));
    return r;
}

namespace {

struct PreGronwall {
    std::vector<double> lhs, rhs;
};

PreGronwall pre_gronwall(const EnsembleResult& ens, const PhysicalParams& p, const Brackets& br,
                         const std::array<double, 4>& c, double C0)
{
    const double mu = p.mu0;
    const double coefM = 1 + (mu + 1) * (2 - c[2]) * C0;
    const double coefH = (2 - c[3]) * C0 / mu + std::pow((p.chi0 + mu) / p.tau, 2);
    PreGronwall out;
    for (const auto* m : survivors(ens)) {
        if (m->ledger.empty() && m->steps_taken > 0)
            throw std::invalid_argument("the energy audit needs trajectories recorded with a ledger");
        const auto& q = m->totals.quad;
        out.lhs.push_back(m->totals.energy_final + br.value[0] * q[kQGradU] + br.value[1] * q[kQGradW] +
                          br.value[2] * q[kQCurlM] + br.value[3] * q[kQCurlH] + br.value[4] * q[kQDivM] +
                          2 / p.tau * q[kQM] + 2 * mu * p.chi0 / p.tau * q[kQH] +
                          2 * (p.lambda1 + p.lambda2) * q[kQDivW] + 2 * p.alpha * q[kQVortex]);
        out.rhs.push_back(m->totals.energy0 + coefM * q[kQM] + coefH * q[kQH]);
    }
    return out;
}

Brackets checked_brackets(const PhysicalParams& p, const std::array<double, 4>& c, double C0)
{
    Brackets br = energy_brackets(p, c, C0);
    if (!br.positive()) {
        std::string msg = "energy estimate rejected:";
        for (auto& v : br.violations()) msg += " " + v + ";";
        throw std::invalid_argument(msg);
    }
    return br;
}

}  // namespace

std::vector<double> apriori_margins(const EnsembleResult& ens, const PhysicalParams& p,
                                    const std::array<double, 4>& c, double C0)
{
    PreGronwall g = pre_gronwall(ens, p, checked_brackets(p, c, C0), c, C0);
    std::vector<double> d(g.lhs.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = g.lhs[i] - g.rhs[i];
    return d;
}

EstimateReport apriori_check(const EnsembleResult& ens, const PhysicalParams& p, const std::array<double, 4>& c,
                             double C0)
{
    Brackets br = checked_brackets(p, c, C0);
    PreGronwall g = pre_gronwall(ens, p, br, c, C0);
    std::vector<double> d(g.lhs.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = g.lhs[i] - g.rhs[i];
    EstimateReport rep;
    rep.audit = "apriori";
    rep.add("pre_gronwall", mean_of(g.lhs), mean_of(g.rhs), summarize(d).se);
    for (std::size_t i = 0; i < br.value.size(); ++i)
        rep.notes.push_back(std::string("bracket ") + Brackets::names[i] + " = " + fmt(br.value[i]));
    rep.notes.push_back("survivors " + std::to_string(g.lhs.size()) + " of " + std::to_string(ens.members.size()));
    return rep;
}

MomentReport pmoment_check(const EnsembleResult& ens, double p, double stability)
{
    if (!(p >= 1 && p <= 4)) throw std::invalid_argument("moment order must lie in [1, 4]");
    auto mem = survivors(ens);
    if (mem.size() < 100) throw std::invalid_argument("pmoment_check needs at least 100 surviving members");
    MomentReport r;
    r.p = p;
    const std::size_t half = mem.size() / 2;
    double e0 = 0;
    for (const auto* m : mem) e0 += m->totals.energy0;
    e0 /= double(mem.size());
    const double scale = std::pow(1 + e0, p);

    std::vector<double> sup, diss;
    for (const auto* m : mem) {
        sup.push_back(std::pow(m->totals.energy_sup, p));
        diss.push_back(std::pow(m->totals.dissipation_integral, p));
    }
    std::vector<double> sup_h(sup.begin(), sup.begin() + half), diss_h(diss.begin(), diss.begin() + half);
    r.sup_moment = mean_of(sup);
    r.sup_moment_half = mean_of(sup_h);
    r.diss_moment = mean_of(diss);
    r.diss_moment_half = mean_of(diss_h);
    r.C_sup = r.sup_moment / scale;
    r.C_sup_half = r.sup_moment_half / scale;
    r.C_diss = r.diss_moment / scale;
    r.C_diss_half = r.diss_moment_half / scale;

    r.report.audit = "pmoment_p" + fmt(p);
    auto rel = [](double a, double b) { return b > 0 ? std::abs(a - b) / b : (a == b ? 0.0 : INFINITY); };
    r.report.add("sup_E_fitted_C_stability", rel(r.C_sup_half, r.C_sup), stability);
    r.report.add("dissipation_fitted_C_stability", rel(r.C_diss_half, r.C_diss), stability);
    r.report.add("sup_E_finite", std::isfinite(r.sup_moment) ? 0.0 : INFINITY, 0.0);
    r.report.add("dissipation_finite", std::isfinite(r.diss_moment) ? 0.0 : INFINITY, 0.0);
    r.report.notes.push_back("fitted C_sup = " + fmt(r.C_sup) + " (half ensemble " + fmt(r.C_sup_half) + ")");
    r.report.notes.push_back("fitted C_diss = " + fmt(r.C_diss) + " (half ensemble " + fmt(r.C_diss_half) + ")");
    return r;
}

// ---- dual norms ----

double dual_norm_field(const SpectralField& f, Space space)
{
    double s = 0;
    for (std::size_t i = 0; i < f.modes(); ++i) {
        IVec3 k = f.wavevector(i);
        int k2 = norm_sq(k);
        const CVec3& v = f.data()[i];
        double a = std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]);
        if (a == 0) continue;
        if (space == Space::V && k2 == 0) throw std::invalid_argument("V dual norm of a field with a mean");
        s += a / (space == Space::V ? double(k2) : 1.0 + k2);
    }
    return std::sqrt(kVolume * s);
}

std::vector<DualNormTerm> drift_dual_norm_audit(const TrajectoryRecord& traj, const PhysicalParams& p, Path path)
{
    static const char* names[] = {"A u",     "B0(u,u)", "M0(M,H)", "R1(H,H)", "R0(u,w)", "A1 w",   "B1(u,w)",
                                  "R5(w)",   "R2(u,w)", "R3(M,H)", "B2(u,M)", "R3(w,M)", "R6(H)", "M2(u,B)"};
    static const double expo[] = {2, 4. / 3, 8. / 7, 8. / 7, 2, 2, 4. / 3, 2, 2, 4. / 3, 4. / 3, 2, 2, 4. / 3};
    constexpr int n = 14;
    std::vector<DualNormTerm> out(n);
    for (int i = 0; i < n; ++i) out[i] = {names[i], expo[i], 0.0};

    for (std::size_t j = 0; j + 1 < traj.states.size(); ++j) {
        const double h = traj.times[j + 1] - traj.times[j];
        Fields f = reconstruct_fields(traj.states[j], p.mu0);
        const double v[n] = {
            dual_norm(apply_stokes(StokesFamily::A, f.u)),
            dual_norm(apply_B(BFamily::B0, f.u, f.u, path)),
            dual_norm(apply_M0(f.M, f.H, path)),
            dual_norm(apply_R1(f.H, f.H, path)),
            dual_norm(apply_R0(f.u, f.w)),
            dual_norm(apply_stokes(StokesFamily::A1, f.w)),
            dual_norm(apply_B(BFamily::B1, f.u, f.w, path)),
            dual_norm(apply_R5(f.w, Space::W)),
            dual_norm(pair(apply_R2(f.u, f.w), Space::W)),
            dual_norm(pair(apply_R3(f.M, f.H, path), Space::W)),
            dual_norm(apply_B(BFamily::B2, f.u, f.M, path)),
            dual_norm(pair(apply_R3(f.w, f.M, path), Space::V1)),
            dual_norm(apply_R6(f.H, Space::V2)),
            dual_norm(apply_M2(f.u, f.B, M2Form::Direct, path)),
        };
        for (int i = 0; i < n; ++i) out[i].integral += std::pow(v[i], expo[i]) * h;
    }
    return out;
}

// ---- translation estimates ----

std::string_view to_string(Component c)
{
    switch (c) {
    case Component::U: return "u";
    case Component::W: return "w";
    case Component::M: return "M";
    case Component::H: return "H";
    case Component::B: return "B";
    }
    return "?";
}

double translation_exponent(Component c) { return c == Component::U ? 8.0 / 7.0 : 4.0 / 3.0; }
double translation_leading_rate(Component c) { return c == Component::U ? 1.0 / 7.0 : 1.0 / 3.0; }

namespace {

Space translation_space(Component c)
{
    switch (c) {
    case Component::U: return Space::V;
    case Component::W: return Space::W;
    case Component::M: return Space::V2;
    default: return Space::V1;
    }
}

const SpectralField& component_of(const Fields& f, Component c)
{
    switch (c) {
    case Component::U: return f.u;
    case Component::W: return f.w;
    case Component::M: return f.M;
    case Component::H: return f.H;
    default: return f.B;
    }
}

}  // namespace

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope needs two or more points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= double(x.size());
    my /= double(x.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

std::vector<TranslationFit> translation_diagnostic(const EnsembleResult& ens, double mu0,
                                                   const std::vector<int>& lags, int samples, std::uint64_t seed,
                                                   double tolerance)
{
    auto mem = survivors(ens);
    if (mem.empty()) throw std::invalid_argument("translation_diagnostic needs surviving trajectories");
    if (samples < 1) throw std::invalid_argument("samples must be at least 1");
    std::size_t nsnap = mem.front()->states.size();
    for (const auto* m : mem) nsnap = std::min(nsnap, m->states.size());
    for (int l : lags)
        if (l < 0 || std::size_t(l) >= nsnap) throw std::invalid_argument("lag exceeds the recorded horizon");
    const double h = nsnap > 1 ? mem.front()->times[1] - mem.front()->times[0] : 0.0;

    std::vector<TranslationFit> fits;
    for (Component c : kComponents) {
        TranslationFit f;
        f.component = c;
        f.required = translation_leading_rate(c) - tolerance;
        fits.push_back(f);
    }
    std::vector<std::vector<double>> acc(fits.size(), std::vector<double>(lags.size(), 0.0));

    for (std::size_t m = 0; m < mem.size(); ++m) {
        std::vector<Fields> fl;
        fl.reserve(nsnap);
        for (std::size_t j = 0; j < nsnap; ++j) fl.push_back(reconstruct_fields(mem[m]->states[j], mu0));
        for (std::size_t li = 0; li < lags.size(); ++li) {
            int lag = lags[li];
            if (lag == 0) continue;
            RngStream rng(mix_seed(seed, m), li);
            const std::size_t span = nsnap - std::size_t(lag);
            for (int s = 0; s < samples; ++s) {
                std::size_t t0 = std::min(span - 1, std::size_t(rng.uniform() * double(span)));
                for (std::size_t ci = 0; ci < fits.size(); ++ci) {
                    Component c = fits[ci].component;
                    SpectralField d = component_of(fl[t0 + lag], c) - component_of(fl[t0], c);
                    acc[ci][li] += std::pow(dual_norm_field(d, translation_space(c)), translation_exponent(c));
                }
            }
        }
    }
    const double count = double(mem.size()) * samples;
    for (std::size_t ci = 0; ci < fits.size(); ++ci) {
        auto& f = fits[ci];
        std::vector<double> x, y;
        for (std::size_t li = 0; li < lags.size(); ++li) {
            f.theta.push_back(lags[li] * h);
            f.moment.push_back(acc[ci][li] / count);
            if (lags[li] > 0 && f.moment.back() > 0) {
                x.push_back(f.theta.back());
                y.push_back(f.moment.back());
            }
        }
        if (x.size() >= 2) {
            f.slope = loglog_slope(x, y);
            f.pass = f.slope >= f.required;
        } else {
            f.slope = std::numeric_limits<double>::quiet_NaN();
            f.pass = false;
        }
    }
    return fits;
}

// ---- weak form ----

std::string_view to_string(Equation e)
{
    switch (e) {
    case Equation::U: return "u";
    case Equation::W: return "w";
    case Equation::M: return "M";
    case Equation::B: return "B";
    }
    return "?";
}

Space test_space(Equation e)
{
    switch (e) {
    case Equation::U: return Space::V;
    case Equation::W: return Space::W;
    case Equation::M: return Space::V1;
    default: return Space::V2;
    }
}

double weak_residual(const TrajectoryRecord& traj, const SpectralField& phi_in, Equation eq,
                     const PhysicalParams& p, const NoiseModel& noise, Path path)
{
    if (traj.states.empty()) throw std::invalid_argument("weak_residual needs snapshots");
    const int K = traj.states.front().kmax;
    if (phi_in.kmax() > K) throw std::invalid_argument("test function outside the Galerkin span (bandwidth)");
    SpectralField phi = phi_in.resized(K);
    SpectralField proj = project_onto(phi, test_space(eq));
    if (std::sqrt(l2_norm_sq(proj - phi)) > 1e-12 * (1 + std::sqrt(l2_norm_sq(phi))))
        throw std::invalid_argument("test function outside the Galerkin span of " +
                                    std::string(to_string(test_space(eq))));
    if (traj.snapshot_increments.size() + 1 != traj.states.size())
        throw std::invalid_argument("trajectory lacks per-snapshot Brownian increments");

    const Channel ch = static_cast<Channel>(int(eq));
    std::size_t col0 = 0;
    for (int c = 0; c < int(ch); ++c) col0 += noise.count(kChannels[c]);

    auto state_field = [&](const Fields& f) -> const SpectralField& {
        switch (eq) {
        case Equation::U: return f.u;
        case Equation::W: return f.w;
        case Equation::M: return f.M;
        default: return f.B;
        }
    };
    auto noise_arg = [&](const Fields& f) -> const SpectralField& {
        switch (eq) {
        case Equation::U: return f.u;
        case Equation::W: return f.w;
        case Equation::M: return f.M;
        default: return f.H;
        }
    };

    Fields first = reconstruct_fields(traj.states.front(), p.mu0);
    Fields last = reconstruct_fields(traj.states.back(), p.mu0);
    double defect = inner(state_field(last), phi) - inner(state_field(first), phi);
    for (std::size_t j = 0; j + 1 < traj.states.size(); ++j) {
        const double h = traj.times[j + 1] - traj.times[j];
        Fields f = reconstruct_fields(traj.states[j], p.mu0);
        DriftFields d = drift_fields(f, p, path);
        const SpectralField& rate = eq == Equation::U   ? d.u
                                    : eq == Equation::W ? d.w
                                    : eq == Equation::M ? d.M
                                                        : d.B;
        defect -= inner(rate.resized(K), phi) * h;
        for (std::size_t k = 0; k < noise.count(ch); ++k) {
            double db = traj.snapshot_increments[j][col0 + k];
            if (db == 0) continue;
            defect -= inner(apply_noise(noise, ch, noise_arg(f), k), phi) * db;
        }
    }
    return defect;
}

std::vector<std::pair<Equation, SpectralField>> weak_test_functions(int kmax, int count, std::uint64_t seed)
{
    static const Equation eqs[4] = {Equation::U, Equation::W, Equation::M, Equation::B};
    RngStream rng(seed, 17);
    std::vector<std::pair<Equation, SpectralField>> out;
    for (int i = 0; i < count; ++i) {
        Equation e = eqs[i % 4];
        const Basis& b = basis_for(kmax, test_space(e));
        std::vector<double> c(b.dim(), 0.0);
        c[std::min(b.dim() - 1, std::size_t(rng.uniform() * double(b.dim())))] = 1.0;
        out.emplace_back(e, b.synthesize(c));
    }
    return out;
}

// ---- step-size studies ----

namespace {

RunConfig study_config(RunConfig base, double dt, double finest)
{
    base.dt = dt;
    base.substeps = int(std::lround(dt / finest));
    if (std::abs(base.substeps * finest - dt) > 1e-12 * dt)
        throw std::invalid_argument("step sizes must be integer multiples of the finest one");
    return base;
}

}  // namespace

ConvergenceStudy ito_residual_study(const GalerkinState& initial, RunConfig base, const PhysicalParams& p,
                                    const NoiseModel& noise, const std::vector<double>& dts)
{
    const double finest = *std::min_element(dts.begin(), dts.end());
    base.record_ledger = true;
    ConvergenceStudy out;
    for (double dt : dts) {
        EnsembleResult e = ensemble_run(initial, study_config(base, dt, finest), p, noise);
        out.dt.push_back(dt);
        out.value.push_back(e.residual.mean);
        out.se.push_back(e.residual.se);
    }
    std::vector<double> a;
    for (double v : out.value) a.push_back(std::abs(v));
    out.slope = loglog_slope(out.dt, a);
    return out;
}

ConvergenceStudy weak_residual_study(const GalerkinState& initial, RunConfig base, const PhysicalParams& p,
                                     const NoiseModel& noise, const std::vector<double>& dts,
                                     const std::vector<std::pair<Equation, SpectralField>>& tests)
{
    if (base.snapshot_stride < 2)
        throw std::invalid_argument("weak residual study needs snapshot_stride >= 2 (stride 1 makes the defect roundoff)");
    const double finest = *std::min_element(dts.begin(), dts.end());
    base.keep_snapshots = true;
    ConvergenceStudy out;
    for (double dt : dts) {
        EnsembleResult e = ensemble_run(initial, study_config(base, dt, finest), p, noise);
        std::vector<double> sq;
        for (const auto* m : survivors(e))
            for (const auto& [eq, phi] : tests) {
                double d = weak_residual(*m, phi, eq, p, noise, base.path);
                sq.push_back(d * d);
            }
        Stats st = summarize(sq);
        out.dt.push_back(dt);
        out.value.push_back(std::sqrt(st.mean));
        out.se.push_back(st.mean > 0 ? st.se / (2 * std::sqrt(st.mean)) : 0.0);
    }
    out.slope = loglog_slope(out.dt, out.value);
    return out;
}

// ---- operator suites ----

SpectralField random_field(int kmax, Space space, RngStream& rng)
{
    const Basis& b = basis_for(kmax, space);
    std::vector<double> c(b.dim());
    for (double& v : c) v = rng.normal();
    return b.synthesize(c);
}

EstimateReport operator_identity_suite(int kmax, int samples, std::uint64_t seed, const NoiseModel& noise, Path path,
                                       double tolerance)
{
    double worst[5] = {0, 0, 0, 0, 0};
    RngStream rng(seed, 11);
    auto nrm = [](const SpectralField& f) { return std::sqrt(l2_norm_sq(f)); };
    auto track = [&](int i, double value, double scale) { worst[i] = std::max(worst[i], std::abs(value) / scale); };
    for (int s = 0; s < samples; ++s) {
        SpectralField u = random_field(kmax, Space::V, rng);
        SpectralField v = random_field(kmax, Space::V, rng);
        SpectralField M = random_field(kmax, Space::V1, rng);
        track(0, trilinear_b(u, v, v, path), nrm(u) * nrm(v) * nrm(v));
        track(1, trilinear_b(u, M, M, path), nrm(u) * nrm(M) * nrm(M));
        SpectralField Md = random_field(kmax, Space::V2, rng);
        SpectralField Hd = random_field(kmax, Space::V2, rng);
        track(2, eval_M1(Md, Hd, Hd, M1Form::Direct, path), nrm(Md) * nrm(Hd) * nrm(Hd));
        SpectralField H = random_field(kmax, Space::V1, rng);
        track(3, inner(apply_R3(M, H, path), H), nrm(M) * nrm(H) * nrm(H));
        std::vector<SpectralField> sig;
        for (std::size_t k = 0; k < noise.count(Channel::Magnetization); ++k)
            sig.push_back(noise.field(Channel::Magnetization, k));
        sig.push_back(random_field(kmax, Space::V, rng));
        for (const auto& g : sig) {
            const int K = std::max(g.kmax(), kmax);
            SpectralField Mk = M.resized(K);
            track(4, inner(advect(g.resized(K), Mk, K, path), Mk), nrm(g) * nrm(M) * nrm(M));
        }
    }
    EstimateReport rep;
    rep.audit = "operator_identities";
    static const char* names[5] = {"b(u,v,v)", "b(u,M,M)", "M1(M,H,H) with div(M+H)=0", "(M x H).H",
                                   "((g.grad)M).M"};
    for (int i = 0; i < 5; ++i) rep.add(names[i], worst[i], tolerance);
    return rep;
}

namespace {

double rel_diff(std::span<const double> a, std::span<const double> b)
{
    double d = 0, m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, std::abs(a[i] - b[i]));
        m = std::max({m, std::abs(a[i]), std::abs(b[i])});
    }
    return m > 0 ? d / m : d;
}

std::vector<double> flat(const SpectralField& f)
{
    std::vector<double> out;
    out.reserve(6 * f.modes());
    for (const auto& v : f.data())
        for (const auto& c : v) {
            out.push_back(c.real());
            out.push_back(c.imag());
        }
    return out;
}

}  // namespace

EstimateReport path_equivalence_suite(int kmax, int samples, std::uint64_t seed, const PhysicalParams& p,
                                      double tolerance)
{
    static const char* names[] = {"B0(u,u)", "B1(u,w)", "B2(u,M)", "M0(M,H)", "R1(H,H)",
                                  "R3(M,H)", "R3(w,M)", "M2(u,B)", "drift"};
    constexpr int n = 9;
    double worst[n] = {};
    RngStream rng(seed, 13);
    GalerkinState s(kmax);
    for (int t = 0; t < samples; ++t) {
        for (double& v : s.y) v = rng.normal();
        Fields f = reconstruct_fields(s, p.mu0);
        auto both = [&](int i, auto&& eval) {
            auto a = eval(Path::Triad), b = eval(Path::Pseudospectral);
            worst[i] = std::max(worst[i], rel_diff(a, b));
        };
        both(0, [&](Path q) { return apply_B(BFamily::B0, f.u, f.u, q).values; });
        both(1, [&](Path q) { return apply_B(BFamily::B1, f.u, f.w, q).values; });
        both(2, [&](Path q) { return apply_B(BFamily::B2, f.u, f.M, q).values; });
        both(3, [&](Path q) { return apply_M0(f.M, f.H, q).values; });
        both(4, [&](Path q) { return apply_R1(f.H, f.H, q).values; });
        both(5, [&](Path q) { return flat(apply_R3(f.M, f.H, q)); });
        both(6, [&](Path q) { return flat(apply_R3(f.w, f.M, q)); });
        both(7, [&](Path q) { return apply_M2(f.u, f.B, M2Form::Direct, q).values; });
        both(8, [&](Path q) { return assemble_drift(s, p, q).y; });
    }
    EstimateReport rep;
    rep.audit = "path_equivalence_k" + std::to_string(kmax);
    for (int i = 0; i < n; ++i) rep.add(names[i], worst[i], tolerance);
    return rep;
}

GalerkinState stationary_state(int kmax, const Vec3& h, const PhysicalParams& p)
{
    GalerkinState s(kmax);
    SpectralField H(kmax, Space::V2), M(kmax, Space::V2);
    H.add_cos({0, 0, 0}, h);
    M.add_cos({0, 0, 0}, {p.chi0 * h[0], p.chi0 * h[1], p.chi0 * h[2]});
    const Layout& L = s.layout();
    L.basis[int(Block::C)]->project_into(M, s.c());
    L.basis[int(Block::E)]->project_into(H, s.e());
    return s;
}

}  // namespace ferro
