// One PASS/FAIL line per acceptance criterion. Tolerances are fixed here.
#include "ferro/commands.hpp"
#include "ferro/diagnostics.hpp"
#include "ferro/tensor.hpp"
#include "ferro/trajectory_io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

using namespace ferro;
namespace fs = std::filesystem;

namespace {

// pinned tolerances
constexpr double kIdentityTol = 1e-10;
constexpr double kPathTol = 1e-9;
constexpr double kSpeedupK8 = 5.0;
constexpr double kDivTol = 1e-13;
constexpr double kSlopeLo = 0.8, kSlopeHi = 1.2;
constexpr double kStability = 0.2;
constexpr double kExactTol = 1e-15;
constexpr double kTranslationTol = 0.05;
constexpr double kWeakRate = 0.4;

struct Outcome {
    bool pass = true;
    std::string detail;
    void require(bool ok, const std::string& what)
    {
        if (!detail.empty()) detail += "; ";
        detail += (ok ? "" : "FAILED ") + what;
        pass = pass && ok;
    }
};

std::string num(double x)
{
    char b[32];
    std::snprintf(b, sizeof b, "%.3g", x);
    return b;
}

NoiseModel test_noise(double amp)
{
    std::array<std::vector<NoiseMember>, 4> m;
    for (auto& ch : m)
        ch = {{{1, 0, 0}, {0, amp, 0}, Wave::Cos}, {{0, 1, 0}, {0, 0, amp}, Wave::Sin}, {{0, 0, 1}, {amp, 0, 0}, Wave::Cos}};
    return NoiseModel(m);
}

GalerkinState scaled_random(int kmax, std::uint64_t seed, double energy, double mu0)
{
    GalerkinState s(kmax);
    RngStream rng(seed, 0);
    for (double& v : s.y) v = rng.normal();
    double e = energy_total(s, mu0);
    for (double& v : s.y) v *= std::sqrt(energy / e);
    return s;
}

double worst_row(const EstimateReport& r)
{
    double w = 0;
    for (const auto& row : r.rows) w = std::max(w, row.lhs);
    return w;
}

double seconds(const std::function<void()>& f)
{
    auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- criteria ----

Outcome operator_identities()
{
    Outcome o;
    EstimateReport r = operator_identity_suite(2, 1000, 2024, test_noise(0.3), Path::Pseudospectral, kIdentityTol);
    for (const auto& row : r.rows) o.require(row.pass, row.name + " " + num(row.lhs));
    return o;
}

Outcome dual_path()
{
    Outcome o;
    PhysicalParams p;
    // materialized tensors against the operators at k_max <= 2
    RngStream rng(77, 0);
    double tensor_worst = 0;
    for (int K = 1; K <= 2; ++K) {
        SpectralField u = random_field(K, Space::V, rng), w = random_field(K, Space::W, rng);
        SpectralField M = random_field(K, Space::V1, rng), H = random_field(K, Space::V1, rng);
        SpectralField B = random_field(K, Space::V2, rng);
        auto cmp = [&](const std::vector<double>& a, const std::vector<double>& b) {
            double d = 0, n = 0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                d = std::max(d, std::abs(a[i] - b[i]));
                n = std::max(n, std::abs(b[i]));
            }
            tensor_worst = std::max(tensor_worst, d / n);
        };
        auto co = [&](const SpectralField& f, Space s) { return basis_for(K, s).project(f); };
        cmp(OperatorTensor(TensorFamily::BForm, K, Space::V, Space::W, Space::W).contract(co(u, Space::V), co(w, Space::W)),
            apply_B(BFamily::B1, u, w).values);
        cmp(OperatorTensor(TensorFamily::M1Form, K, Space::V1, Space::V1, Space::V)
                .contract(co(M, Space::V1), co(H, Space::V1)),
            apply_M0(M, H).values);
        cmp(OperatorTensor(TensorFamily::M2Form, K, Space::V, Space::V2, Space::V2)
                .contract(co(u, Space::V), co(B, Space::V2)),
            apply_M2(u, B).values);
        cmp(OperatorTensor(TensorFamily::R1Form, K, Space::V1, Space::V1, Space::V)
                .contract(co(H, Space::V1), co(M, Space::V1)),
            apply_R1(H, M).values);
        cmp(OperatorTensor(TensorFamily::CrossForm, K, Space::V1, Space::V1, Space::W)
                .contract(co(M, Space::V1), co(H, Space::V1)),
            pair(apply_R3(M, H), Space::W).values);
    }
    o.require(tensor_worst <= kPathTol, "tensor vs pseudospectral (K<=2) " + num(tensor_worst));

    // triad convolution against pseudospectral: 100 states over k_max = 1, 2, 3
    const int counts[3] = {34, 33, 33};
    for (int K = 1; K <= 3; ++K) {
        EstimateReport r = path_equivalence_suite(K, counts[K - 1], 500 + K, p, kPathTol);
        o.require(r.pass(), "triad vs pseudospectral K=" + std::to_string(K) + " " + num(worst_row(r)));
    }

    GalerkinState s8 = scaled_random(8, 3, 1.0, p.mu0);
    double tp = 0;
    int reps = 0;
    while (tp < 1.0) {
        tp += seconds([&] { assemble_drift(s8, p, Path::Pseudospectral); });
        ++reps;
    }
    tp /= reps;
    double tt = seconds([&] { assemble_drift(s8, p, Path::Triad); });
    o.require(tt / tp >= kSpeedupK8, "K=8 drift triad " + num(tt) + " s, pseudospectral " + num(tp) +
                                         " s, speedup " + num(tt / tp));
    return o;
}

Outcome closed_form()
{
    Outcome o;
    PhysicalParams p;
    p.chi0 = 0;
    RunConfig rc;
    rc.T = 1.0;
    rc.dt = 1e-3;
    rc.stopping_radius = std::numeric_limits<double>::infinity();
    const double bound_factor = 3 * rc.T * rc.dt;

    auto field = [](auto&& build) {
        SpectralField f(1);
        build(f);
        return f;
    };
    struct Case {
        const char* name;
        Block block;
        Space space;
        SpectralField f;
        double rate;
    };
    const Case cases[] = {
        {"rotation k=0", Block::B, Space::W, field([](SpectralField& f) { f[{0, 0, 0}] = {1.0, 0.0, 0.0}; }),
         4 * p.alpha},
        {"rotation gradient |k|=1", Block::B, Space::W,
         field([](SpectralField& f) { f.add_cos({1, 0, 0}, {1, 0, 0}); }), (2 * p.lambda1 + p.lambda2) + 4 * p.alpha},
        {"magnetization |k|=1", Block::C, Space::V2, field([](SpectralField& f) { f.add_cos({1, 0, 0}, {0, 1, 0}); }),
         1 / p.tau + p.lambda},
        {"magnetization |k|^2=2", Block::C, Space::V2,
         field([](SpectralField& f) { f.add_sin({1, 1, 0}, {0, 0, 1}); }), 1 / p.tau + 2 * p.lambda},
    };
    for (const Case& c : cases) {
        GalerkinState y(1);
        basis_for(1, c.space).project_into(c.f, y.block(c.block));
        TrajectoryRecord r = integrate(y, rc, p, NoiseModel{});
        const double exact = std::exp(-c.rate * rc.T);
        double num2 = 0, den2 = 0;
        auto got = r.final_state.block(c.block);
        auto start = y.block(c.block);
        for (std::size_t j = 0; j < got.size(); ++j) {
            num2 += (got[j] - exact * start[j]) * (got[j] - exact * start[j]);
            den2 += exact * start[j] * exact * start[j];
        }
        const double err = std::sqrt(num2 / den2);
        double other = 0;
        if (c.block == Block::B)
            for (Block b : {Block::A, Block::C, Block::D, Block::E})
                for (double v : r.final_state.block(b)) other = std::max(other, std::abs(v));
        const double bound = c.rate * c.rate * bound_factor;
        o.require(r.failure.empty() && err <= bound && other == 0.0,
                  std::string(c.name) + " rate " + num(c.rate) + " rel err " + num(err) + " <= " + num(bound));
    }
    return o;
}

Outcome constraints()
{
    Outcome o;
    PhysicalParams p;
    NoiseModel n = test_noise(0.3);
    for (int K = 1; K <= 2; ++K) {
        RunConfig rc;
        rc.T = 0.1;
        rc.dt = 2e-3;
        rc.ensemble_size = 16;
        rc.seed = 10 + K;
        rc.check_constraints = true;
        rc.keep_snapshots = false;
        EnsembleResult e = ensemble_run(scaled_random(K, K, 2.0, p.mu0), rc, p, n);
        double worst = 0;
        for (const auto& m : e.members) worst = std::max(worst, m.max_divergence_ratio);
        o.require(e.failed.empty() && worst < kDivTol,
                  "K=" + std::to_string(K) + " max |div u|,|div B| ratio " + num(worst));
    }
    return o;
}

Outcome ito_audit()
{
    Outcome o;
    PhysicalParams p;
    NoiseModel n = test_noise(0.3);
    GalerkinState y0 = scaled_random(1, 5, 1.0, p.mu0);
    RunConfig base;
    base.T = 0.256;
    base.ensemble_size = 512;
    base.seed = 99;
    base.keep_snapshots = false;
    ConvergenceStudy s = ito_residual_study(y0, base, p, n, {4e-3, 2e-3, 1e-3});
    std::string vals;
    for (std::size_t i = 0; i < s.dt.size(); ++i) vals += " " + num(s.value[i]) + "+-" + num(s.se[i]);
    o.require(s.slope >= kSlopeLo && s.slope <= kSlopeHi, "residual means" + vals + ", slope " + num(s.slope));

    base.dt = 1e-3;
    base.record_ledger = true;
    EnsembleResult e = ensemble_run(y0, base, p, n);
    static const char* names[4] = {"u", "w", "M", "H"};
    for (int c = kFirstMart; c <= kLastMart; ++c) {
        std::vector<double> v;
        for (const auto& m : e.members) v.push_back(m.totals.sum[c]);
        Stats st = summarize(v);
        o.require(std::abs(st.mean) <= 3 * st.se + 1e-300,
                  std::string("martingale ") + names[c - kFirstMart] + " mean " + num(st.mean) + " se " + num(st.se));
    }
    return o;
}

Outcome apriori()
{
    Outcome o;
    PhysicalParams p;
    NoiseModel n = test_noise(0.3);
    auto c = validate_assumptions(n).c;
    Brackets br = energy_brackets(p, c, 1.0);
    o.require(br.positive(), "brackets positive");
    RunConfig rc;
    rc.T = 0.25;
    rc.dt = 2e-3;
    rc.ensemble_size = 400;
    rc.seed = 123;
    rc.record_ledger = true;
    rc.keep_snapshots = false;
    EnsembleResult e = ensemble_run(scaled_random(1, 6, 1.0, p.mu0), rc, p, n);
    EstimateReport g = apriori_check(e, p, c, 1.0);
    o.require(g.pass(), "pre-Gronwall lhs " + num(g.rows[0].lhs) + " rhs " + num(g.rows[0].rhs));
    for (double q : {1.0, 2.0, 4.0}) {
        MomentReport m = pmoment_check(e, q, kStability);
        o.require(m.report.pass(), "p=" + num(q) + " C_sup " + num(m.C_sup) + " (half " + num(m.C_sup_half) + ")");
    }
    return o;
}

Outcome admissibility_arith()
{
    Outcome o;
    PhysicalParams p;
    p.sigma = 0.8;
    p.mu0 = 1.3;
    AdmissibilityParams a;
    a.ell_star = 0.5;
    a.c = {2, 2, 2, 2};
    AdmissibilityReport r = admissibility_check(p, a, AdmissibilityMode::Relaxed);
    const double hi = 1 / (p.sigma * p.mu0 * p.mu0 * a.ell_star);
    o.require(r.lambda_lo == 0.0, "window lower bound " + num(r.lambda_lo));
    o.require(std::abs(r.lambda_hi - hi) <= kExactTol * hi, "upper bound matches 1/(sigma mu0^2 ell*)");
    const double thr = (2 * a.ell_star + 2 - 2 * p.nu) / (a.ell_star + 1);
    o.require(std::abs(r.c_threshold[0] - thr) <= kExactTol, "c1 threshold " + num(r.c_threshold[0]));

    PhysicalParams q;
    std::array<double, 4> c{1.9, 1.9, 1.9, 1.9};
    BracketRoots roots = bracket_roots(q, c, 1.0);
    auto sign_change = [&](double lam, int which) {
        PhysicalParams t = q;
        t.lambda = lam * (1 - 1e-9);
        double lo = energy_brackets(t, c, 1.0).value[which];
        t.lambda = lam * (1 + 1e-9);
        double up = energy_brackets(t, c, 1.0).value[which];
        return lo * up < 0;
    };
    o.require(sign_change(roots.curl_lo, 2) && sign_change(roots.curl_hi, 2) && sign_change(roots.div, 4),
              "bracket sign changes at lambda = " + num(roots.curl_lo) + ", " + num(roots.curl_hi) + ", " +
                  num(roots.div));
    return o;
}

Outcome translation()
{
    Outcome o;
    PhysicalParams p;
    RunConfig rc;
    rc.T = 0.1;
    rc.dt = 1e-3;
    rc.snapshot_stride = 2;
    rc.ensemble_size = 256;
    rc.seed = 8;
    EnsembleResult e = ensemble_run(scaled_random(1, 7, 1.0, p.mu0), rc, p, test_noise(0.3));
    for (const auto& f : translation_diagnostic(e, p.mu0, {1, 2, 4, 8}, 4, 3, kTranslationTol))
        o.require(f.pass, std::string(to_string(f.component)) + " slope " + num(f.slope) + " >= " +
                              num(f.required - kTranslationTol));
    return o;
}

Outcome weak_form()
{
    Outcome o;
    PhysicalParams p;
    RunConfig base;
    base.T = 0.2;
    base.ensemble_size = 16;
    base.seed = 41;
    base.snapshot_stride = 10;
    auto tests = weak_test_functions(1, 10, 5);
    ConvergenceStudy s =
        weak_residual_study(scaled_random(1, 8, 1.0, p.mu0), base, p, test_noise(0.3), {4e-3, 2e-3, 1e-3}, tests);
    std::string vals;
    for (double v : s.value) vals += " " + num(v);
    o.require(s.slope >= kWeakRate, "RMS residuals" + vals + ", rate " + num(s.slope));
    return o;
}

std::string slurp(const fs::path& f)
{
    std::ifstream in(f, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism()
{
    Outcome o;
    ExperimentConfig cfg = load_config(FERRO_SOURCE_DIR "/configs/default.cfg");
    fs::path root = fs::temp_directory_path() / "ferro_acceptance_determinism";
    fs::remove_all(root);
    std::ostringstream log;
    int ra = cmd_simulate(cfg, (root / "a").string(), log);
    int rb = cmd_simulate(cfg, (root / "b").string(), log);
    o.require(ra == 0 && rb == 0, "simulate exit codes");
    std::size_t files = 0, same = 0;
    for (const auto& ent : fs::directory_iterator(root / "a")) {
        ++files;
        fs::path other = root / "b" / ent.path().filename();
        if (fs::exists(other) && slurp(ent.path()) == slurp(other)) ++same;
    }
    o.require(files > 0 && files == same, std::to_string(same) + "/" + std::to_string(files) + " files identical");
    return o;
}

}  // namespace

int main()
{
    struct Criterion {
        const char* name;
        Outcome (*run)();
    };
    const Criterion all[] = {
        {"operator identities", operator_identities},
        {"dual-path equivalence", dual_path},
        {"closed-form decay", closed_form},
        {"constraint preservation", constraints},
        {"Ito energy audit", ito_audit},
        {"a priori bound and moments", apriori},
        {"admissibility arithmetic", admissibility_arith},
        {"translation exponents", translation},
        {"weak-form residual", weak_form},
        {"determinism", determinism},
    };
    int failed = 0, i = 0;
    for (const auto& c : all) {
        ++i;
        Outcome out;
        double t = 0;
        try {
            t = seconds([&] { out = c.run(); });
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string("exception: ") + e.what();
        }
        std::printf("%s criterion %d (%s) [%.1f s]: %s\n", out.pass ? "PASS" : "FAIL", i, c.name, t,
                    out.detail.c_str());
        std::fflush(stdout);
        failed += !out.pass;
    }
    return failed ? 1 : 0;
}
