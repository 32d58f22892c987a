#include "ferro/commands.hpp"

#include "ferro/trajectory_io.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>

namespace ferro {

namespace fs = std::filesystem;

namespace {

std::string member_name(const char* stem, std::size_t m, const char* ext)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_m%04zu%s", stem, m, ext);
    return buf;
}

void write_text(const fs::path& p, const std::string& text)
{
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write '" + p.string() + "'");
    f << text;
}

void print_report(const EstimateReport& r, std::ostream& log)
{
    for (const auto& row : r.rows)
        log << (row.pass ? "  ok   " : "  FAIL ") << std::left << std::setw(22) << r.audit << std::setw(34) << row.name
            << " lhs=" << std::setprecision(6) << row.lhs << " rhs=" << row.rhs << " se=" << row.se << "\n";
    for (const auto& n : r.notes) log << "       " << r.audit << ": " << n << "\n";
}

std::vector<double> halvings(double dt) { return {dt, dt / 2, dt / 4}; }

}  // namespace

int cmd_simulate(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log)
{
    fs::create_directories(out_dir);
    const NoiseModel noise = cfg.noise_model();
    const GalerkinState y0 = make_initial(cfg);
    const std::uint64_t hash = config_hash(cfg);
    write_text(fs::path(out_dir) / "config.cfg", serialize(cfg));

    EnsembleResult ens = ensemble_run(y0, cfg.run, cfg.physics, noise);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t m = 0; m < ens.members.size(); ++m) {
        const auto& r = ens.members[m];
        write_trajectory((fs::path(out_dir) / member_name("trajectory", m, ".bin")).string(), r,
                         {hash, m, r.seed, cfg.kmax});
        if (cfg.run.record_ledger)
            write_ledger_csv((fs::path(out_dir) / member_name("ledger", m, ".csv")).string(), r.ledger);
        double mart = 0;
        for (int c = kFirstMart; c <= kLastMart; ++c) mart += r.totals.sum[c];
        rows.push_back({std::to_string(m), std::to_string(r.seed), std::to_string(r.steps_taken),
                        r.stopped_at ? csv_number(*r.stopped_at) : "", r.failure, csv_number(r.totals.energy0),
                        csv_number(r.totals.energy_final), csv_number(r.totals.energy_sup),
                        csv_number(r.totals.sum[kResidual]), csv_number(mart), csv_number(r.max_divergence_ratio)});
    }
    write_csv((fs::path(out_dir) / "summary.csv").string(),
              {"member", "seed", "steps", "stopped_at", "failure", "E0", "E_final", "E_sup", "residual_sum",
               "martingale_sum", "max_div_ratio"},
              rows);
    log << "simulate: " << ens.members.size() << " member(s), " << ens.failed.size() << " failed, config "
        << hex64(hash) << ", output in " << out_dir << "\n";
    log << "  E_final mean " << ens.energy_final.mean << " (se " << ens.energy_final.se << ")\n";
    return ens.failed.empty() ? 0 : 1;
}

std::vector<std::string> mismatched_artifacts(const ExperimentConfig& cfg, const std::string& dir)
{
    std::vector<std::string> bad;
    if (!fs::is_directory(dir)) return bad;
    const std::uint64_t hash = config_hash(cfg);
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".bin" && e.path().filename().string().rfind("trajectory_", 0) == 0)
            files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        try {
            if (read_trajectory(f.string()).config_hash() != hash) bad.push_back(f.string());
        } catch (const std::exception& ex) {
            bad.push_back(f.string() + " (" + ex.what() + ")");
        }
    }
    return bad;
}

std::vector<EstimateReport> verify_suite(const ExperimentConfig& cfg, std::ostream& log)
{
    std::vector<EstimateReport> out;
    const auto& p = cfg.physics;
    const auto& d = cfg.diagnostics;
    const NoiseModel noise = cfg.noise_model();
    const GalerkinState y0 = make_initial(cfg);

    NoiseValidationReport nv = validate_assumptions(noise);
    {
        EstimateReport r;
        r.audit = "noise";
        static const char* names[4] = {"c_velocity > 0", "c_rotation > 0", "c_magnetization > 0", "c_field > 0"};
        for (int i = 0; i < 4; ++i) r.add_check(names[i], nv.c[i] > 0, nv.c[i]);
        r.add_check("transported noise divergence-free", nv.pass, 0);
        out.push_back(r);
    }
    {
        AdmissibilityReport a = admissibility_check(p, cfg.admissibility(nv), d.mode);
        EstimateReport r;
        r.audit = "admissibility";
        r.add_check("lambda window nonempty", a.window_nonempty, a.lambda_hi - a.lambda_lo);
        r.add_check("lambda inside window", a.contains(p.lambda), p.lambda);
        static const char* names[4] = {"c_velocity window", "c_rotation window", "c_magnetization window",
                                       "c_field window"};
        for (int i = 0; i < 4; ++i) r.add_check(names[i], a.c_ok[i], nv.c[i]);
        if (d.mode == AdmissibilityMode::Strict) r.add_check("ell_star lower bounds", a.ell_ok, d.ell_star);
        r.notes = a.failures;
        r.notes.push_back("window (" + std::to_string(a.lambda_lo) + ", " + std::to_string(a.lambda_hi) + ")");
        out.push_back(r);
    }
    Brackets br = energy_brackets(p, nv.c, d.C0);
    {
        EstimateReport r;
        r.audit = "brackets";
        for (std::size_t i = 0; i < br.value.size(); ++i)
            r.add_check(std::string(Brackets::names[i]) + " > 0", br.value[i] > 0, br.value[i]);
        out.push_back(r);
    }
    log << "verify: operator suites\n";
    out.push_back(operator_identity_suite(cfg.kmax, d.identity_samples, cfg.run.seed, noise, cfg.run.path));
    out.push_back(path_equivalence_suite(cfg.kmax, std::max(1, d.identity_samples / 5), cfg.run.seed, p));

    log << "verify: ensemble of " << d.verify_ensemble << "\n";
    RunConfig rc = cfg.run;
    rc.ensemble_size = d.verify_ensemble;
    rc.record_ledger = true;
    rc.check_constraints = true;
    rc.keep_snapshots = true;
    EnsembleResult ens = ensemble_run(y0, rc, p, noise);
    {
        EstimateReport r;
        r.audit = "ensemble";
        r.add_check("members without failure", ens.failed.empty(), double(ens.failed.size()));
        double worst = 0;
        for (const auto& m : ens.members) worst = std::max(worst, m.max_divergence_ratio);
        r.add("div u, div B relative norm", worst, 1e-13);
        static const char* names[4] = {"martingale u mean", "martingale w mean", "martingale M mean",
                                       "martingale H mean"};
        for (int c = kFirstMart; c <= kLastMart; ++c) {
            std::vector<double> v;
            for (const auto& m : ens.members)
                if (m.failure.empty()) v.push_back(m.totals.sum[c]);
            Stats s = summarize(v);
            r.add(names[c - kFirstMart], std::abs(s.mean), 0.0, s.se);
        }
        out.push_back(r);
    }
    if (br.positive()) {
        out.push_back(apriori_check(ens, p, nv.c, d.C0));
    }
    if (ens.survivors >= 100) {
        for (double q : {2.0, 4.0}) out.push_back(pmoment_check(ens, q).report);
    }
    {
        EstimateReport r;
        r.audit = "translation";
        auto fits = translation_diagnostic(ens, p.mu0, d.translation_lags, 4, cfg.run.seed);
        for (const auto& f : fits)
            r.add_check("slope " + std::string(to_string(f.component)) + " >= " + csv_number(f.required), f.pass,
                        f.slope);
        out.push_back(r);
    }
    {
        EstimateReport r;
        r.audit = "drift_dual_norms";
        std::vector<DualNormTerm> mean;
        std::size_t n = 0;
        for (const auto& m : ens.members) {
            if (!m.failure.empty()) continue;
            auto t = drift_dual_norm_audit(m, p, cfg.run.path);
            if (mean.empty()) {
                mean = t;
            } else {
                for (std::size_t i = 0; i < t.size(); ++i) mean[i].integral += t[i].integral;
            }
            ++n;
        }
        for (auto& t : mean) r.add_check(t.name + " integral finite", std::isfinite(t.integral), t.integral / double(n));
        out.push_back(r);
    }

    log << "verify: step-size studies\n";
    {
        EstimateReport r;
        r.audit = "step_size";
        RunConfig base = cfg.run;
        base.ensemble_size = d.verify_ensemble;
        base.check_constraints = false;
        auto ito = ito_residual_study(y0, base, p, noise, halvings(cfg.run.dt));
        r.add("ledger residual slope >= 0.8", 0.8, ito.slope);
        r.add("ledger residual slope <= 1.2", ito.slope, 1.2);
        base.ensemble_size = std::min(d.verify_ensemble, 16);
        base.record_ledger = false;
        base.snapshot_stride = 10;
        auto tests = weak_test_functions(cfg.kmax, d.weak_tests, cfg.run.seed);
        auto weak = weak_residual_study(y0, base, p, noise, halvings(cfg.run.dt), tests);
        r.add("weak residual rate >= 0.4", 0.4, weak.slope);
        out.push_back(r);
    }
    {
        EstimateReport r;
        r.audit = "stationary";
        GalerkinState s = stationary_state(cfg.kmax, cfg.initial.h, p);
        RunConfig sc;
        sc.T = 10 * cfg.run.dt;
        sc.dt = cfg.run.dt;
        sc.snapshot_stride = 1;
        NoiseModel none;
        TrajectoryRecord tr = integrate(s, sc, p, none);
        double worst = 0;
        for (const auto& [eq, phi] : weak_test_functions(cfg.kmax, 8, cfg.run.seed))
            worst = std::max(worst, std::abs(weak_residual(tr, phi, eq, p, none, cfg.run.path)));
        r.add("weak residual", worst, 1e-10);
        out.push_back(r);
    }
    return out;
}

int cmd_verify(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log)
{
    auto bad = mismatched_artifacts(cfg, out_dir);
    if (!bad.empty()) {
        log << "verify: refusing artifacts produced by a different config:\n";
        for (auto& b : bad) log << "  " << b << "\n";
        return 2;
    }
    fs::create_directories(out_dir);
    auto reports = verify_suite(cfg, log);

    std::vector<std::vector<std::string>> rows;
    nlohmann::json failures = nlohmann::json::array();
    bool all = true;
    for (const auto& r : reports) {
        print_report(r, log);
        for (const auto& row : r.rows) {
            rows.push_back({r.audit, row.name, csv_number(row.lhs), csv_number(row.rhs), csv_number(row.se),
                            row.pass ? "pass" : "fail"});
            if (!row.pass) {
                all = false;
                failures.push_back({{"audit", r.audit}, {"check", row.name}, {"lhs", row.lhs}, {"rhs", row.rhs},
                                    {"se", row.se}});
            }
        }
    }
    write_csv((fs::path(out_dir) / "verify_report.csv").string(), {"audit", "check", "lhs", "rhs", "se", "result"},
              rows);
    nlohmann::json doc = {{"config_hash", hex64(config_hash(cfg))}, {"pass", all}, {"failures", failures}};
    write_text(fs::path(out_dir) / "verify_failures.json", doc.dump(2) + "\n");
    log << "verify: " << (all ? "all checks passed" : std::to_string(failures.size()) + " failed check(s)") << "\n";
    return all ? 0 : 1;
}

int cmd_sweep(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log)
{
    fs::create_directories(out_dir);
    const NoiseModel noise = cfg.noise_model();
    const NoiseValidationReport nv = validate_assumptions(noise);
    const GalerkinState y0 = make_initial(cfg);
    const auto& d = cfg.diagnostics;

    BracketRoots roots = bracket_roots(cfg.physics, nv.c, d.C0);
    log << "sweep: curl_M bracket roots " << roots.curl_lo << ", " << roots.curl_hi << "; div_M bracket root "
        << roots.div << "\n";

    std::vector<std::string> header{"lambda", "window_lo", "window_hi", "in_window"};
    for (auto n : Brackets::names) header.push_back(std::string("bracket_") + n);
    for (const char* h : {"brackets_positive", "members", "pathwise_pass_rate", "audit"}) header.push_back(h);

    std::vector<std::vector<std::string>> rows;
    for (double lam : d.sweep_lambdas) {
        PhysicalParams p = cfg.physics;
        p.lambda = lam;
        AdmissibilityReport a = admissibility_check(p, cfg.admissibility(nv), d.mode);
        Brackets br = energy_brackets(p, nv.c, d.C0);
        std::vector<std::string> row{csv_number(lam), csv_number(a.lambda_lo), csv_number(a.lambda_hi),
                                     a.contains(lam) ? "true" : "false"};
        for (double b : br.value) row.push_back(csv_number(b));
        row.push_back(br.positive() ? "true" : "false");
        if (br.positive()) {
            RunConfig rc = cfg.run;
            rc.ensemble_size = d.sweep_ensemble;
            rc.record_ledger = true;
            rc.keep_snapshots = false;
            EnsembleResult ens = ensemble_run(y0, rc, p, noise);
            auto margins = apriori_margins(ens, p, nv.c, d.C0);
            std::size_t ok = 0;
            for (double m : margins) ok += m <= 0;
            EstimateReport rep = apriori_check(ens, p, nv.c, d.C0);
            row.push_back(std::to_string(margins.size()));
            row.push_back(csv_number(margins.empty() ? 0.0 : double(ok) / double(margins.size())));
            row.push_back(rep.pass() ? "pass" : "fail");
        } else {
            row.push_back("0");
            row.push_back("");
            row.push_back("bracket_nonpositive");
        }
        log << "  lambda " << lam << (a.contains(lam) ? " inside" : " outside") << " window, "
            << (br.positive() ? "brackets positive" : "bracket nonpositive: " + br.violations().front()) << "\n";
        rows.push_back(std::move(row));
    }
    write_csv((fs::path(out_dir) / "sweep.csv").string(), header, rows);
    return 0;
}

int cmd_inspect(const std::vector<std::string>& files, const ExperimentConfig* cfg, std::ostream& log)
{
    int status = 0;
    for (const auto& f : files) {
        try {
            if (fs::path(f).extension() == ".csv") {
                EnergyLedger L = read_ledger_csv(f);
                double res = 0;
                for (const auto& r : L) res += r.v[kResidual];
                log << f << ": ledger with " << L.size() << " rows, summed residual " << res << "\n";
                continue;
            }
            TrajectoryFile t = read_trajectory(f);
            log << f << ":\n";
            for (const auto& [k, v] : t.header) log << "  " << k << " = " << v << "\n";
            if (!t.times.empty())
                log << "  time span [" << t.times.front() << ", " << t.times.back() << "]\n";
            if (cfg) {
                bool match = t.config_hash() == config_hash(*cfg);
                log << "  config hash " << (match ? "matches" : "DOES NOT match") << " the given config\n";
                if (!match) status = 2;
                if (!t.states.empty())
                    log << "  E_tot first " << energy_total(t.states.front(), cfg->physics.mu0) << ", last "
                        << energy_total(t.states.back(), cfg->physics.mu0) << "\n";
            }
        } catch (const std::exception& e) {
            log << f << ": " << e.what() << "\n";
            status = 1;
        }
    }
    return status;
}

}  // namespace ferro
