#include "helpers.hpp"

#include "ferro/commands.hpp"
#include "ferro/config.hpp"
#include "ferro/trajectory_io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace testing;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"([physics]
nu = 1
lambda1 = 1
lambda2 = 0.5
lambda = 0.5
tau = 1
chi0 = 0.5
sigma = 1
mu0 = 1
alpha = 0.5
)";

fs::path scratch_dir(const std::string& name)
{
    fs::path d = fs::temp_directory_path() / ("ferro_unit_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> violations_of(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.violations();
    }
    return {};
}

bool mentions(const std::vector<std::string>& v, const std::string& what)
{
    for (const auto& s : v)
        if (s.find(what) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST_CASE("minimal config parses and echoes canonically")
{
    ExperimentConfig c = parse_config(kMinimal);
    CHECK(c.kmax == 1);
    CHECK(c.physics.lambda2 == 0.5);
    std::string canon = serialize(c);
    ExperimentConfig back = parse_config(canon);
    CHECK(serialize(back) == canon);
    CHECK(config_hash(back) == config_hash(c));
    CHECK(canon.find("[physics]") != std::string::npos);
}

TEST_CASE("config violations")
{
    std::string text = kMinimal;
    text.replace(text.find("nu = 1"), 6, "nu = -1");
    auto v = violations_of(text);
    CHECK(mentions(v, "viscosity"));

    auto missing = violations_of("[physics]\nnu = 1\n");
    CHECK(mentions(missing, "physics.tau is required"));
    CHECK(missing.size() >= 8);

    auto noise = violations_of(std::string(kMinimal) + "[noise]\nvelocity = cos 0 0 0 1.5 0 0\n");
    CHECK(mentions(noise, "noise: "));

    auto unknown = violations_of(std::string(kMinimal) + "[run]\nsteps = 4\n[extra]\nx = 1\n");
    CHECK(mentions(unknown, "unknown key run.steps"));
    CHECK(mentions(unknown, "unknown section [extra]"));

    auto kbad = violations_of(std::string(kMinimal) + "[basis]\nkmax = 12\n[run]\ndt = 0\n");
    CHECK(mentions(kbad, "kmax"));
    CHECK(mentions(kbad, "dt"));
}

TEST_CASE("initial data")
{
    ExperimentConfig c = parse_config(std::string(kMinimal) + "[initial]\nkind = random\nenergy = 2.5\nseed = 4\n");
    GalerkinState y = make_initial(c);
    CHECK(energy_total(y, c.physics.mu0) == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(make_initial(c).y == y.y);
    c.initial.kind = InitialSpec::Kind::Zero;
    CHECK(max_abs(make_initial(c).y) == 0.0);
}

TEST_CASE("energy totals")
{
    CHECK(energy_total(GalerkinState(1), 1.0) == 0.0);
    Fields f = reconstruct_fields(GalerkinState(1), 2.0);
    f.u = cos_mode(1, {1, 0, 0}, {0, 1, 0});
    CHECK(energy_total(f, 2.0) == doctest::Approx(4 * kPi3).epsilon(1e-14));
    f.H = f.u;
    CHECK(energy_total(f, 2.0) == doctest::Approx(12 * kPi3).epsilon(1e-14));
}

TEST_CASE("csv helpers")
{
    CHECK(csv_quote("plain") == "plain");
    CHECK(csv_quote("a,b") == "\"a,b\"");
    CHECK(csv_quote("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_split("1,\"a,b\",\"x\"\"y\",") == std::vector<std::string>{"1", "a,b", "x\"y", ""});
    for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23})
        CHECK(std::strtod(csv_number(x).c_str(), nullptr) == x);
}

TEST_CASE("ledger csv")
{
    fs::path d = scratch_dir("ledger");
    write_ledger_csv((d / "empty.csv").string(), {});
    std::string text = slurp(d / "empty.csv");
    CHECK(std::count(text.begin(), text.end(), '\n') == 1);
    CHECK(read_ledger_csv((d / "empty.csv").string()).empty());
    CHECK(ledger_header().size() == std::size_t(kLedgerWidth) + 2);

    EnergyLedger L(3);
    RngStream rng(1, 0);
    for (std::size_t i = 0; i < L.size(); ++i) {
        L[i].step = i;
        L[i].t = 0.1 * double(i);
        for (double& v : L[i].v) v = rng.normal() * 1e-7;
    }
    write_ledger_csv((d / "l.csv").string(), L);
    EnergyLedger back = read_ledger_csv((d / "l.csv").string());
    REQUIRE(back.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(back[i].step == L[i].step);
        CHECK(back[i].t == L[i].t);
        CHECK(back[i].v == L[i].v);
    }
}

TEST_CASE("trajectory file round trip")
{
    fs::path d = scratch_dir("traj");
    ExperimentConfig c = parse_config(kMinimal);
    TrajectoryRecord r;
    r.times = {0, 0.5};
    r.states = {random_state(1, 1), random_state(1, 2)};
    r.failure = "none";
    write_trajectory((d / "t.bin").string(), r, {config_hash(c), 3, 42, 1});
    TrajectoryFile f = read_trajectory((d / "t.bin").string());
    CHECK(f.config_hash() == config_hash(c));
    CHECK(f.header.at("member") == "3");
    CHECK(f.times == r.times);
    REQUIRE(f.states.size() == 2);
    CHECK(f.states[1].y == r.states[1].y);

    std::string bytes = slurp(d / "t.bin");
    std::ofstream((d / "cut.bin"), std::ios::binary) << bytes.substr(0, bytes.size() - 8);
    CHECK_THROWS(read_trajectory((d / "cut.bin").string()));
}

TEST_CASE("simulate writes deterministic artifacts and verify refuses foreign ones")
{
    std::string text = std::string(kMinimal) +
                       "[noise]\nvelocity = cos 1 0 0 0 0.3 0\n[run]\nT = 0.02\ndt = 0.005\nensemble_size = 2\n"
                       "record_ledger = true\n";
    ExperimentConfig c = parse_config(text);
    fs::path a = scratch_dir("sim_a"), b = scratch_dir("sim_b");
    std::ostringstream log;
    CHECK(cmd_simulate(c, a.string(), log) == 0);
    CHECK(cmd_simulate(c, b.string(), log) == 0);
    for (const char* f : {"config.cfg", "summary.csv", "trajectory_m0000.bin", "trajectory_m0001.bin", "ledger_m0001.csv"})
        CHECK(slurp(a / f) == slurp(b / f));
    CHECK(mismatched_artifacts(c, a.string()).empty());

    ExperimentConfig other = c;
    other.run.seed = 99;
    CHECK(mismatched_artifacts(other, a.string()).size() == 2);
    CHECK(cmd_verify(other, a.string(), log) == 2);

    CHECK(cmd_inspect({(a / "trajectory_m0000.bin").string()}, &c, log) == 0);
    CHECK(cmd_inspect({(a / "trajectory_m0000.bin").string()}, &other, log) == 2);
}

TEST_CASE("simulate with a decoupled rotation mode shows pure decay")
{
    std::string text = std::string(kMinimal) + "[run]\nT = 0.1\ndt = 0.001\nrecord_ledger = true\n" +
                       "[initial]\nkind = coefficients\ncoefficients =";
    GalerkinState y(1);
    y.b()[function_index(1, Space::W, {0, 0, 0})] = 1;
    for (double v : y.y) text += " " + csv_number(v);
    text += "\n";
    ExperimentConfig c = parse_config(text);
    fs::path d = scratch_dir("decay");
    std::ostringstream log;
    REQUIRE(cmd_simulate(c, d.string(), log) == 0);
    EnergyLedger L = read_ledger_csv((d / "ledger_m0000.csv").string());
    REQUIRE(L.size() == 100);
    const double q = 1 - 4 * c.physics.alpha * c.run.dt;  // one Euler step of w' = -4 alpha w
    for (std::size_t i = 0; i < L.size(); ++i)
        CHECK(L[i].v[kEtot] == doctest::Approx(std::pow(q * q, double(i))).epsilon(1e-12));
}

TEST_CASE("sweep reports the nonpositive bracket outside the window")
{
    std::string text = std::string(kMinimal) +
                       "[noise]\nmagnetization = sin 1 0 0 0 0 0.3\n[run]\nT = 0.01\ndt = 0.005\n"
                       "[diagnostics]\nsweep_lambdas = 0.5 2.5\nsweep_ensemble = 2\n";
    ExperimentConfig c = parse_config(text);
    fs::path d = scratch_dir("sweep");
    std::ostringstream log;
    CHECK(cmd_sweep(c, d.string(), log) == 0);
    std::string csv = slurp(d / "sweep.csv");
    CHECK(csv.find("bracket_nonpositive") != std::string::npos);
    CHECK(log.str().find("bracket curl_M") != std::string::npos);
}
