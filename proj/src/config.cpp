#include "ferro/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <deque>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace ferro {

namespace pt = boost::property_tree;

namespace {

std::string num(double x)
{
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

std::string trim(std::string_view s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto p = s.find(sep, start);
        out.push_back(trim(s.substr(start, p - start)));
        if (p == std::string_view::npos) break;
        start = p + 1;
    }
    return out;
}

std::vector<std::string> words(std::string_view s)
{
    std::vector<std::string> out;
    std::istringstream is{std::string(s)};
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

bool parse_double(const std::string& s, double& out)
{
    if (s == "inf") {
        out = INFINITY;
        return true;
    }
    auto r = std::from_chars(s.data(), s.data() + s.size(), out);
    return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

template <class I>
bool parse_int(const std::string& s, I& out)
{
    auto r = std::from_chars(s.data(), s.data() + s.size(), out);
    return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

/// Reads one section against a fixed key list, recording every problem.
class Section {
public:
    Section(const pt::ptree* tree, std::string name, std::vector<std::string>& errors)
        : tree_(tree), name_(std::move(name)), errors_(errors)
    {
    }

    const std::string* raw(const std::string& key, bool required)
    {
        known_.insert(key);
        if (tree_) {
            auto it = tree_->find(key);
            if (it != tree_->not_found()) {
                store_.push_back(trim(it->second.data()));
                return &store_.back();
            }
        }
        if (required) errors_.push_back(name_ + "." + key + " is required");
        return nullptr;
    }

    void real(const std::string& key, double& out, bool required = false)
    {
        if (auto s = raw(key, required))
            if (!parse_double(*s, out)) bad(key, "a number", *s);
    }
    template <class I>
    void integer(const std::string& key, I& out)
    {
        if (auto s = raw(key, false))
            if (!parse_int(*s, out)) bad(key, "an integer", *s);
    }
    void boolean(const std::string& key, bool& out)
    {
        if (auto s = raw(key, false)) {
            if (*s == "true")
                out = true;
            else if (*s == "false")
                out = false;
            else
                bad(key, "true or false", *s);
        }
    }
    void text(const std::string& key, std::string& out)
    {
        if (auto s = raw(key, false)) out = *s;
    }
    template <class T, class F>
    void list(const std::string& key, std::vector<T>& out, F parse_one)
    {
        if (auto s = raw(key, false)) {
            std::vector<T> v;
            for (auto& w : words(*s)) {
                T x{};
                if (!parse_one(w, x)) {
                    bad(key, "a list of numbers", *s);
                    return;
                }
                v.push_back(x);
            }
            out = std::move(v);
        }
    }
    void bad(const std::string& key, const char* expected, const std::string& got)
    {
        errors_.push_back(name_ + "." + key + ": expected " + expected + ", got '" + got + "'");
    }
    void reject_unknown()
    {
        if (!tree_) return;
        for (auto& [k, v] : *tree_)
            if (!known_.count(k)) errors_.push_back("unknown key " + name_ + "." + k);
    }

private:
    const pt::ptree* tree_;
    std::string name_;
    std::vector<std::string>& errors_;
    std::set<std::string> known_;
    std::deque<std::string> store_;
};

constexpr std::array<const char*, 4> kNoiseKeys{"velocity", "rotation", "magnetization", "field"};

std::string format_members(const std::vector<NoiseMember>& ms)
{
    std::string out;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        const auto& m = ms[i];
        if (i) out += "; ";
        out += m.wave == Wave::Cos ? "cos" : "sin";
        for (int c = 0; c < 3; ++c) out += " " + std::to_string(m.k[c]);
        for (int c = 0; c < 3; ++c) out += " " + num(m.amplitude[c]);
    }
    return out;
}

bool parse_members(const std::string& s, std::vector<NoiseMember>& out, std::string& why)
{
    out.clear();
    if (s.empty()) return true;
    for (auto& item : split(s, ';')) {
        auto w = words(item);
        if (w.size() != 7 || (w[0] != "cos" && w[0] != "sin")) {
            why = "each member is 'cos|sin kx ky kz ax ay az', got '" + item + "'";
            return false;
        }
        NoiseMember m;
        m.wave = w[0] == "cos" ? Wave::Cos : Wave::Sin;
        for (int c = 0; c < 3; ++c)
            if (!parse_int(w[1 + c], m.k[c]) || !parse_double(w[4 + c], m.amplitude[c])) {
                why = "bad number in '" + item + "'";
                return false;
            }
        out.push_back(m);
    }
    return true;
}

std::string_view kind_name(InitialSpec::Kind k)
{
    switch (k) {
    case InitialSpec::Kind::Zero: return "zero";
    case InitialSpec::Kind::Random: return "random";
    case InitialSpec::Kind::Coefficients: return "coefficients";
    case InitialSpec::Kind::Stationary: return "stationary";
    }
    return "?";
}

template <class T>
std::string join(const std::vector<T>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        if constexpr (std::is_floating_point_v<T>)
            out += num(v[i]);
        else
            out += std::to_string(v[i]);
    }
    return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> v)
    : std::runtime_error([&] {
          std::string m = "invalid configuration:";
          for (auto& s : v) m += "\n  " + s;
          return m;
      }()),
      violations_(std::move(v))
{
}

AdmissibilityParams ExperimentConfig::admissibility(const NoiseValidationReport& r) const
{
    AdmissibilityParams a;
    a.C0 = diagnostics.C0;
    a.ell_star = diagnostics.ell_star;
    a.C4_bdg = diagnostics.C4_bdg;
    a.c = r.c;
    return a;
}

ExperimentConfig parse_config(const std::string& text)
{
    pt::ptree tree;
    try {
        std::istringstream is(text);
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError({"syntax error at line " + std::to_string(e.line()) + ": " + e.message()});
    }

    std::vector<std::string> errors;
    ExperimentConfig cfg;
    static const std::set<std::string> sections{"physics", "basis",       "noise", "run",
                                                "initial", "diagnostics", "output"};
    for (auto& [name, sub] : tree) {
        if (!sub.data().empty())
            errors.push_back("key '" + name + "' outside a section");
        else if (!sections.count(name))
            errors.push_back("unknown section [" + name + "]");
    }
    auto section = [&](const char* name) -> const pt::ptree* {
        auto it = tree.find(name);
        return it == tree.not_found() ? nullptr : &it->second;
    };

    {
        Section s(section("physics"), "physics", errors);
        auto& p = cfg.physics;
        s.real("nu", p.nu, true);
        s.real("lambda1", p.lambda1, true);
        s.real("lambda2", p.lambda2, true);
        s.real("lambda", p.lambda, true);
        s.real("tau", p.tau, true);
        s.real("chi0", p.chi0, true);
        s.real("sigma", p.sigma, true);
        s.real("mu0", p.mu0, true);
        s.real("alpha", p.alpha, true);
        s.reject_unknown();
        for (auto& v : p.violations()) errors.push_back("physics." + v);
    }
    {
        Section s(section("basis"), "basis", errors);
        s.integer("kmax", cfg.kmax);
        s.reject_unknown();
        if (cfg.kmax < 1 || cfg.kmax > 8) errors.push_back("basis.kmax must lie in [1, 8]");
    }
    {
        Section s(section("noise"), "noise", errors);
        for (int c = 0; c < 4; ++c) {
            if (auto raw = s.raw(kNoiseKeys[c], false)) {
                std::string why;
                if (!parse_members(*raw, cfg.noise[c], why))
                    errors.push_back(std::string("noise.") + kNoiseKeys[c] + ": " + why);
            }
        }
        s.reject_unknown();
    }
    {
        Section s(section("run"), "run", errors);
        auto& r = cfg.run;
        s.real("T", r.T);
        s.real("dt", r.dt);
        if (auto raw = s.raw("stopping_radius", false)) {
            double R = 0;
            if (*raw == "default")
                r.stopping_radius.reset();
            else if (parse_double(*raw, R))
                r.stopping_radius = R;
            else
                s.bad("stopping_radius", "'default', 'inf' or a number", *raw);
        }
        if (auto raw = s.raw("scheme", false)) {
            try {
                r.scheme = scheme_from_string(*raw);
            } catch (const std::exception&) {
                s.bad("scheme", "euler_maruyama or tamed_em", *raw);
            }
        }
        s.integer("ensemble_size", r.ensemble_size);
        s.integer("seed", r.seed);
        s.integer("snapshot_stride", r.snapshot_stride);
        s.integer("substeps", r.substeps);
        if (auto raw = s.raw("path", false)) {
            try {
                r.path = path_from_string(*raw);
            } catch (const std::exception&) {
                s.bad("path", "pseudospectral or triad", *raw);
            }
        }
        s.boolean("record_ledger", r.record_ledger);
        s.boolean("check_constraints", r.check_constraints);
        s.reject_unknown();
        for (auto& v : r.violations()) errors.push_back(v);
    }
    {
        Section s(section("initial"), "initial", errors);
        auto& in = cfg.initial;
        if (auto raw = s.raw("kind", false)) {
            if (*raw == "zero") in.kind = InitialSpec::Kind::Zero;
            else if (*raw == "random") in.kind = InitialSpec::Kind::Random;
            else if (*raw == "coefficients") in.kind = InitialSpec::Kind::Coefficients;
            else if (*raw == "stationary") in.kind = InitialSpec::Kind::Stationary;
            else s.bad("kind", "zero, random, coefficients or stationary", *raw);
        }
        s.real("energy", in.energy);
        s.integer("seed", in.seed);
        s.text("blocks", in.blocks);
        s.list("coefficients", in.coefficients, [](const std::string& w, double& x) { return parse_double(w, x); });
        std::vector<double> h;
        s.list("h", h, [](const std::string& w, double& x) { return parse_double(w, x); });
        if (!h.empty()) {
            if (h.size() != 3) errors.push_back("initial.h needs three components");
            else in.h = {h[0], h[1], h[2]};
        }
        s.reject_unknown();
        if (!(in.energy >= 0) || !std::isfinite(in.energy)) errors.push_back("initial.energy must be finite and >= 0");
        if (in.blocks.empty() || in.blocks.find_first_not_of("abcde") != std::string::npos)
            errors.push_back("initial.blocks must be a nonempty subset of 'abcde'");
        if (in.kind == InitialSpec::Kind::Coefficients && cfg.kmax >= 1 && cfg.kmax <= 8 &&
            in.coefficients.size() != Layout::get(cfg.kmax).total)
            errors.push_back("initial.coefficients has " + std::to_string(in.coefficients.size()) +
                             " entries, the layout needs " + std::to_string(Layout::get(cfg.kmax).total));
    }
    {
        Section s(section("diagnostics"), "diagnostics", errors);
        auto& d = cfg.diagnostics;
        if (auto raw = s.raw("admissibility", false)) {
            try {
                d.mode = admissibility_mode_from_string(*raw);
            } catch (const std::exception&) {
                s.bad("admissibility", "strict or relaxed", *raw);
            }
        }
        s.real("C0", d.C0);
        s.real("ell_star", d.ell_star);
        s.real("C4_bdg", d.C4_bdg);
        s.integer("verify_ensemble", d.verify_ensemble);
        s.list("translation_lags", d.translation_lags, [](const std::string& w, int& x) { return parse_int(w, x); });
        s.integer("weak_tests", d.weak_tests);
        s.integer("identity_samples", d.identity_samples);
        s.list("sweep_lambdas", d.sweep_lambdas, [](const std::string& w, double& x) { return parse_double(w, x); });
        s.integer("sweep_ensemble", d.sweep_ensemble);
        s.reject_unknown();
        if (!(d.C0 > 0) || !(d.ell_star > 0) || !(d.C4_bdg > 0))
            errors.push_back("diagnostics.C0, ell_star and C4_bdg must be positive");
        if (d.verify_ensemble < 2 || d.sweep_ensemble < 2)
            errors.push_back("diagnostics ensembles need at least 2 members");
        if (d.translation_lags.size() < 2) errors.push_back("diagnostics.translation_lags needs two or more lags");
        for (int l : d.translation_lags)
            if (l < 1) errors.push_back("diagnostics.translation_lags must be positive");
        if (d.weak_tests < 1 || d.identity_samples < 1)
            errors.push_back("diagnostics.weak_tests and identity_samples must be positive");
        for (double l : d.sweep_lambdas)
            if (!(l > 0)) errors.push_back("diagnostics.sweep_lambdas must be positive");
    }
    {
        Section s(section("output"), "output", errors);
        s.text("dir", cfg.output_dir);
        s.reject_unknown();
        if (cfg.output_dir.empty()) errors.push_back("output.dir must not be empty");
    }

    // Noise checks only make sense once the member lists parsed.
    try {
        NoiseModel model = cfg.noise_model();
        if (model.bandwidth() > 8) errors.push_back("noise wavevectors must satisfy |k|_inf <= 8");
        auto rep = validate_assumptions(model);
        for (auto& f : rep.failures) errors.push_back("noise: " + f);
    } catch (const std::exception& e) {
        errors.push_back(std::string("noise: ") + e.what());
    }

    if (!errors.empty()) throw ConfigError(std::move(errors));
    return cfg;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot read config file '" + path + "'"});
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize(const ExperimentConfig& cfg)
{
    std::ostringstream os;
    const auto& p = cfg.physics;
    os << "[physics]\n"
       << "nu = " << num(p.nu) << "\nlambda1 = " << num(p.lambda1) << "\nlambda2 = " << num(p.lambda2)
       << "\nlambda = " << num(p.lambda) << "\ntau = " << num(p.tau) << "\nchi0 = " << num(p.chi0)
       << "\nsigma = " << num(p.sigma) << "\nmu0 = " << num(p.mu0) << "\nalpha = " << num(p.alpha) << "\n\n";
    os << "[basis]\nkmax = " << cfg.kmax << "\n\n";
    os << "[noise]\n";
    for (int c = 0; c < 4; ++c) os << kNoiseKeys[c] << " = " << format_members(cfg.noise[c]) << "\n";
    const auto& r = cfg.run;
    os << "\n[run]\n"
       << "T = " << num(r.T) << "\ndt = " << num(r.dt)
       << "\nstopping_radius = " << (r.stopping_radius ? num(*r.stopping_radius) : std::string("default"))
       << "\nscheme = " << to_string(r.scheme) << "\nensemble_size = " << r.ensemble_size << "\nseed = " << r.seed
       << "\nsnapshot_stride = " << r.snapshot_stride << "\nsubsteps = " << r.substeps
       << "\npath = " << to_string(r.path) << "\nrecord_ledger = " << (r.record_ledger ? "true" : "false")
       << "\ncheck_constraints = " << (r.check_constraints ? "true" : "false") << "\n\n";
    const auto& in = cfg.initial;
    os << "[initial]\nkind = " << kind_name(in.kind) << "\nenergy = " << num(in.energy) << "\nseed = " << in.seed
       << "\nblocks = " << in.blocks << "\ncoefficients = " << join(in.coefficients) << "\nh = " << num(in.h[0])
       << " " << num(in.h[1]) << " " << num(in.h[2]) << "\n\n";
    const auto& d = cfg.diagnostics;
    os << "[diagnostics]\nadmissibility = " << to_string(d.mode) << "\nC0 = " << num(d.C0)
       << "\nell_star = " << num(d.ell_star) << "\nC4_bdg = " << num(d.C4_bdg)
       << "\nverify_ensemble = " << d.verify_ensemble << "\ntranslation_lags = " << join(d.translation_lags)
       << "\nweak_tests = " << d.weak_tests << "\nidentity_samples = " << d.identity_samples
       << "\nsweep_lambdas = " << join(d.sweep_lambdas) << "\nsweep_ensemble = " << d.sweep_ensemble << "\n\n";
    os << "[output]\ndir = " << cfg.output_dir << "\n";
    return os.str();
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h)
{
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::uint64_t config_hash(const ExperimentConfig& cfg) { return fnv1a(serialize(cfg)); }

std::uint64_t layout_digest(int kmax)
{
    const Layout& L = Layout::get(kmax);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const Basis* b : L.basis) {
        std::uint64_t d = b->digest();
        h = fnv1a(std::string_view(reinterpret_cast<const char*>(&d), sizeof d), h);
    }
    return h;
}

GalerkinState make_initial(const ExperimentConfig& cfg)
{
    const auto& in = cfg.initial;
    GalerkinState s(cfg.kmax);
    switch (in.kind) {
    case InitialSpec::Kind::Zero: break;
    case InitialSpec::Kind::Coefficients:
        if (in.coefficients.size() != s.y.size()) throw std::invalid_argument("initial coefficient count mismatch");
        s.y = in.coefficients;
        break;
    case InitialSpec::Kind::Stationary: s = stationary_state(cfg.kmax, in.h, cfg.physics); break;
    case InitialSpec::Kind::Random: {
        RngStream rng(in.seed, 0);
        for (char b : in.blocks)
            for (double& v : s.block(static_cast<Block>(b - 'a'))) v = rng.normal();
        double e = energy_total(s, cfg.physics.mu0);
        if (e > 0)
            for (double& v : s.y) v *= std::sqrt(in.energy / e);
        break;
    }
    }
    return s;
}

}  // namespace ferro
