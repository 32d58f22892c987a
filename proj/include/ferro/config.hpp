#pragma once

#include "ferro/diagnostics.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace ferro {

struct InitialSpec {
    enum class Kind { Zero, Random, Coefficients, Stationary };
    Kind kind = Kind::Random;
    double energy = 1.0;          ///< target E_tot for random data
    std::uint64_t seed = 1;
    std::string blocks = "abcde";  ///< blocks receiving random content
    std::vector<double> coefficients;
    Vec3 h{0, 0, 1};  ///< constant H for the stationary state
};

struct DiagnosticSpec {
    AdmissibilityMode mode = AdmissibilityMode::Relaxed;
    double C0 = 1.0;
    double ell_star = 0.5;
    double C4_bdg = 2.0;
    int verify_ensemble = 128;
    std::vector<int> translation_lags{1, 2, 4, 8};
    int weak_tests = 10;
    int identity_samples = 50;
    std::vector<double> sweep_lambdas{0.25, 0.5, 1.0, 1.5, 2.5};
    int sweep_ensemble = 32;
};

struct ExperimentConfig {
    PhysicalParams physics;
    int kmax = 1;
    std::array<std::vector<NoiseMember>, 4> noise;
    RunConfig run;
    InitialSpec initial;
    DiagnosticSpec diagnostics;
    std::string output_dir = "out";

    NoiseModel noise_model() const { return NoiseModel(noise); }
    AdmissibilityParams admissibility(const NoiseValidationReport& r) const;
};

/// Every problem found while loading a config.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> v);
    const std::vector<std::string>& violations() const { return violations_; }

private:
    std::vector<std::string> violations_;
};

/// Strict sectioned key = value text. Physics keys are mandatory; other sections have defaults.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Canonical text: fixed section and key order, shortest round-trip numbers.
std::string serialize(const ExperimentConfig& cfg);
std::uint64_t config_hash(const ExperimentConfig& cfg);

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

/// Digest over the bases of every block, in layout order.
std::uint64_t layout_digest(int kmax);

GalerkinState make_initial(const ExperimentConfig& cfg);

}  // namespace ferro
