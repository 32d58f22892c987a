#pragma once

#include "ferro/field.hpp"

#include <array>
#include <string>
#include <vector>

namespace ferro {

enum class Channel { Velocity = 0, Rotation = 1, Magnetization = 2, Field = 3 };
inline constexpr std::array<Channel, 4> kChannels{Channel::Velocity, Channel::Rotation, Channel::Magnetization,
                                                  Channel::Field};

std::string_view to_string(Channel c);
Channel channel_from_string(std::string_view s);

enum class Wave { Cos, Sin };

/// g(x) = amplitude * cos(k.x) or amplitude * sin(k.x).
struct NoiseMember {
    IVec3 k{0, 0, 0};
    Vec3 amplitude{0, 0, 0};
    Wave wave = Wave::Cos;
};

/// Truncated transport-noise families, one per channel. Immutable after construction.
class NoiseModel {
public:
    NoiseModel() = default;
    explicit NoiseModel(std::array<std::vector<NoiseMember>, 4> members);

    const std::vector<NoiseMember>& members(Channel c) const { return members_[int(c)]; }
    std::size_t count(Channel c) const { return members_[int(c)].size(); }
    std::size_t total() const;
    bool empty() const { return total() == 0; }

    const SpectralField& field(Channel c, std::size_t k) const;
    /// Largest |k|_inf over all members.
    int bandwidth() const { return bandwidth_; }

    /// Evaluate member k of channel c and its Jacobian dg_i/dx_j at x.
    Vec3 value(Channel c, std::size_t k, const Vec3& x) const;
    std::array<Vec3, 3> jacobian(Channel c, std::size_t k, const Vec3& x) const;

private:
    std::array<std::vector<NoiseMember>, 4> members_;
    std::array<std::vector<SpectralField>, 4> fields_;
    int bandwidth_ = 0;
};

/// Galerkin space receiving each channel's transport term.
Space target_space(Channel c);

/// (g_k.grad) f projected onto the channel's Galerkin space at f's bandwidth.
SpectralField apply_noise(const NoiseModel& model, Channel c, const SpectralField& f, std::size_t k);

/// sum_k |(g_k.grad) f|^2, unprojected (full product bandwidth).
double hs_norm_sq(const NoiseModel& model, Channel c, const SpectralField& f);

struct NoiseValidationReport {
    double C5 = 0, C6 = 0, C7 = 0, C8 = 0;
    /// Ellipticity margins min_x eig_min(2I - sum g g^T), by channel.
    std::array<double, 4> c{2, 2, 2, 2};
    std::array<Vec3, 4> worst_point{};
    /// Grid minimum minus a Lipschitz bound over half a grid cell; informational.
    std::array<double, 4> certified_lower{2, 2, 2, 2};
    std::array<double, 4> divergence_defect{0, 0, 0, 0};
    bool pass = true;
    std::vector<std::string> failures;

    double c_velocity() const { return c[0]; }
    double c_rotation() const { return c[1]; }
    double c_magnetization() const { return c[2]; }
    double c_field() const { return c[3]; }
};

NoiseValidationReport validate_assumptions(const NoiseModel& model, int grid_size = 16);

}  // namespace ferro
