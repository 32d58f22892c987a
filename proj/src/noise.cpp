#include "ferro/noise.hpp"

#include "ferro/basis.hpp"
#include "ferro/operators.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ferro {

std::string_view to_string(Channel c)
{
    switch (c) {
    case Channel::Velocity: return "velocity";
    case Channel::Rotation: return "rotation";
    case Channel::Magnetization: return "magnetization";
    case Channel::Field: return "field";
    }
    return "?";
}

Channel channel_from_string(std::string_view s)
{
    for (Channel c : kChannels)
        if (to_string(c) == s) return c;
    throw std::invalid_argument("unknown noise channel '" + std::string(s) + "'");
}

NoiseModel::NoiseModel(std::array<std::vector<NoiseMember>, 4> members) : members_(std::move(members))
{
    for (Channel c : kChannels) {
        for (const NoiseMember& m : members_[int(c)]) {
            int kg = norm_inf(m.k);
            if (kg == 0 && m.wave == Wave::Sin) throw std::invalid_argument("sin member with k = 0 vanishes identically");
            bandwidth_ = std::max(bandwidth_, kg);
            SpectralField f(kg);
            if (m.wave == Wave::Cos)
                f.add_cos(m.k, m.amplitude);
            else
                f.add_sin(m.k, m.amplitude);
            fields_[int(c)].push_back(std::move(f));
        }
    }
}

std::size_t NoiseModel::total() const
{
    std::size_t n = 0;
    for (const auto& m : members_) n += m.size();
    return n;
}

const SpectralField& NoiseModel::field(Channel c, std::size_t k) const
{
    if (k >= count(c)) throw std::out_of_range("noise member index out of range");
    return fields_[int(c)][k];
}

Vec3 NoiseModel::value(Channel c, std::size_t k, const Vec3& x) const
{
    const NoiseMember& m = members_[int(c)].at(k);
    double ph = m.k[0] * x[0] + m.k[1] * x[1] + m.k[2] * x[2];
    double s = m.wave == Wave::Cos ? std::cos(ph) : std::sin(ph);
    return {m.amplitude[0] * s, m.amplitude[1] * s, m.amplitude[2] * s};
}

std::array<Vec3, 3> NoiseModel::jacobian(Channel c, std::size_t k, const Vec3& x) const
{
    const NoiseMember& m = members_[int(c)].at(k);
    double ph = m.k[0] * x[0] + m.k[1] * x[1] + m.k[2] * x[2];
    double ds = m.wave == Wave::Cos ? -std::sin(ph) : std::cos(ph);
    std::array<Vec3, 3> J{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) J[i][j] = m.amplitude[i] * m.k[j] * ds;
    return J;
}

Space target_space(Channel c)
{
    switch (c) {
    case Channel::Velocity: return Space::V;
    case Channel::Rotation: return Space::W;
    case Channel::Magnetization: return Space::V1;
    case Channel::Field: return Space::V2;
    }
    return Space::W;
}

SpectralField apply_noise(const NoiseModel& model, Channel c, const SpectralField& f, std::size_t k)
{
    SpectralField t = advect(model.field(c, k), f, f.kmax(), Path::Triad);
    return project_onto(t, target_space(c));
}

double hs_norm_sq(const NoiseModel& model, Channel c, const SpectralField& f)
{
    double s = 0;
    for (std::size_t k = 0; k < model.count(c); ++k) {
        const SpectralField& g = model.field(c, k);
        s += l2_norm_sq(advect(g, f, g.kmax() + f.kmax(), Path::Triad));
    }
    return s;
}

NoiseValidationReport validate_assumptions(const NoiseModel& model, int grid_size)
{
    if (grid_size < 2) throw std::invalid_argument("validation grid needs at least 2 points per axis");
    NoiseValidationReport r;
    const double h = 2.0 * std::numbers::pi / grid_size;
    std::array<double, 4> sum_sq{}, sum_div_sq{}, sum_w1{};
    std::array<double, 4> lipschitz{};

    for (Channel c : kChannels) {
        int ci = int(c);
        for (std::size_t k = 0; k < model.count(c); ++k) {
            const NoiseMember& m = model.members(c)[k];
            double a = std::sqrt(m.amplitude[0] * m.amplitude[0] + m.amplitude[1] * m.amplitude[1] +
                                 m.amplitude[2] * m.amplitude[2]);
            double kn = std::sqrt(double(norm_sq(m.k)));
            double adotk = m.amplitude[0] * m.k[0] + m.amplitude[1] * m.k[1] + m.amplitude[2] * m.k[2];
            // exact sup norms of a*cos(k.x), its gradient and its divergence
            double sup = a;
            double grad = a * kn;
            double div = std::abs(adotk);
            sum_sq[ci] += sup * sup;
            sum_div_sq[ci] += div * div;
            sum_w1[ci] += (sup + grad) * (sup + grad);
            lipschitz[ci] += 2.0 * sup * grad;
            r.divergence_defect[ci] = std::max(r.divergence_defect[ci], div);
        }
    }
    r.C5 = sum_sq[0] + sum_div_sq[0];
    r.C6 = sum_sq[1] + sum_div_sq[1];
    r.C7 = sum_w1[3];
    r.C8 = sum_sq[2];

    for (Channel c : kChannels) {
        int ci = int(c);
        double best = 2.0;
        Vec3 where{0, 0, 0};
        for (int i = 0; i < grid_size; ++i)
            for (int j = 0; j < grid_size; ++j)
                for (int l = 0; l < grid_size; ++l) {
                    Vec3 x{i * h, j * h, l * h};
                    Eigen::Matrix3d S = 2.0 * Eigen::Matrix3d::Identity();
                    for (std::size_t k = 0; k < model.count(c); ++k) {
                        Vec3 g = model.value(c, k, x);
                        Eigen::Vector3d v(g[0], g[1], g[2]);
                        S -= v * v.transpose();
                    }
                    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es;
                    es.computeDirect(S, Eigen::EigenvaluesOnly);
                    double e = es.eigenvalues()[0];
                    if (e < best) {
                        best = e;
                        where = x;
                    }
                }
        r.c[ci] = best;
        r.worst_point[ci] = where;
        r.certified_lower[ci] = best - lipschitz[ci] * h * std::sqrt(3.0) / 2.0;
        if (best <= 0.0) {
            r.pass = false;
            std::ostringstream os;
            os << to_string(c) << " noise violates ellipticity: min eigenvalue " << best << " at x = (" << where[0]
               << ", " << where[1] << ", " << where[2] << ")";
            r.failures.push_back(os.str());
        }
    }
    for (Channel c : {Channel::Magnetization, Channel::Field}) {
        if (r.divergence_defect[int(c)] > 0.0) {
            r.pass = false;
            r.failures.push_back(std::string(to_string(c)) + " noise members must be divergence-free");
        }
    }
    return r;
}

}  // namespace ferro
