#pragma once

#include "ferro/galerkin.hpp"
#include "ferro/rng.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>

namespace testing {

using namespace ferro;

inline constexpr double kPi3 = std::numbers::pi * std::numbers::pi * std::numbers::pi;

inline SpectralField cos_mode(int kmax, IVec3 k, Vec3 a)
{
    SpectralField f(kmax);
    f.add_cos(k, a);
    return f;
}

inline SpectralField sin_mode(int kmax, IVec3 k, Vec3 a)
{
    SpectralField f(kmax);
    f.add_sin(k, a);
    return f;
}

inline SpectralField constant(int kmax, Vec3 a)
{
    SpectralField f(kmax);
    f[{0, 0, 0}] = {a[0], a[1], a[2]};
    return f;
}

inline double dot(std::span<const double> x, std::span<const double> y)
{
    return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

/// <functional, f> for a functional given by its basis pairings.
inline double apply(const DualCoefficients& l, const SpectralField& f)
{
    return dot(l.values, basis_for(l.kmax, l.space).project(f));
}

inline double max_diff(const SpectralField& a, const SpectralField& b) { return max_abs_coeff(a - b); }

inline double max_abs(std::span<const double> x)
{
    double m = 0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

/// Index of the first basis function of `space` with wavevector k and the given parity.
inline std::size_t function_index(int kmax, Space space, IVec3 k, bool sine = false)
{
    const auto& fs = basis_for(kmax, space).functions();
    for (std::size_t i = 0; i < fs.size(); ++i)
        if (fs[i].k == k && fs[i].sine == sine) return i;
    throw std::runtime_error("no such basis function");
}

inline GalerkinState random_state(int kmax, std::uint64_t seed, double scale = 1.0)
{
    GalerkinState s(kmax);
    RngStream rng(seed, 3);
    for (double& v : s.y) v = scale * rng.normal() / std::sqrt(double(s.y.size()));
    return s;
}

}  // namespace testing
