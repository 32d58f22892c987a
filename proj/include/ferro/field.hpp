#pragma once

#include "ferro/fft.hpp"

#include <algorithm>
#include <array>
#include <complex>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace ferro {

using IVec3 = std::array<int, 3>;
using Vec3 = std::array<double, 3>;
using CVec3 = std::array<cplx, 3>;

/// Volume of the periodic box [0, 2pi)^3.
inline constexpr double kVolume = 8.0 * std::numbers::pi * std::numbers::pi * std::numbers::pi;

/// V: div-free, mean-zero. W: unconstrained (rotation / H^1_0 analogue).
/// V1: unconstrained, split as V2 + Grad. V2: div-free with constants. Grad: pure gradients.
enum class Space { V, W, V1, V2, Grad };

std::string_view to_string(Space s);
Space space_from_string(std::string_view name);

inline int norm_sq(const IVec3& k) { return k[0] * k[0] + k[1] * k[1] + k[2] * k[2]; }
inline int norm_inf(const IVec3& k)
{
    int m = 0;
    for (int c : k) m = std::max(m, c < 0 ? -c : c);
    return m;
}

/// Scalar Fourier coefficients on the cube |k|_inf <= kmax.
class ScalarSpectral {
public:
    ScalarSpectral() = default;
    explicit ScalarSpectral(int kmax);

    int kmax() const { return kmax_; }
    bool contains(const IVec3& k) const { return norm_inf(k) <= kmax_; }
    std::size_t index(const IVec3& k) const;
    cplx& operator[](const IVec3& k) { return c_[index(k)]; }
    const cplx& operator[](const IVec3& k) const { return c_[index(k)]; }
    std::vector<cplx>& data() { return c_; }
    const std::vector<cplx>& data() const { return c_; }

private:
    int kmax_ = 0;
    std::vector<cplx> c_;
};

/// Complex Fourier coefficients of a real vector field on the torus:
/// f(x) = sum_k f_hat(k) exp(i k.x), stored for |k|_inf <= kmax.
class SpectralField {
public:
    SpectralField() = default;
    explicit SpectralField(int kmax, Space space = Space::W);

    int kmax() const { return kmax_; }
    int side() const { return 2 * kmax_ + 1; }
    Space space() const { return space_; }
    void set_space(Space s) { space_ = s; }

    bool contains(const IVec3& k) const { return norm_inf(k) <= kmax_; }
    std::size_t index(const IVec3& k) const
    {
        int s = side();
        return (static_cast<std::size_t>(k[0] + kmax_) * s + (k[1] + kmax_)) * s + (k[2] + kmax_);
    }
    IVec3 wavevector(std::size_t idx) const;
    std::size_t modes() const { return c_.size(); }

    CVec3& operator[](const IVec3& k) { return c_[index(k)]; }
    const CVec3& operator[](const IVec3& k) const { return c_[index(k)]; }
    std::vector<CVec3>& data() { return c_; }
    const std::vector<CVec3>& data() const { return c_; }

    /// Adds a*cos(k.x) (or a*sin(k.x)); keeps Hermitian symmetry.
    void add_cos(const IVec3& k, const Vec3& a);
    void add_sin(const IVec3& k, const Vec3& a);

    /// Copy restricted/extended to a new bandwidth.
    SpectralField resized(int kmax) const;

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double s);

    /// Largest |f(-k) - conj f(k)|.
    double hermitian_defect() const;
    /// Largest violation of the constraints implied by space().
    double constraint_defect() const;

private:
    int kmax_ = 0;
    Space space_ = Space::W;
    std::vector<CVec3> c_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

void require_same_kmax(const SpectralField& a, const SpectralField& b);

/// L2 inner product over the box (includes the (2pi)^3 volume).
double inner(const SpectralField& a, const SpectralField& b);
double l2_norm_sq(const SpectralField& f);
double l2_norm_sq(const ScalarSpectral& f);
double max_abs_coeff(const SpectralField& f);

SpectralField curl(const SpectralField& f);
ScalarSpectral divergence(const SpectralField& f);
SpectralField gradient(const ScalarSpectral& phi);
/// -Delta f, componentwise.
SpectralField neg_laplacian(const SpectralField& f);
/// curl curl f = -Delta f + grad div f.
SpectralField curl_curl(const SpectralField& f);
/// grad div f.
SpectralField grad_div(const SpectralField& f);

struct DiffOps {
    SpectralField curl;
    ScalarSpectral div;
    double grad_norm_sq = 0;
    double l2_norm_sq = 0;
    double curl_norm_sq = 0;
    double div_norm_sq = 0;
};
DiffOps diff_ops(const SpectralField& f);

/// Projection onto V (divergence-free and mean-zero).
SpectralField leray_project(const SpectralField& f);

struct HelmholtzSplit {
    SpectralField solenoidal;  ///< divergence-free part, keeps k = 0
    SpectralField gradient;    ///< grad(potential)
    ScalarSpectral potential;  ///< Delta potential = div f, zero mean
};
HelmholtzSplit helmholtz_split(const SpectralField& f);

/// Samples of a vector field on an n^3 uniform grid x_j = 2 pi j / n.
struct PhysicalField {
    int n = 0;
    std::array<std::vector<double>, 3> v;
};

PhysicalField synthesize(const SpectralField& f, int n);
SpectralField analyze(const PhysicalField& samples, int kmax, Space space = Space::W);

/// Scatters per-mode values onto an n^3 buffer (zero elsewhere); aliasing is the caller's concern.
template <class F>
void scatter_modes(int kmax, int n, cplx* buf, F&& value)
{
    std::size_t pts = static_cast<std::size_t>(n) * n * n;
    for (std::size_t i = 0; i < pts; ++i) buf[i] = 0.0;
    for (int a = -kmax; a <= kmax; ++a) {
        int ia = (a % n + n) % n;
        for (int b = -kmax; b <= kmax; ++b) {
            int ib = (b % n + n) % n;
            for (int c = -kmax; c <= kmax; ++c) {
                int ic = (c % n + n) % n;
                buf[(static_cast<std::size_t>(ia) * n + ib) * n + ic] += value(IVec3{a, b, c});
            }
        }
    }
}

/// Reads modes |k|_inf <= kmax from a forward-transformed buffer, scaled by 1/n^3.
template <class F>
void gather_modes(int kmax, int n, const cplx* buf, F&& sink)
{
    double scale = 1.0 / (static_cast<double>(n) * n * n);
    for (int a = -kmax; a <= kmax; ++a) {
        int ia = (a % n + n) % n;
        for (int b = -kmax; b <= kmax; ++b) {
            int ib = (b % n + n) % n;
            for (int c = -kmax; c <= kmax; ++c) {
                int ic = (c % n + n) % n;
                sink(IVec3{a, b, c}, buf[(static_cast<std::size_t>(ia) * n + ib) * n + ic] * scale);
            }
        }
    }
}

}  // namespace ferro
