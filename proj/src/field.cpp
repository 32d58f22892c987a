#include "ferro/field.hpp"

#include <cmath>
#include <stdexcept>

namespace ferro {

namespace {
const cplx I(0.0, 1.0);

inline cplx dot(const IVec3& k, const CVec3& v)
{
    return double(k[0]) * v[0] + double(k[1]) * v[1] + double(k[2]) * v[2];
}

inline CVec3 cross(const IVec3& k, const CVec3& v)
{
    return {double(k[1]) * v[2] - double(k[2]) * v[1],
            double(k[2]) * v[0] - double(k[0]) * v[2],
            double(k[0]) * v[1] - double(k[1]) * v[0]};
}

template <class F>
void for_each_k(int kmax, F&& f)
{
    for (int a = -kmax; a <= kmax; ++a)
        for (int b = -kmax; b <= kmax; ++b)
            for (int c = -kmax; c <= kmax; ++c) f(IVec3{a, b, c});
}
}  // namespace

std::string_view to_string(Space s)
{
    switch (s) {
    case Space::V: return "V";
    case Space::W: return "W";
    case Space::V1: return "V1";
    case Space::V2: return "V2";
    case Space::Grad: return "Grad";
    }
    return "?";
}

Space space_from_string(std::string_view name)
{
    if (name == "V") return Space::V;
    if (name == "W") return Space::W;
    if (name == "V1") return Space::V1;
    if (name == "V2") return Space::V2;
    if (name == "Grad") return Space::Grad;
    throw std::invalid_argument("unknown space tag '" + std::string(name) + "'");
}

ScalarSpectral::ScalarSpectral(int kmax) : kmax_(kmax)
{
    if (kmax < 0) throw std::invalid_argument("negative k_max");
    std::size_t s = 2 * kmax + 1;
    c_.assign(s * s * s, 0.0);
}

std::size_t ScalarSpectral::index(const IVec3& k) const
{
    int s = 2 * kmax_ + 1;
    return (static_cast<std::size_t>(k[0] + kmax_) * s + (k[1] + kmax_)) * s + (k[2] + kmax_);
}

SpectralField::SpectralField(int kmax, Space space) : kmax_(kmax), space_(space)
{
    if (kmax < 0) throw std::invalid_argument("negative k_max");
    std::size_t s = 2 * kmax + 1;
    c_.assign(s * s * s, CVec3{0.0, 0.0, 0.0});
}

IVec3 SpectralField::wavevector(std::size_t idx) const
{
    int s = side();
    int c = static_cast<int>(idx % s);
    int b = static_cast<int>((idx / s) % s);
    int a = static_cast<int>(idx / (static_cast<std::size_t>(s) * s));
    return {a - kmax_, b - kmax_, c - kmax_};
}

void SpectralField::add_cos(const IVec3& k, const Vec3& a)
{
    if (!contains(k)) throw std::invalid_argument("wavevector outside the field bandwidth");
    IVec3 m{-k[0], -k[1], -k[2]};
    if (k == m) {
        for (int i = 0; i < 3; ++i) (*this)[k][i] += a[i];
        return;
    }
    for (int i = 0; i < 3; ++i) {
        (*this)[k][i] += 0.5 * a[i];
        (*this)[m][i] += 0.5 * a[i];
    }
}

void SpectralField::add_sin(const IVec3& k, const Vec3& a)
{
    if (!contains(k)) throw std::invalid_argument("wavevector outside the field bandwidth");
    IVec3 m{-k[0], -k[1], -k[2]};
    if (k == m) return;
    for (int i = 0; i < 3; ++i) {
        (*this)[k][i] += -0.5 * I * a[i];
        (*this)[m][i] += 0.5 * I * a[i];
    }
}

SpectralField SpectralField::resized(int kmax) const
{
    SpectralField out(kmax, space_);
    int m = std::min(kmax, kmax_);
    for_each_k(m, [&](const IVec3& k) { out[k] = (*this)[k]; });
    return out;
}

SpectralField& SpectralField::operator+=(const SpectralField& o)
{
    require_same_kmax(*this, o);
    for (std::size_t i = 0; i < c_.size(); ++i)
        for (int j = 0; j < 3; ++j) c_[i][j] += o.c_[i][j];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o)
{
    require_same_kmax(*this, o);
    for (std::size_t i = 0; i < c_.size(); ++i)
        for (int j = 0; j < 3; ++j) c_[i][j] -= o.c_[i][j];
    return *this;
}

SpectralField& SpectralField::operator*=(double s)
{
    for (auto& v : c_)
        for (auto& x : v) x *= s;
    return *this;
}

double SpectralField::hermitian_defect() const
{
    double worst = 0;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        IVec3 k = wavevector(i);
        const CVec3& m = (*this)[IVec3{-k[0], -k[1], -k[2]}];
        for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(m[j] - std::conj(c_[i][j])));
    }
    return worst;
}

double SpectralField::constraint_defect() const
{
    double worst = 0;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        IVec3 k = wavevector(i);
        const CVec3& v = c_[i];
        bool zero = norm_sq(k) == 0;
        switch (space_) {
        case Space::V:
            if (zero)
                for (auto x : v) worst = std::max(worst, std::abs(x));
            else
                worst = std::max(worst, std::abs(dot(k, v)) / std::sqrt(double(norm_sq(k))));
            break;
        case Space::V2:
            if (!zero) worst = std::max(worst, std::abs(dot(k, v)) / std::sqrt(double(norm_sq(k))));
            break;
        case Space::Grad:
            if (zero) {
                for (auto x : v) worst = std::max(worst, std::abs(x));
            } else {
                CVec3 c = cross(k, v);
                double n = 0;
                for (auto x : c) n += std::norm(x);
                worst = std::max(worst, std::sqrt(n / norm_sq(k)));
            }
            break;
        case Space::W:
        case Space::V1:
            break;
        }
    }
    return worst;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

void require_same_kmax(const SpectralField& a, const SpectralField& b)
{
    if (a.kmax() != b.kmax()) throw std::invalid_argument("mismatched k_max");
}

double inner(const SpectralField& a, const SpectralField& b)
{
    require_same_kmax(a, b);
    double s = 0;
    const auto& x = a.data();
    const auto& y = b.data();
    for (std::size_t i = 0; i < x.size(); ++i)
        for (int j = 0; j < 3; ++j) s += (x[i][j] * std::conj(y[i][j])).real();
    return kVolume * s;
}

double l2_norm_sq(const SpectralField& f) { return inner(f, f); }

double l2_norm_sq(const ScalarSpectral& f)
{
    double s = 0;
    for (const auto& x : f.data()) s += std::norm(x);
    return kVolume * s;
}

double max_abs_coeff(const SpectralField& f)
{
    double m = 0;
    for (const auto& v : f.data())
        for (auto x : v) m = std::max(m, std::abs(x));
    return m;
}

SpectralField curl(const SpectralField& f)
{
    SpectralField out(f.kmax(), Space::V2);
    for (std::size_t i = 0; i < f.modes(); ++i) {
        CVec3 c = cross(f.wavevector(i), f.data()[i]);
        for (int j = 0; j < 3; ++j) out.data()[i][j] = I * c[j];
    }
    return out;
}

ScalarSpectral divergence(const SpectralField& f)
{
    ScalarSpectral out(f.kmax());
    for (std::size_t i = 0; i < f.modes(); ++i) out.data()[i] = I * dot(f.wavevector(i), f.data()[i]);
    return out;
}

SpectralField gradient(const ScalarSpectral& phi)
{
    SpectralField out(phi.kmax(), Space::Grad);
    for (std::size_t i = 0; i < out.modes(); ++i) {
        IVec3 k = out.wavevector(i);
        for (int j = 0; j < 3; ++j) out.data()[i][j] = I * double(k[j]) * phi.data()[i];
    }
    return out;
}

SpectralField neg_laplacian(const SpectralField& f)
{
    SpectralField out(f.kmax(), f.space());
    for (std::size_t i = 0; i < f.modes(); ++i) {
        double k2 = norm_sq(f.wavevector(i));
        for (int j = 0; j < 3; ++j) out.data()[i][j] = k2 * f.data()[i][j];
    }
    return out;
}

SpectralField grad_div(const SpectralField& f)
{
    SpectralField out(f.kmax(), Space::Grad);
    for (std::size_t i = 0; i < f.modes(); ++i) {
        IVec3 k = f.wavevector(i);
        cplx d = dot(k, f.data()[i]);
        for (int j = 0; j < 3; ++j) out.data()[i][j] = -double(k[j]) * d;
    }
    return out;
}

SpectralField curl_curl(const SpectralField& f)
{
    SpectralField out(f.kmax(), Space::V2);
    for (std::size_t i = 0; i < f.modes(); ++i) {
        IVec3 k = f.wavevector(i);
        double k2 = norm_sq(k);
        cplx d = dot(k, f.data()[i]);
        for (int j = 0; j < 3; ++j) out.data()[i][j] = k2 * f.data()[i][j] - double(k[j]) * d;
    }
    return out;
}

DiffOps diff_ops(const SpectralField& f)
{
    DiffOps r;
    r.curl = curl(f);
    r.div = divergence(f);
    r.l2_norm_sq = l2_norm_sq(f);
    r.curl_norm_sq = l2_norm_sq(r.curl);
    r.div_norm_sq = l2_norm_sq(r.div);
    double g = 0;
    for (std::size_t i = 0; i < f.modes(); ++i) {
        double k2 = norm_sq(f.wavevector(i));
        for (auto x : f.data()[i]) g += k2 * std::norm(x);
    }
    r.grad_norm_sq = kVolume * g;
    return r;
}

SpectralField leray_project(const SpectralField& f)
{
    SpectralField out(f.kmax(), Space::V);
    for (std::size_t i = 0; i < f.modes(); ++i) {
        IVec3 k = f.wavevector(i);
        int k2 = norm_sq(k);
        if (k2 == 0) continue;
        cplx d = dot(k, f.data()[i]);
        for (int j = 0; j < 3; ++j) out.data()[i][j] = f.data()[i][j] - double(k[j]) * d / double(k2);
    }
    return out;
}

HelmholtzSplit helmholtz_split(const SpectralField& f)
{
    HelmholtzSplit h{SpectralField(f.kmax(), Space::V2), SpectralField(f.kmax(), Space::Grad),
                     ScalarSpectral(f.kmax())};
    for (std::size_t i = 0; i < f.modes(); ++i) {
        IVec3 k = f.wavevector(i);
        int k2 = norm_sq(k);
        const CVec3& v = f.data()[i];
        if (k2 == 0) {
            h.solenoidal.data()[i] = v;
            continue;
        }
        cplx d = dot(k, v);
        cplx phi = -I * d / double(k2);
        h.potential.data()[i] = phi;
        for (int j = 0; j < 3; ++j) {
            cplx g = I * double(k[j]) * phi;
            h.gradient.data()[i][j] = g;
            h.solenoidal.data()[i][j] = v[j] - double(k[j]) * d / double(k2);
        }
    }
    return h;
}

PhysicalField synthesize(const SpectralField& f, int n)
{
    if (n < 2 * f.kmax() + 1) throw std::invalid_argument("grid too small for the field bandwidth");
    const FftPlan& plan = FftPlan::get(n);
    PhysicalField out;
    out.n = n;
    std::vector<cplx> buf(plan.points());
    for (int c = 0; c < 3; ++c) {
        scatter_modes(f.kmax(), n, buf.data(), [&](const IVec3& k) { return f[k][c]; });
        plan.backward(buf.data());
        out.v[c].resize(buf.size());
        for (std::size_t i = 0; i < buf.size(); ++i) out.v[c][i] = buf[i].real();
    }
    return out;
}

SpectralField analyze(const PhysicalField& samples, int kmax, Space space)
{
    int n = samples.n;
    if (n < 2 * kmax + 1) throw std::invalid_argument("grid too small for the requested bandwidth");
    const FftPlan& plan = FftPlan::get(n);
    SpectralField out(kmax, space);
    std::vector<cplx> buf(plan.points());
    for (int c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = samples.v[c][i];
        plan.forward(buf.data());
        gather_modes(kmax, n, buf.data(), [&](const IVec3& k, cplx v) { out[k][c] = v; });
    }
    return out;
}

}  // namespace ferro
