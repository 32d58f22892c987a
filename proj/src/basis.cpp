#include "ferro/basis.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace ferro {

namespace {

Vec3 normalized(const Vec3& v)
{
    double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    return {v[0] / n, v[1] / n, v[2] / n};
}

Vec3 cross3(const Vec3& a, const Vec3& b)
{
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

std::vector<IVec3> half_space(int kmax, bool with_zero)
{
    std::vector<IVec3> ks;
    if (with_zero) ks.push_back({0, 0, 0});
    for (int a = -kmax; a <= kmax; ++a)
        for (int b = -kmax; b <= kmax; ++b)
            for (int c = -kmax; c <= kmax; ++c)
                if (in_half_space({a, b, c})) ks.push_back({a, b, c});
    return ks;
}

void sort_modes(std::vector<ModeIndex>& m)
{
    std::stable_sort(m.begin(), m.end(), [](const ModeIndex& x, const ModeIndex& y) {
        return std::make_tuple(norm_sq(x.k), x.k, int(x.pol)) < std::make_tuple(norm_sq(y.k), y.k, int(y.pol));
    });
}

std::vector<ModeIndex> sublist(int kmax, Space s)
{
    std::vector<ModeIndex> m;
    switch (s) {
    case Space::V:
        for (auto& k : half_space(kmax, false)) {
            m.push_back({k, Pol::DivFree1});
            m.push_back({k, Pol::DivFree2});
        }
        break;
    case Space::V2:
        for (Pol p : {Pol::Full1, Pol::Full2, Pol::Full3}) m.push_back({{0, 0, 0}, p});
        for (auto& k : half_space(kmax, false)) {
            m.push_back({k, Pol::DivFree1});
            m.push_back({k, Pol::DivFree2});
        }
        break;
    case Space::W:
        for (auto& k : half_space(kmax, true))
            for (Pol p : {Pol::Full1, Pol::Full2, Pol::Full3}) m.push_back({k, p});
        break;
    case Space::Grad:
        for (auto& k : half_space(kmax, false)) m.push_back({k, Pol::Gradient});
        break;
    case Space::V1:
        throw std::logic_error("V1 is a concatenation");
    }
    sort_modes(m);
    return m;
}

}  // namespace

std::string_view to_string(Pol p)
{
    switch (p) {
    case Pol::DivFree1: return "div-free-1";
    case Pol::DivFree2: return "div-free-2";
    case Pol::Gradient: return "gradient";
    case Pol::Full1: return "full-1";
    case Pol::Full2: return "full-2";
    case Pol::Full3: return "full-3";
    }
    return "?";
}

bool in_half_space(const IVec3& k)
{
    if (k[0] != 0) return k[0] > 0;
    if (k[1] != 0) return k[1] > 0;
    return k[2] > 0;
}

Vec3 polarization(const IVec3& k, Pol pol)
{
    switch (pol) {
    case Pol::Full1: return {1, 0, 0};
    case Pol::Full2: return {0, 1, 0};
    case Pol::Full3: return {0, 0, 1};
    default: break;
    }
    if (norm_sq(k) == 0) {
        if (pol == Pol::Gradient) throw std::invalid_argument("gradient polarization needs k != 0");
        return pol == Pol::DivFree1 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    }
    Vec3 kh = normalized({double(k[0]), double(k[1]), double(k[2])});
    if (pol == Pol::Gradient) return kh;
    Vec3 e1 = (k[0] == 0 && k[1] == 0) ? cross3(kh, {1, 0, 0}) : cross3({0, 0, 1}, kh);
    e1 = normalized(e1);
    if (pol == Pol::DivFree1) return e1;
    return normalized(cross3(kh, e1));
}

std::vector<ModeIndex> build_basis(int kmax, Space space)
{
    if (kmax < 1) throw std::invalid_argument("k_max must be at least 1");
    if (space == Space::V1) {
        auto m = sublist(kmax, Space::V2);
        auto g = sublist(kmax, Space::Grad);
        m.insert(m.end(), g.begin(), g.end());
        return m;
    }
    return sublist(kmax, space);
}

Basis::Basis(int kmax, Space space) : kmax_(kmax), space_(space), modes_(build_basis(kmax, space))
{
    const double s0 = 1.0 / std::sqrt(kVolume);
    const double s1 = std::sqrt(2.0 / kVolume);
    for (std::size_t i = 0; i < modes_.size(); ++i) {
        const auto& m = modes_[i];
        Vec3 e = polarization(m.k, m.pol);
        if (norm_sq(m.k) == 0) {
            funcs_.push_back({m.k, e, false, s0, i});
        } else {
            funcs_.push_back({m.k, e, false, s1, i});
            funcs_.push_back({m.k, e, true, s1, i});
        }
    }
    for (auto& f : funcs_) k2_.push_back(norm_sq(f.k));
}

void Basis::project_into(const SpectralField& f, std::span<double> out) const
{
    if (out.size() != funcs_.size()) throw std::invalid_argument("coefficient length mismatch");
    for (std::size_t i = 0; i < funcs_.size(); ++i) {
        const auto& b = funcs_[i];
        if (!f.contains(b.k)) {
            out[i] = 0;
            continue;
        }
        const CVec3& v = f[b.k];
        cplx d = v[0] * b.e[0] + v[1] * b.e[1] + v[2] * b.e[2];
        out[i] = kVolume * b.scale * (b.sine ? -d.imag() : d.real());
    }
}

std::vector<double> Basis::project(const SpectralField& f) const
{
    std::vector<double> out(funcs_.size());
    project_into(f, out);
    return out;
}

void Basis::accumulate(std::span<const double> coeffs, double scale, SpectralField& out) const
{
    if (coeffs.size() != funcs_.size()) throw std::invalid_argument("coefficient length mismatch");
    for (std::size_t i = 0; i < funcs_.size(); ++i) {
        const auto& b = funcs_[i];
        double c = scale * coeffs[i] * b.scale;
        if (c == 0.0) continue;
        Vec3 a{c * b.e[0], c * b.e[1], c * b.e[2]};
        if (b.sine)
            out.add_sin(b.k, a);
        else
            out.add_cos(b.k, a);
    }
}

SpectralField Basis::synthesize(std::span<const double> coeffs) const
{
    SpectralField out(kmax_, space_);
    accumulate(coeffs, 1.0, out);
    return out;
}

std::uint64_t Basis::digest() const
{
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](std::int64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= static_cast<std::uint64_t>(v >> (8 * i)) & 0xffu;
            h *= 1099511628211ull;
        }
    };
    for (const auto& m : modes_) {
        for (int c : m.k) mix(c);
        mix(int(m.pol));
    }
    return h;
}

const Basis& basis_for(int kmax, Space space)
{
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<Basis>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(kmax, int(space));
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, std::make_unique<Basis>(kmax, space)).first;
    return *it->second;
}

SpectralField project_onto(const SpectralField& f, Space space)
{
    const Basis& b = basis_for(f.kmax(), space);
    return b.synthesize(b.project(f));
}

double dual_weight(Space space, int k2)
{
    switch (space) {
    case Space::V:
        if (k2 == 0) throw std::invalid_argument("V has no k = 0 modes");
        return k2;
    case Space::W:
    case Space::V1:
    case Space::V2:
        return 1.0 + k2;
    case Space::Grad:
        break;
    }
    throw std::invalid_argument("no dual weight declared for space " + std::string(to_string(space)));
}

double dual_norm(const DualCoefficients& l)
{
    const Basis& b = basis_for(l.kmax, l.space);
    if (l.values.size() != b.dim()) throw std::invalid_argument("dual coefficient length mismatch");
    double s = 0;
    for (std::size_t i = 0; i < b.dim(); ++i) s += l.values[i] * l.values[i] / dual_weight(l.space, int(b.wavenumbers_sq()[i]));
    return std::sqrt(s);
}

double primal_norm(const Basis& b, std::span<const double> coeffs)
{
    double s = 0;
    for (std::size_t i = 0; i < b.dim(); ++i) s += dual_weight(b.space(), int(b.wavenumbers_sq()[i])) * coeffs[i] * coeffs[i];
    return std::sqrt(s);
}

}  // namespace ferro
