#include "ferro/galerkin.hpp"

#include "ferro/rng.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace ferro {

std::vector<std::string> PhysicalParams::violations() const
{
    std::vector<std::string> v;
    auto need = [&](double x, const char* name, const char* what) {
        if (!(x > 0.0) || !std::isfinite(x)) {
            std::ostringstream os;
            os << name << " = " << x << " must be positive (" << what << ")";
            v.push_back(os.str());
        }
    };
    need(nu, "nu", "kinematic viscosity");
    need(lambda1, "lambda1", "spin viscosity");
    need(lambda2, "lambda2", "spin bulk viscosity");
    need(lambda, "lambda", "magnetization diffusion");
    need(tau, "tau", "relaxation time");
    need(chi0, "chi0", "magnetic susceptibility");
    need(sigma, "sigma", "electrical conductivity");
    need(mu0, "mu0", "magnetic permeability");
    need(alpha, "alpha", "vortex viscosity");
    return v;
}

void PhysicalParams::validate() const
{
    auto v = violations();
    if (v.empty()) return;
    std::string msg;
    for (auto& s : v) msg += s + "; ";
    throw std::invalid_argument(msg);
}

const Layout& Layout::get(int kmax)
{
    static std::mutex mu;
    static std::map<int, std::unique_ptr<Layout>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(kmax);
    if (it != cache.end()) return *it->second;
    auto L = std::make_unique<Layout>();
    L->kmax = kmax;
    const Space spaces[5] = {Space::V, Space::W, Space::V2, Space::Grad, Space::V2};
    std::size_t off = 0;
    for (int i = 0; i < 5; ++i) {
        L->basis[i] = &basis_for(kmax, spaces[i]);
        L->offset[i] = off;
        L->size[i] = L->basis[i]->dim();
        off += L->size[i];
    }
    L->total = off;
    return *cache.emplace(kmax, std::move(L)).first->second;
}

GalerkinState::GalerkinState(int k) : kmax(k), y(Layout::get(k).total, 0.0) {}

std::span<double> GalerkinState::block(Block b)
{
    const Layout& L = layout();
    return std::span<double>(y).subspan(L.offset[int(b)], L.size[int(b)]);
}

std::span<const double> GalerkinState::block(Block b) const
{
    const Layout& L = layout();
    return std::span<const double>(y).subspan(L.offset[int(b)], L.size[int(b)]);
}

Fields reconstruct_fields(const GalerkinState& s, double mu0)
{
    const Layout& L = s.layout();
    if (s.y.size() != L.total) throw std::invalid_argument("state length does not match the basis layout");
    Fields f;
    f.u = L.basis[0]->synthesize(s.block(Block::A));
    f.w = L.basis[1]->synthesize(s.block(Block::B));
    SpectralField Mc = L.basis[2]->synthesize(s.block(Block::C));
    SpectralField Gd = L.basis[3]->synthesize(s.block(Block::D));
    SpectralField He = L.basis[4]->synthesize(s.block(Block::E));
    f.M = Mc + Gd;
    f.M.set_space(Space::V1);
    f.H = He - Gd;
    f.H.set_space(Space::V1);
    f.B = mu0 * (Mc + He);
    f.B.set_space(Space::V2);
    return f;
}

DriftFields drift_fields(const Fields& f, const PhysicalParams& p, Path path)
{
    const int K = f.u.kmax();
    DriftFields d;
    d.u = (-(p.nu + p.alpha)) * neg_laplacian(f.u) - advect(f.u, f.u, K, path) + p.mu0 * advect(f.M, f.H, K, path) +
          p.mu0 * cross(curl(f.H), f.H, K, path) + (2.0 * p.alpha) * curl(f.w);
    d.w = (-p.lambda1) * neg_laplacian(f.w) - advect(f.u, f.w, K, path) + (p.lambda1 + p.lambda2) * grad_div(f.w) +
          (2.0 * p.alpha) * (curl(f.u) - 2.0 * f.w) + p.mu0 * cross(f.M, f.H, K, path);
    d.M = cross(f.w, f.M, K, path) - advect(f.u, f.M, K, path) - (1.0 / p.tau) * (f.M - p.chi0 * f.H) -
          p.lambda * neg_laplacian(f.M);
    d.B = (-1.0 / p.sigma) * curl_curl(f.H) + curl(cross(f.u, f.B, K, path));
    return d;
}

DriftVector assemble_drift(const GalerkinState& s, const PhysicalParams& p, Path path)
{
    Fields f = reconstruct_fields(s, p.mu0);
    DriftFields d = drift_fields(f, p, path);
    const Layout& L = s.layout();
    DriftVector out(s.kmax);
    L.basis[0]->project_into(d.u, out.a());
    L.basis[1]->project_into(d.w, out.b());
    L.basis[2]->project_into(d.M, out.c());
    L.basis[3]->project_into(d.M, out.d());
    L.basis[4]->project_into(d.B, out.e());
    auto c = out.c();
    auto e = out.e();
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = e[i] / p.mu0 - c[i];
    for (double v : out.y)
        if (!std::isfinite(v)) throw std::runtime_error("non-finite drift");
    return out;
}

std::pair<Channel, std::size_t> column_channel(const NoiseModel& noise, std::size_t j)
{
    for (Channel c : kChannels) {
        if (j < noise.count(c)) return {c, j};
        j -= noise.count(c);
    }
    throw std::out_of_range("diffusion column out of range");
}

void assemble_diffusion_into(const GalerkinState& s, const NoiseModel& noise, double mu0,
                             std::vector<GalerkinState>& cols)
{
    const Layout& L = s.layout();
    const int K = s.kmax;
    cols.resize(noise.total());
    Fields f;
    bool have_fields = false;
    std::size_t j = 0;
    for (Channel ch : kChannels) {
        for (std::size_t k = 0; k < noise.count(ch); ++k, ++j) {
            GalerkinState& col = cols[j];
            if (col.kmax != K || col.y.size() != L.total) col = GalerkinState(K);
            std::fill(col.y.begin(), col.y.end(), 0.0);
            if (!have_fields) {
                f = reconstruct_fields(s, mu0);
                have_fields = true;
            }
            const SpectralField& g = noise.field(ch, k);
            switch (ch) {
            case Channel::Velocity:
                L.basis[0]->project_into(advect(g, f.u, K, Path::Triad), col.a());
                break;
            case Channel::Rotation:
                L.basis[1]->project_into(advect(g, f.w, K, Path::Triad), col.b());
                break;
            case Channel::Magnetization: {
                SpectralField t = advect(g, f.M, K, Path::Triad);
                L.basis[2]->project_into(t, col.c());
                L.basis[3]->project_into(t, col.d());
                auto c = col.c();
                auto e = col.e();
                for (std::size_t i = 0; i < e.size(); ++i) e[i] = -c[i];
                break;
            }
            case Channel::Field: {
                L.basis[4]->project_into(advect(g, f.H, K, Path::Triad), col.e());
                for (double& v : col.e()) v /= mu0;
                break;
            }
            }
        }
    }
}

std::vector<GalerkinState> assemble_diffusion(const GalerkinState& s, const NoiseModel& noise, double mu0)
{
    std::vector<GalerkinState> cols;
    assemble_diffusion_into(s, noise, mu0, cols);
    return cols;
}

double q_inner(const GalerkinState& x, const GalerkinState& y, double mu0)
{
    if (x.kmax != y.kmax) throw std::invalid_argument("mismatched k_max");
    const Layout& L = x.layout();
    double w[5] = {1.0, 1.0, 1.0, 1.0 + mu0, mu0};
    double s = 0;
    for (int b = 0; b < 5; ++b) {
        double t = 0;
        for (std::size_t i = L.offset[b]; i < L.offset[b] + L.size[b]; ++i) t += x.y[i] * y.y[i];
        s += w[b] * t;
    }
    return s;
}

double coeff_norm(const GalerkinState& s)
{
    double t = 0;
    for (double v : s.y) t += v * v;
    return std::sqrt(t);
}

LipschitzProbe local_lipschitz_probe(int kmax, const PhysicalParams& p, double radius, int trials, std::uint64_t seed,
                                     Path path)
{
    if (!(radius > 0)) throw std::invalid_argument("probe radius must be positive");
    RngStream rng(seed, 7);
    const std::size_t n = Layout::get(kmax).total;
    auto sample = [&]() {
        GalerkinState s(kmax);
        double norm = 0;
        for (double& v : s.y) {
            v = rng.normal();
            norm += v * v;
        }
        double r = radius * std::pow(rng.uniform(), 1.0 / double(n)) / std::sqrt(norm);
        for (double& v : s.y) v *= r;
        return s;
    };
    LipschitzProbe out{radius, 0.0};
    for (int t = 0; t < trials; ++t) {
        GalerkinState y1 = sample(), y2 = sample();
        DriftVector d1 = assemble_drift(y1, p, path), d2 = assemble_drift(y2, p, path);
        double num = 0, den = 0;
        for (std::size_t i = 0; i < n; ++i) {
            num += (d1.y[i] - d2.y[i]) * (d1.y[i] - d2.y[i]);
            den += (y1.y[i] - y2.y[i]) * (y1.y[i] - y2.y[i]);
        }
        out.constant = std::max(out.constant, std::sqrt(num / den));
    }
    return out;
}

}  // namespace ferro
