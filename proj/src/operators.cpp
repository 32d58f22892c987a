#include "ferro/operators.hpp"

#include "ferro/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace ferro {

namespace {

const cplx I(0.0, 1.0);

// ---- pseudospectral helpers -------------------------------------------------

using Grid = std::vector<double>;

ScalarSpectral component(const SpectralField& f, int c)
{
    ScalarSpectral s(f.kmax());
    for (std::size_t i = 0; i < f.modes(); ++i) s.data()[i] = f.data()[i][c];
    return s;
}

// d_j f_c
ScalarSpectral derivative(const SpectralField& f, int c, int j)
{
    ScalarSpectral s(f.kmax());
    for (std::size_t i = 0; i < f.modes(); ++i) s.data()[i] = I * double(f.wavevector(i)[j]) * f.data()[i][c];
    return s;
}

inline std::size_t wrap_index(const IVec3& k, int n)
{
    auto w = [n](int x) { return static_cast<std::size_t>((x % n + n) % n); };
    return (w(k[0]) * n + w(k[1])) * n + w(k[2]);
}

// Real-valued inverse transforms, two fields per complex FFT.
std::vector<Grid> to_grid(const std::vector<ScalarSpectral>& s, int n)
{
    const FftPlan& plan = FftPlan::get(n);
    std::vector<cplx> buf(plan.points());
    std::vector<Grid> out(s.size());
    for (std::size_t f = 0; f < s.size(); f += 2) {
        const ScalarSpectral& a = s[f];
        const ScalarSpectral* b = f + 1 < s.size() ? &s[f + 1] : nullptr;
        int ka = a.kmax();
        int kb = b ? b->kmax() : 0;
        int km = std::max(ka, kb);
        scatter_modes(km, n, buf.data(), [&](const IVec3& k) {
            cplx v = a.contains(k) ? a[k] : cplx(0.0);
            if (b && b->contains(k)) v += I * (*b)[k];
            return v;
        });
        plan.backward(buf.data());
        out[f].resize(buf.size());
        for (std::size_t i = 0; i < buf.size(); ++i) out[f][i] = buf[i].real();
        if (b) {
            out[f + 1].resize(buf.size());
            for (std::size_t i = 0; i < buf.size(); ++i) out[f + 1][i] = buf[i].imag();
        }
    }
    return out;
}

std::vector<ScalarSpectral> from_grid(const std::vector<Grid>& g, int n, int kout)
{
    const FftPlan& plan = FftPlan::get(n);
    std::vector<cplx> buf(plan.points());
    std::vector<ScalarSpectral> out(g.size(), ScalarSpectral(kout));
    const double scale = 1.0 / static_cast<double>(plan.points());
    for (std::size_t f = 0; f < g.size(); f += 2) {
        bool pair = f + 1 < g.size();
        for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = cplx(g[f][i], pair ? g[f + 1][i] : 0.0);
        plan.forward(buf.data());
        for (int a = -kout; a <= kout; ++a)
            for (int b = -kout; b <= kout; ++b)
                for (int c = -kout; c <= kout; ++c) {
                    IVec3 k{a, b, c};
                    cplx x = buf[wrap_index(k, n)] * scale;
                    cplx y = std::conj(buf[wrap_index({-a, -b, -c}, n)] * scale);
                    out[f][k] = 0.5 * (x + y);
                    if (pair) out[f + 1][k] = (x - y) / (2.0 * I);
                }
    }
    return out;
}

SpectralField assemble(const std::vector<ScalarSpectral>& comps, int kout)
{
    SpectralField out(kout);
    for (std::size_t i = 0; i < out.modes(); ++i)
        for (int c = 0; c < 3; ++c) out.data()[i][c] = comps[c].data()[i];
    return out;
}

int product_grid(int ka, int kb, int kout)
{
    return smooth_size(std::max(ka + kb + kout + 1, 2 * kout + 1));
}

SpectralField advect_pseudo(const SpectralField& a, const SpectralField& b, int kout)
{
    int n = product_grid(a.kmax(), b.kmax(), kout);
    std::vector<ScalarSpectral> src;
    for (int j = 0; j < 3; ++j) src.push_back(component(a, j));
    for (int c = 0; c < 3; ++c)
        for (int j = 0; j < 3; ++j) src.push_back(derivative(b, c, j));
    std::vector<Grid> g = to_grid(src, n);
    std::vector<Grid> prod(3, Grid(g[0].size()));
    const long pts = static_cast<long>(g[0].size());
#pragma omp parallel for if (pts > 4096) schedule(static)
    for (long x = 0; x < pts; ++x)
        for (int c = 0; c < 3; ++c)
            prod[c][x] = g[0][x] * g[3 + 3 * c][x] + g[1][x] * g[4 + 3 * c][x] + g[2][x] * g[5 + 3 * c][x];
    return assemble(from_grid(prod, n, kout), kout);
}

SpectralField cross_pseudo(const SpectralField& a, const SpectralField& b, int kout)
{
    int n = product_grid(a.kmax(), b.kmax(), kout);
    std::vector<ScalarSpectral> src;
    for (int j = 0; j < 3; ++j) src.push_back(component(a, j));
    for (int j = 0; j < 3; ++j) src.push_back(component(b, j));
    std::vector<Grid> g = to_grid(src, n);
    std::vector<Grid> prod(3, Grid(g[0].size()));
    const long pts = static_cast<long>(g[0].size());
#pragma omp parallel for if (pts > 4096) schedule(static)
    for (long x = 0; x < pts; ++x) {
        prod[0][x] = g[1][x] * g[5][x] - g[2][x] * g[4][x];
        prod[1][x] = g[2][x] * g[3][x] - g[0][x] * g[5][x];
        prod[2][x] = g[0][x] * g[4][x] - g[1][x] * g[3][x];
    }
    return assemble(from_grid(prod, n, kout), kout);
}

// ---- triad (direct convolution) helpers ------------------------------------

struct Mode {
    IVec3 k;
    CVec3 v;
};

std::vector<Mode> nonzero_modes(const SpectralField& f)
{
    std::vector<Mode> m;
    for (std::size_t i = 0; i < f.modes(); ++i) {
        const CVec3& v = f.data()[i];
        if (v[0] != 0.0 || v[1] != 0.0 || v[2] != 0.0) m.push_back({f.wavevector(i), v});
    }
    return m;
}

SpectralField advect_triad(const SpectralField& a, const SpectralField& b, int kout)
{
    SpectralField out(kout);
    auto ma = nonzero_modes(a);
    auto mb = nonzero_modes(b);
    for (const Mode& p : ma)
        for (const Mode& q : mb) {
            IVec3 k{p.k[0] + q.k[0], p.k[1] + q.k[1], p.k[2] + q.k[2]};
            if (norm_inf(k) > kout) continue;
            cplx d = I * (p.v[0] * double(q.k[0]) + p.v[1] * double(q.k[1]) + p.v[2] * double(q.k[2]));
            CVec3& o = out[k];
            for (int c = 0; c < 3; ++c) o[c] += d * q.v[c];
        }
    return out;
}

SpectralField cross_triad(const SpectralField& a, const SpectralField& b, int kout)
{
    SpectralField out(kout);
    auto ma = nonzero_modes(a);
    auto mb = nonzero_modes(b);
    for (const Mode& p : ma)
        for (const Mode& q : mb) {
            IVec3 k{p.k[0] + q.k[0], p.k[1] + q.k[1], p.k[2] + q.k[2]};
            if (norm_inf(k) > kout) continue;
            CVec3& o = out[k];
            o[0] += p.v[1] * q.v[2] - p.v[2] * q.v[1];
            o[1] += p.v[2] * q.v[0] - p.v[0] * q.v[2];
            o[2] += p.v[0] * q.v[1] - p.v[1] * q.v[0];
        }
    return out;
}

void require_div_free(const SpectralField& f, const char* what)
{
    if (!is_divergence_free(f)) throw std::invalid_argument(std::string(what) + " must be divergence-free");
}

void require_same(const SpectralField& a, const SpectralField& b, const SpectralField& c)
{
    require_same_kmax(a, b);
    require_same_kmax(b, c);
}

}  // namespace

std::string_view to_string(Path p) { return p == Path::Triad ? "triad" : "pseudospectral"; }

Path path_from_string(std::string_view s)
{
    if (s == "triad") return Path::Triad;
    if (s == "pseudospectral") return Path::Pseudospectral;
    throw std::invalid_argument("unknown evaluation path '" + std::string(s) + "'");
}

SpectralField advect(const SpectralField& a, const SpectralField& b, int out_kmax, Path path)
{
    return path == Path::Triad ? advect_triad(a, b, out_kmax) : advect_pseudo(a, b, out_kmax);
}

SpectralField cross(const SpectralField& a, const SpectralField& b, int out_kmax, Path path)
{
    return path == Path::Triad ? cross_triad(a, b, out_kmax) : cross_pseudo(a, b, out_kmax);
}

double divergence_ratio(const SpectralField& f)
{
    double scale = max_abs_coeff(f);
    if (scale == 0.0) return 0.0;
    double worst = 0;
    for (std::size_t i = 0; i < f.modes(); ++i) {
        IVec3 k = f.wavevector(i);
        int k2 = norm_sq(k);
        if (k2 == 0) continue;
        const CVec3& v = f.data()[i];
        cplx d = double(k[0]) * v[0] + double(k[1]) * v[1] + double(k[2]) * v[2];
        worst = std::max(worst, std::abs(d) / std::sqrt(double(k2)));
    }
    return worst / scale;
}

bool is_divergence_free(const SpectralField& f) { return divergence_ratio(f) < 1e-12; }

DualCoefficients pair(const SpectralField& f, Space target)
{
    return {target, f.kmax(), basis_for(f.kmax(), target).project(f)};
}

double trilinear_b(const SpectralField& phi, const SpectralField& psi, const SpectralField& v, Path path)
{
    require_same(phi, psi, v);
    return inner(advect(phi, psi, v.kmax(), path), v);
}

DualCoefficients apply_B(BFamily family, const SpectralField& u, const SpectralField& v, Path path)
{
    require_same_kmax(u, v);
    require_div_free(u, "advecting velocity");
    Space target = family == BFamily::B0 ? Space::V : family == BFamily::B1 ? Space::W : Space::V1;
    return pair(advect(u, v, v.kmax(), path), target);
}

double eval_M1(const SpectralField& M, const SpectralField& H, const SpectralField& v, M1Form form, Path path)
{
    require_same(M, H, v);
    require_div_free(v, "test field");
    int K = v.kmax();
    switch (form) {
    case M1Form::Direct:
        return inner(advect(M, H, K, path), v);
    case M1Form::Kelvin:
        return -inner(advect(M + H, v, K, path), H) - inner(curl(H), cross(H, v, K, path));
    case M1Form::Transport:
        return inner(curl(H), cross(M, v, K, path)) - inner(advect(v, M, K, path), H);
    }
    return 0.0;
}

DualCoefficients apply_M0(const SpectralField& M, const SpectralField& H, Path path)
{
    require_same_kmax(M, H);
    return pair(advect(M, H, H.kmax(), path), Space::V);
}

SpectralField induction(const SpectralField& u, const SpectralField& B, M2Form form, Path path)
{
    require_same_kmax(u, B);
    require_div_free(u, "velocity");
    require_div_free(B, "magnetic induction");
    int K = B.kmax();
    SpectralField out = form == M2Form::Direct ? curl(cross(u, B, K, path)) : advect(B, u, K, path) - advect(u, B, K, path);
    out.set_space(Space::V2);
    return out;
}

DualCoefficients apply_M2(const SpectralField& u, const SpectralField& B, M2Form form, Path path)
{
    return pair(induction(u, B, form, path), Space::V2);
}

DualCoefficients apply_R0(const SpectralField& u, const SpectralField& w)
{
    require_same_kmax(u, w);
    return pair(neg_laplacian(u) - 2.0 * curl(w), Space::V);
}

DualCoefficients apply_R1(const SpectralField& H, const SpectralField& h, Path path)
{
    require_same_kmax(H, h);
    return pair(cross(curl(H), h, h.kmax(), path), Space::V);
}

SpectralField apply_R2(const SpectralField& u, const SpectralField& w)
{
    require_same_kmax(u, w);
    SpectralField out = curl(u) - 2.0 * w;
    out.set_space(Space::W);
    return out;
}

SpectralField apply_R3(const SpectralField& M, const SpectralField& H, Path path)
{
    require_same_kmax(M, H);
    return cross(M, H, H.kmax(), path);
}

DualCoefficients apply_R5(const SpectralField& w, Space target) { return pair(grad_div(w), target); }

DualCoefficients apply_R6(const SpectralField& H, Space target) { return pair(curl_curl(H), target); }

DualCoefficients apply_stokes(StokesFamily family, const SpectralField& f)
{
    if (family == StokesFamily::A) {
        require_div_free(f, "Stokes operand");
        return pair(neg_laplacian(f), Space::V);
    }
    return pair(neg_laplacian(f), Space::W);
}

}  // namespace ferro
