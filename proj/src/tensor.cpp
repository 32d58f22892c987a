#include "ferro/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ferro {

namespace {

const cplx I(0.0, 1.0);

struct Term {
    IVec3 k;
    CVec3 v;
};

std::vector<std::array<Term, 2>> expand(const Basis& b, std::vector<int>& nterms)
{
    std::vector<std::array<Term, 2>> out;
    for (const auto& f : b.functions()) {
        CVec3 e{f.e[0] * f.scale, f.e[1] * f.scale, f.e[2] * f.scale};
        IVec3 m{-f.k[0], -f.k[1], -f.k[2]};
        if (norm_sq(f.k) == 0) {
            out.push_back({Term{f.k, e}, Term{f.k, {}}});
            nterms.push_back(1);
            continue;
        }
        cplx cp = f.sine ? -0.5 * I : cplx(0.5);
        cplx cm = f.sine ? 0.5 * I : cplx(0.5);
        out.push_back({Term{f.k, {cp * e[0], cp * e[1], cp * e[2]}}, Term{m, {cm * e[0], cm * e[1], cm * e[2]}}});
        nterms.push_back(2);
    }
    return out;
}

CVec3 cx(const CVec3& a, const CVec3& b)
{
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

cplx dotc(const CVec3& a, const CVec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

CVec3 ik(const IVec3& k) { return {I * double(k[0]), I * double(k[1]), I * double(k[2])}; }

cplx kernel(TensorFamily fam, const Term& a, const Term& b, const Term& c)
{
    switch (fam) {
    case TensorFamily::BForm:
    case TensorFamily::M1Form:
        return dotc(a.v, ik(b.k)) * dotc(b.v, c.v);
    case TensorFamily::M2Form:
        return dotc(cx(a.v, b.v), cx(ik(c.k), c.v));
    case TensorFamily::R1Form:
        return dotc(cx(cx(ik(a.k), a.v), b.v), c.v);
    case TensorFamily::CrossForm:
        return dotc(cx(a.v, b.v), c.v);
    }
    return 0.0;
}

}  // namespace

OperatorTensor::OperatorTensor(TensorFamily family, int kmax, Space first, Space second, Space third)
    : family_(family)
{
    const Basis& bi = basis_for(kmax, first);
    const Basis& bj = basis_for(kmax, second);
    const Basis& bl = basis_for(kmax, third);
    dims_ = {bi.dim(), bj.dim(), bl.dim()};
    std::vector<int> ni, nj, nl;
    auto ei = expand(bi, ni);
    auto ej = expand(bj, nj);
    auto el = expand(bl, nl);

    // wavevector -> (l, term) pairs
    int s = 2 * kmax + 1;
    auto cube = [&](const IVec3& k) { return (std::size_t(k[0] + kmax) * s + (k[1] + kmax)) * s + (k[2] + kmax); };
    std::vector<std::vector<std::pair<std::size_t, int>>> lookup(std::size_t(s) * s * s);
    for (std::size_t l = 0; l < el.size(); ++l)
        for (int t = 0; t < nl[l]; ++t) lookup[cube(el[l][t].k)].push_back({l, t});

    std::vector<double> acc(dims_[2], 0.0);
    std::vector<char> seen(dims_[2], 0);
    std::vector<std::size_t> touched;
    row_.push_back(0);
    for (std::size_t i = 0; i < dims_[0]; ++i)
        for (std::size_t j = 0; j < dims_[1]; ++j) {
            for (int ti = 0; ti < ni[i]; ++ti)
                for (int tj = 0; tj < nj[j]; ++tj) {
                    const Term& a = ei[i][ti];
                    const Term& b = ej[j][tj];
                    IVec3 r{-(a.k[0] + b.k[0]), -(a.k[1] + b.k[1]), -(a.k[2] + b.k[2])};
                    if (norm_inf(r) > kmax) continue;
                    for (auto [l, tl] : lookup[cube(r)]) {
                        if (!seen[l]) {
                            seen[l] = 1;
                            touched.push_back(l);
                        }
                        acc[l] += kVolume * kernel(family, a, b, el[l][tl]).real();
                    }
                }
            std::sort(touched.begin(), touched.end());
            for (std::size_t l : touched) {
                if (std::abs(acc[l]) > 1e-12) {
                    col_.push_back(l);
                    vals_.push_back(acc[l]);
                }
                acc[l] = 0.0;
                seen[l] = 0;
            }
            touched.clear();
            row_.push_back(vals_.size());
        }
}

std::vector<double> OperatorTensor::contract(std::span<const double> x, std::span<const double> y) const
{
    if (x.size() != dims_[0] || y.size() != dims_[1]) throw std::invalid_argument("tensor operand size mismatch");
    std::vector<double> out(dims_[2], 0.0);
    for (std::size_t i = 0; i < dims_[0]; ++i) {
        if (x[i] == 0.0) continue;
        for (std::size_t j = 0; j < dims_[1]; ++j) {
            double xy = x[i] * y[j];
            if (xy == 0.0) continue;
            std::size_t r = i * dims_[1] + j;
            for (std::size_t e = row_[r]; e < row_[r + 1]; ++e) out[col_[e]] += xy * vals_[e];
        }
    }
    return out;
}

double OperatorTensor::form(std::span<const double> x, std::span<const double> y, std::span<const double> z) const
{
    if (z.size() != dims_[2]) throw std::invalid_argument("tensor operand size mismatch");
    auto c = contract(x, y);
    double s = 0;
    for (std::size_t l = 0; l < c.size(); ++l) s += c[l] * z[l];
    return s;
}

double OperatorTensor::at(std::size_t i, std::size_t j, std::size_t l) const
{
    std::size_t r = i * dims_[1] + j;
    for (std::size_t e = row_[r]; e < row_[r + 1]; ++e)
        if (col_[e] == l) return vals_[e];
    return 0.0;
}

}  // namespace ferro
