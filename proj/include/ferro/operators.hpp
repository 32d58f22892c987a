#pragma once

#include "ferro/basis.hpp"
#include "ferro/field.hpp"

namespace ferro {

/// Pseudospectral: FFT products on a dealiased grid (OpenMP over grid points).
/// Triad: direct serial convolution of Fourier coefficients (reference path).
enum class Path { Pseudospectral, Triad };

std::string_view to_string(Path p);
Path path_from_string(std::string_view s);

/// (a.grad) b, truncated to |k|_inf <= out_kmax.
SpectralField advect(const SpectralField& a, const SpectralField& b, int out_kmax, Path path = Path::Pseudospectral);
/// a x b, truncated to |k|_inf <= out_kmax.
SpectralField cross(const SpectralField& a, const SpectralField& b, int out_kmax, Path path = Path::Pseudospectral);

inline SpectralField advect(const SpectralField& a, const SpectralField& b, Path path = Path::Pseudospectral)
{
    return advect(a, b, std::max(a.kmax(), b.kmax()), path);
}
inline SpectralField cross(const SpectralField& a, const SpectralField& b, Path path = Path::Pseudospectral)
{
    return cross(a, b, std::max(a.kmax(), b.kmax()), path);
}

/// Largest |k.f(k)|/|k| relative to the largest coefficient magnitude.
double divergence_ratio(const SpectralField& f);
/// Divergence-free to roundoff (ratio below 1e-12).
bool is_divergence_free(const SpectralField& f);

/// Pairings of an L2 field with the basis of `target`.
DualCoefficients pair(const SpectralField& f, Space target);

/// b(phi, psi, v) = int (phi.grad) psi . v
double trilinear_b(const SpectralField& phi, const SpectralField& psi, const SpectralField& v,
                   Path path = Path::Pseudospectral);

enum class BFamily { B0, B1, B2 };
/// <B(u, v), phi_l> = b(u, v, phi_l); targets V, W, V1. Requires div u = 0.
DualCoefficients apply_B(BFamily family, const SpectralField& u, const SpectralField& v,
                         Path path = Path::Pseudospectral);

enum class M1Form {
    Direct,     ///< sum_ij int M_i d_i H_j v_j
    Kelvin,     ///< -int ((M+H).grad) v . H - int curl H . (H x v); needs div(M+H) = 0
    Transport,  ///< int curl H . (M x v) - int (v.grad) M . H
};
/// Requires div v = 0.
double eval_M1(const SpectralField& M, const SpectralField& H, const SpectralField& v, M1Form form = M1Form::Direct,
               Path path = Path::Pseudospectral);
/// <M0(M, H), phi_l> = M1(M, H, phi_l) over the V basis.
DualCoefficients apply_M0(const SpectralField& M, const SpectralField& H, Path path = Path::Pseudospectral);

enum class M2Form {
    Direct,    ///< curl(u x B)
    Identity,  ///< (B.grad) u - (u.grad) B, i.e. -b(B,psi,u) + b(u,psi,B)
};
/// curl(u x B) as a field. Requires div u = div B = 0.
SpectralField induction(const SpectralField& u, const SpectralField& B, M2Form form = M2Form::Direct,
                        Path path = Path::Pseudospectral);
/// Pairings of curl(u x B) with the V2 basis.
DualCoefficients apply_M2(const SpectralField& u, const SpectralField& B, M2Form form = M2Form::Direct,
                          Path path = Path::Pseudospectral);

/// int grad u : grad v - 2 int curl w . v over the V basis.
DualCoefficients apply_R0(const SpectralField& u, const SpectralField& w);
/// int (curl H x h) . v over the V basis.
DualCoefficients apply_R1(const SpectralField& H, const SpectralField& h, Path path = Path::Pseudospectral);
/// curl u - 2 w.
SpectralField apply_R2(const SpectralField& u, const SpectralField& w);
/// M x H (dealiased).
SpectralField apply_R3(const SpectralField& M, const SpectralField& H, Path path = Path::Pseudospectral);
/// -int div w div phi_l.
DualCoefficients apply_R5(const SpectralField& w, Space target);
/// int curl H . curl phi_l.
DualCoefficients apply_R6(const SpectralField& H, Space target);

enum class StokesFamily { A, A1 };
/// A = -P Delta on V, A1 = -Delta on W.
DualCoefficients apply_stokes(StokesFamily family, const SpectralField& f);

}  // namespace ferro
