#pragma once

#include "ferro/field.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace ferro {

enum class Pol { DivFree1, DivFree2, Gradient, Full1, Full2, Full3 };

std::string_view to_string(Pol p);

struct ModeIndex {
    IVec3 k;
    Pol pol;
    bool operator==(const ModeIndex&) const = default;
};

/// Unit polarization vector for (k, pol); throws for gradient at k = 0.
Vec3 polarization(const IVec3& k, Pol pol);

/// Half-space representative: first nonzero component of k is positive.
bool in_half_space(const IVec3& k);

/// Ordered mode list of a space. Within a sublist, lexicographic in (|k|^2, k, pol).
/// For V1 it is the V2 list followed by the Grad list.
std::vector<ModeIndex> build_basis(int kmax, Space space);

/// One real, L2-normalized basis function: scale * e * cos(k.x) or scale * e * sin(k.x).
struct BasisFunction {
    IVec3 k;
    Vec3 e;
    bool sine;
    double scale;
    std::size_t mode;  ///< position in modes()
};

/// Real orthonormal basis of a Galerkin space. Each k != 0 mode gives a cos and a sin function.
class Basis {
public:
    Basis(int kmax, Space space);

    int kmax() const { return kmax_; }
    Space space() const { return space_; }
    const std::vector<ModeIndex>& modes() const { return modes_; }
    const std::vector<BasisFunction>& functions() const { return funcs_; }
    std::size_t dim() const { return funcs_.size(); }

    /// L2 pairings <f, phi_i>; modes of f above kmax() are ignored.
    std::vector<double> project(const SpectralField& f) const;
    void project_into(const SpectralField& f, std::span<double> out) const;

    /// Sum_i coeffs[i] phi_i, at bandwidth kmax().
    SpectralField synthesize(std::span<const double> coeffs) const;
    void accumulate(std::span<const double> coeffs, double scale, SpectralField& out) const;

    /// |k|^2 of every function (eigenvalue of -Delta).
    const std::vector<double>& wavenumbers_sq() const { return k2_; }

    /// Order-sensitive digest of (k, pol) for file headers.
    std::uint64_t digest() const;

private:
    int kmax_;
    Space space_;
    std::vector<ModeIndex> modes_;
    std::vector<BasisFunction> funcs_;
    std::vector<double> k2_;
};

/// Shared immutable basis, built once per (kmax, space).
const Basis& basis_for(int kmax, Space space);

/// Orthogonal projection of f onto the Galerkin space (space, f.kmax()).
SpectralField project_onto(const SpectralField& f, Space space);

/// Pairings of a functional with the orthonormal basis of `space`.
struct DualCoefficients {
    Space space = Space::V;
    int kmax = 0;
    std::vector<double> values;
};

/// Dual weight of a basis function: |k|^2 on V, 1 + |k|^2 on W, V1, V2. Grad is rejected.
double dual_weight(Space space, int k2);

/// (sum_i values_i^2 / w_i)^(1/2).
double dual_norm(const DualCoefficients& l);

/// Riesz-type norm (sum_i w_i c_i^2)^(1/2) of a coefficient vector.
double primal_norm(const Basis& b, std::span<const double> coeffs);

}  // namespace ferro
