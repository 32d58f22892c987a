#pragma once

#include "ferro/basis.hpp"

#include <span>
#include <vector>

namespace ferro {

enum class TensorFamily {
    BForm,      ///< int (phi_i.grad) phi_j . phi_l   (also M1 with V1 x V1 x V)
    M1Form,     ///< same kernel as BForm, spaces V1 x V1 x V
    M2Form,     ///< int curl(phi_i x phi_j) . phi_l
    R1Form,     ///< int (curl phi_i x phi_j) . phi_l
    CrossForm,  ///< int (phi_i x phi_j) . phi_l
};

/// Sparse real tensor T[i][j][l] = form(phi_i, phi_j, phi_l) over three bases.
/// Entries are assembled from wavevector triads k_i + k_j + k_l = 0 only.
class OperatorTensor {
public:
    OperatorTensor(TensorFamily family, int kmax, Space first, Space second, Space third);

    TensorFamily family() const { return family_; }
    std::size_t dim(int slot) const { return dims_[slot]; }
    std::size_t nonzeros() const { return vals_.size(); }

    /// out_l = sum_ij T_ijl x_i y_j
    std::vector<double> contract(std::span<const double> x, std::span<const double> y) const;
    /// sum_ijl T_ijl x_i y_j z_l
    double form(std::span<const double> x, std::span<const double> y, std::span<const double> z) const;

    /// Dense lookup (zero when absent); for tests.
    double at(std::size_t i, std::size_t j, std::size_t l) const;

private:
    TensorFamily family_;
    std::array<std::size_t, 3> dims_{};
    std::vector<std::size_t> row_;  // CSR over flattened (i, j)
    std::vector<std::size_t> col_;  // l
    std::vector<double> vals_;
};

}  // namespace ferro
