#pragma once

#include <complex>
#include <cstddef>

namespace ferro {

using cplx = std::complex<double>;

/// In-place 3D complex DFT on an N^3 grid, index (i,j,l) -> (i*N + j)*N + l.
/// Plans are shared and immutable; execution is safe from several threads.
class FftPlan {
public:
    static const FftPlan& get(int n);

    int size() const { return n_; }
    std::size_t points() const { return static_cast<std::size_t>(n_) * n_ * n_; }

    /// sum_x f(x) exp(-i k.x)
    void forward(cplx* data) const;
    /// sum_k f(k) exp(+i k.x)
    void backward(cplx* data) const;

    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;
    ~FftPlan();

private:
    explicit FftPlan(int n);
    int n_;
    void* fwd_ = nullptr;
    void* bwd_ = nullptr;
};

/// Smallest 5-smooth integer >= n.
int smooth_size(int n);

/// Grid size for alias-free quadratic products of bandwidth-k fields.
inline int dealiased_grid(int kmax) { return smooth_size(3 * kmax + 1); }

}  // namespace ferro
