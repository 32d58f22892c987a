#include "helpers.hpp"

#include "ferro/diagnostics.hpp"
#include "ferro/tensor.hpp"

#include <doctest.h>

using namespace testing;

namespace {

std::vector<double> coeffs(const SpectralField& f, Space s) { return basis_for(f.kmax(), s).project(f); }

double rel(const std::vector<double>& a, const std::vector<double>& b)
{
    double d = 0, n = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, std::abs(a[i] - b[i]));
        n = std::max(n, std::abs(b[i]));
    }
    return d / (n + 1e-300);
}

}  // namespace

TEST_CASE("materialized tensors reproduce the operators")
{
    RngStream rng(21, 0);
    for (int K = 1; K <= 2; ++K) {
        CAPTURE(K);
        SpectralField u = random_field(K, Space::V, rng), w = random_field(K, Space::W, rng);
        SpectralField M = random_field(K, Space::V1, rng), H = random_field(K, Space::V1, rng);
        SpectralField B = random_field(K, Space::V2, rng);

        OperatorTensor b(TensorFamily::BForm, K, Space::V, Space::W, Space::W);
        CHECK(rel(b.contract(coeffs(u, Space::V), coeffs(w, Space::W)), apply_B(BFamily::B1, u, w, Path::Triad).values) <
              1e-12);

        OperatorTensor m1(TensorFamily::M1Form, K, Space::V1, Space::V1, Space::V);
        CHECK(rel(m1.contract(coeffs(M, Space::V1), coeffs(H, Space::V1)), apply_M0(M, H).values) < 1e-12);

        OperatorTensor m2(TensorFamily::M2Form, K, Space::V, Space::V2, Space::V2);
        CHECK(rel(m2.contract(coeffs(u, Space::V), coeffs(B, Space::V2)), apply_M2(u, B).values) < 1e-12);

        OperatorTensor r1(TensorFamily::R1Form, K, Space::V1, Space::V1, Space::V);
        CHECK(rel(r1.contract(coeffs(H, Space::V1), coeffs(M, Space::V1)), apply_R1(H, M).values) < 1e-12);

        OperatorTensor cr(TensorFamily::CrossForm, K, Space::V1, Space::V1, Space::W);
        CHECK(rel(cr.contract(coeffs(M, Space::V1), coeffs(H, Space::V1)), pair(apply_R3(M, H), Space::W).values) <
              1e-12);

        double f = b.form(coeffs(u, Space::V), coeffs(w, Space::W), coeffs(w, Space::W));
        CHECK(std::abs(f) < 1e-12 * std::sqrt(l2_norm_sq(u)) * l2_norm_sq(w));
    }
}

TEST_CASE("b tensor is antisymmetric in its last two slots")
{
    OperatorTensor b(TensorFamily::BForm, 1, Space::V, Space::W, Space::W);
    CHECK(b.nonzeros() > 0);
    double worst = 0;
    for (std::size_t i = 0; i < b.dim(0); i += 3)
        for (std::size_t j = 0; j < b.dim(1); ++j)
            for (std::size_t l = 0; l < b.dim(2); ++l) worst = std::max(worst, std::abs(b.at(i, j, l) + b.at(i, l, j)));
    CHECK(worst < 1e-13);
}

TEST_CASE("tensor entries match single basis-function triples")
{
    const Basis& bv = basis_for(1, Space::V);
    const Basis& bw = basis_for(1, Space::W);
    OperatorTensor b(TensorFamily::BForm, 1, Space::V, Space::W, Space::W);
    auto unit = [](const Basis& bs, std::size_t i) {
        std::vector<double> e(bs.dim(), 0.0);
        e[i] = 1;
        return bs.synthesize(e);
    };
    for (std::size_t i : {0ul, 5ul, 17ul})
        for (std::size_t j : {1ul, 8ul, 40ul})
            for (std::size_t l : {2ul, 9ul, 33ul, 60ul}) {
                double want = trilinear_b(unit(bv, i), unit(bw, j), unit(bw, l), Path::Triad);
                CHECK(b.at(i, j, l) == doctest::Approx(want).epsilon(1e-12).scale(1.0));
            }
}
