#include "helpers.hpp"

#include "ferro/diagnostics.hpp"

#include <doctest.h>

using namespace testing;

namespace {

constexpr Path kPaths[] = {Path::Pseudospectral, Path::Triad};

SpectralField cos1cos2_x(int K)
{
    // (cos x1 cos x2, 0, 0)
    SpectralField f(K);
    f.add_cos({1, 1, 0}, {0.5, 0, 0});
    f.add_cos({1, -1, 0}, {0.5, 0, 0});
    return f;
}

}  // namespace

TEST_CASE("trilinear b on single modes")
{
    SpectralField phi = cos_mode(2, {1, 0, 0}, {0, 1, 0});
    SpectralField psi = sin_mode(2, {0, 1, 0}, {1, 0, 0});
    SpectralField v = cos1cos2_x(2);
    for (Path p : kPaths) CHECK(trilinear_b(phi, psi, v, p) == doctest::Approx(2 * kPi3).epsilon(1e-13));

    RngStream rng(5, 0);
    SpectralField u = random_field(2, Space::V, rng);
    SpectralField w = random_field(2, Space::W, rng);
    double scale = l2_norm_sq(w) * std::sqrt(l2_norm_sq(u));
    for (Path p : kPaths) CHECK(std::abs(trilinear_b(u, w, w, p)) < 1e-12 * scale);
}

TEST_CASE("B0 pairing")
{
    RngStream rng(6, 0);
    SpectralField u = random_field(2, Space::V, rng);
    for (Path p : kPaths) {
        double s = std::pow(l2_norm_sq(u), 1.5);
        CHECK(std::abs(apply(apply_B(BFamily::B0, u, u, p), u)) < 1e-12 * s);
    }
    SpectralField phi = cos_mode(2, {1, 0, 0}, {0, 1, 0});
    SpectralField psi = sin_mode(2, {0, 1, 0}, {1, 0, 0});
    SpectralField v = cos1cos2_x(2);
    // psi is not in V, so pair through W instead: b(phi, psi, v) with v in W
    CHECK(apply(apply_B(BFamily::B1, phi, psi), v) == doctest::Approx(2 * kPi3).epsilon(1e-13));
    CHECK_THROWS_AS(apply_B(BFamily::B0, cos_mode(1, {1, 0, 0}, {1, 0, 0}), phi.resized(1)), std::invalid_argument);
}

TEST_CASE("M1 and M0")
{
    SpectralField M = sin_mode(2, {1, 0, 0}, {-1, 0, 0});
    SpectralField H = cos_mode(2, {1, 0, 0}, {0, 1, 0});
    SpectralField v = cos_mode(2, {2, 0, 0}, {0, 1, 0});
    for (Path p : kPaths) {
        CHECK(eval_M1(M, H, v, M1Form::Direct, p) == doctest::Approx(-2 * kPi3).epsilon(1e-13));
        CHECK(eval_M1(M, H, v, M1Form::Transport, p) == doctest::Approx(-2 * kPi3).epsilon(1e-13));
        CHECK(apply(apply_M0(M, H, p), v) == doctest::Approx(-2 * kPi3).epsilon(1e-13));
    }
    CHECK(max_abs(apply_M0(constant(1, {1, 0, 0}), constant(1, {0, 1, 1})).values) == 0.0);

    // div(M + H) = 0 with divergence-free H: M1(M, H, H) vanishes
    Fields f = reconstruct_fields(random_state(2, 7), 1.0);
    SpectralField Hs = project_onto(f.H, Space::V2);
    SpectralField Ms = project_onto(f.M, Space::V2);
    double s = std::sqrt(l2_norm_sq(Ms)) * l2_norm_sq(Hs);
    for (Path p : kPaths) CHECK(std::abs(eval_M1(Ms, Hs, Hs, M1Form::Direct, p)) < 1e-12 * s);

    // with gradient parts the direct form is -1/2 int div M |H|^2, which need not vanish
    SpectralField g = sin_mode(2, {1, 0, 0}, {1, 0, 0});
    SpectralField Mg = g + constant(2, {0, 0, 1});
    SpectralField Hg = -1.0 * g + constant(2, {0, 0, 1});
    CHECK_THROWS_AS(eval_M1(Mg, Hg, Hg), std::invalid_argument);

    // Direct and Transport agree on random operands
    RngStream rng(8, 0);
    SpectralField Mr = random_field(2, Space::V1, rng), Hr = random_field(2, Space::V1, rng);
    SpectralField vr = random_field(2, Space::V, rng);
    double d = eval_M1(Mr, Hr, vr, M1Form::Direct);
    CHECK(std::abs(eval_M1(Mr, Hr, vr, M1Form::Transport) - d) < 1e-10 * std::abs(d) + 1e-12);
}

TEST_CASE("induction term")
{
    SpectralField u = cos_mode(2, {1, 0, 0}, {0, 1, 0});
    SpectralField B0 = constant(2, {0, 0, 1});
    for (Path p : kPaths) CHECK(max_abs_coeff(induction(u, B0, M2Form::Direct, p)) < 1e-15);

    SpectralField B = sin_mode(2, {0, 1, 0}, {1, 0, 0});
    SpectralField psi = cos1cos2_x(2);
    for (Path p : kPaths)
        for (M2Form form : {M2Form::Direct, M2Form::Identity})
            CHECK(inner(induction(u, B, form, p), psi) == doctest::Approx(-2 * kPi3).epsilon(1e-13));
    CHECK(apply(apply_M2(u, B), psi) == doctest::Approx(-2 * kPi3).epsilon(1e-13));
}

TEST_CASE("R0 and Stokes operators")
{
    SpectralField u = cos_mode(1, {1, 0, 0}, {0, 1, 0});
    CHECK(apply(apply_R0(u, SpectralField(1)), u) == doctest::Approx(4 * kPi3).epsilon(1e-14));
    CHECK(max_abs(apply_R0(SpectralField(1), constant(1, {1, 2, 3})).values) == 0.0);
    CHECK(apply(apply_stokes(StokesFamily::A, u), u) == doctest::Approx(4 * kPi3).epsilon(1e-14));
    CHECK(max_abs(apply_stokes(StokesFamily::A1, constant(1, {1, 2, 3})).values) == 0.0);
}

TEST_CASE("R1")
{
    SpectralField H = cos_mode(1, {1, 0, 0}, {0, 1, 0});
    SpectralField h = constant(1, {1, 0, 0});
    SpectralField v = sin_mode(1, {1, 0, 0}, {0, 1, 0});
    for (Path p : kPaths) CHECK(apply(apply_R1(H, h, p), v) == doctest::Approx(-4 * kPi3).epsilon(1e-14));

    SpectralField grad = sin_mode(1, {0, 1, 0}, {0, 1, 0});
    CHECK(max_abs(apply_R1(grad, h).values) < 1e-15);

    RngStream rng(9, 0);
    SpectralField Hr = random_field(2, Space::V1, rng);
    SpectralField hr = random_field(2, Space::V, rng);
    CHECK(std::abs(apply(apply_R1(Hr, hr), hr)) < 1e-12 * std::sqrt(l2_norm_sq(Hr)) * l2_norm_sq(hr) * 4);
}

TEST_CASE("R2 and R3")
{
    SpectralField u = cos_mode(1, {1, 0, 0}, {0, 1, 0});
    SpectralField target = sin_mode(1, {1, 0, 0}, {0, 0, -1});
    CHECK(inner(apply_R2(u, SpectralField(1)), target) == doctest::Approx(4 * kPi3).epsilon(1e-14));
    CHECK(max_abs_coeff(apply_R2(u, 0.5 * curl(u))) < 1e-16);

    SpectralField M = constant(1, {1, 0, 0}), H = constant(1, {0, 1, 0}), psi = constant(1, {0, 0, 1});
    for (Path p : kPaths) {
        CHECK(inner(apply_R3(M, H, p), psi) == doctest::Approx(8 * kPi3).epsilon(1e-14));
        CHECK(max_abs_coeff(apply_R3(M, 2.0 * M, p)) < 1e-15);
    }
    RngStream rng(10, 0);
    SpectralField Mr = random_field(2, Space::V1, rng), Hr = random_field(2, Space::V1, rng);
    double s = std::sqrt(l2_norm_sq(Mr)) * l2_norm_sq(Hr);
    for (Path p : kPaths) CHECK(std::abs(inner(apply_R3(Mr, Hr, p), Hr)) < 1e-12 * s);
}

TEST_CASE("R5 and R6")
{
    SpectralField dfree = cos_mode(1, {1, 0, 0}, {0, 1, 0});
    CHECK(max_abs(apply_R5(dfree, Space::W).values) < 1e-15);
    SpectralField w = sin_mode(1, {1, 0, 0}, {-1, 0, 0});
    CHECK(apply(apply_R5(w, Space::W), w) == doctest::Approx(-4 * kPi3).epsilon(1e-14));

    SpectralField H = cos_mode(1, {1, 0, 0}, {0, 1, 0});
    CHECK(apply(apply_R6(H, Space::V2), H) == doctest::Approx(4 * kPi3).epsilon(1e-14));
    CHECK(max_abs(apply_R6(sin_mode(1, {0, 1, 0}, {0, 1, 0}), Space::V1).values) < 1e-15);
}

TEST_CASE("triad and pseudospectral products agree")
{
    RngStream rng(12, 0);
    for (int K = 1; K <= 3; ++K) {
        SpectralField a = random_field(K, Space::W, rng), b = random_field(K, Space::W, rng);
        double s = std::sqrt(l2_norm_sq(a) * l2_norm_sq(b));
        CHECK(max_diff(advect(a, b, Path::Triad), advect(a, b, Path::Pseudospectral)) < 1e-12 * s);
        CHECK(max_diff(cross(a, b, 2 * K, Path::Triad), cross(a, b, 2 * K, Path::Pseudospectral)) < 1e-12 * s);
    }
}

TEST_CASE("path names")
{
    CHECK(path_from_string(to_string(Path::Triad)) == Path::Triad);
    CHECK(path_from_string(to_string(Path::Pseudospectral)) == Path::Pseudospectral);
    CHECK_THROWS(path_from_string("dense"));
}
