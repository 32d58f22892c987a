#pragma once

#include "ferro/basis.hpp"
#include "ferro/noise.hpp"
#include "ferro/operators.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ferro {

struct PhysicalParams {
    double nu = 1.0;       ///< kinematic viscosity
    double lambda1 = 1.0;  ///< spin viscosity
    double lambda2 = 0.5;  ///< spin bulk viscosity
    double lambda = 0.5;   ///< magnetization diffusion
    double tau = 1.0;      ///< relaxation time
    double chi0 = 0.5;     ///< susceptibility
    double sigma = 1.0;    ///< conductivity
    double mu0 = 1.0;      ///< permeability
    double alpha = 0.5;    ///< vortex viscosity

    /// Every violated positivity constraint, empty when valid.
    std::vector<std::string> violations() const;
    void validate() const;
};

/// Coefficient blocks: a (u in V), b (w in W), c (div-free M in V2), d (gradient part, Grad), e (div-free H in V2).
enum class Block { A = 0, B = 1, C = 2, D = 3, E = 4 };

struct Layout {
    int kmax = 0;
    std::array<std::size_t, 5> offset{};
    std::array<std::size_t, 5> size{};
    std::size_t total = 0;
    std::array<const Basis*, 5> basis{};

    static const Layout& get(int kmax);
};

/// Flat coefficient vector y = (a, b, c, d, e). Also used for drift and diffusion columns.
struct GalerkinState {
    int kmax = 0;
    std::vector<double> y;

    GalerkinState() = default;
    explicit GalerkinState(int kmax);

    const Layout& layout() const { return Layout::get(kmax); }
    std::span<double> block(Block b);
    std::span<const double> block(Block b) const;
    std::span<double> a() { return block(Block::A); }
    std::span<double> b() { return block(Block::B); }
    std::span<double> c() { return block(Block::C); }
    std::span<double> d() { return block(Block::D); }
    std::span<double> e() { return block(Block::E); }
};

using DriftVector = GalerkinState;

struct Fields {
    SpectralField u, w, M, H, B;
};

/// u = V(a), w = W(b), M = V2(c) + Grad(d), H = V2(e) - Grad(d), B = mu0 V2(c + e).
Fields reconstruct_fields(const GalerkinState& s, double mu0);

/// Time derivative of the Galerkin coefficients (deterministic part).
DriftVector assemble_drift(const GalerkinState& s, const PhysicalParams& p, Path path = Path::Pseudospectral);

/// Field-level right-hand sides before projection.
struct DriftFields {
    SpectralField u, w, M, B;
};
DriftFields drift_fields(const Fields& f, const PhysicalParams& p, Path path = Path::Pseudospectral);

/// Coefficient change of the state for a unit increment of one Brownian channel.
/// Columns ordered velocity, rotation, magnetization, field; members in declaration order.
std::vector<GalerkinState> assemble_diffusion(const GalerkinState& s, const NoiseModel& noise, double mu0);
/// Same, writing into preallocated columns.
void assemble_diffusion_into(const GalerkinState& s, const NoiseModel& noise, double mu0,
                             std::vector<GalerkinState>& cols);

/// Channel and member of diffusion column j.
std::pair<Channel, std::size_t> column_channel(const NoiseModel& noise, std::size_t j);

/// Q-weighted inner product whose norm is E_tot: a.a' + b.b' + c.c' + d.d' + mu0 (e.e' + d.d').
double q_inner(const GalerkinState& x, const GalerkinState& y, double mu0);

/// Euclidean norm of the coefficient vector.
double coeff_norm(const GalerkinState& s);

struct LipschitzProbe {
    double radius = 0;
    double constant = 0;  ///< max |Y(y1) - Y(y2)| / |y1 - y2| over sampled pairs
};
/// Samples `trials` pairs uniformly in the coefficient ball of the given radius.
LipschitzProbe local_lipschitz_probe(int kmax, const PhysicalParams& p, double radius, int trials, std::uint64_t seed,
                                     Path path = Path::Pseudospectral);

}  // namespace ferro
