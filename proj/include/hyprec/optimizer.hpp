#pragma once
// Riemannian SGD on the hyperboloid: metric correction, tangent projection,
// optional tangent-norm clipping, exponential-map update. Plus the three
// embedding initialisation schemes.

#include <cstdint>
#include <vector>

#include "hyprec/embedding.hpp"
#include "hyprec/geometry.hpp"

namespace hyprec {

struct RsgdConfig {
    double learning_rate = 0.1;
    double clip_norm = 1.0;  // <= 0 disables clipping
    double singularity_floor = 1e-12;
};

// Three steps: h_m = g^{-1} grad (negate the timelike coordinate),
// h_t = Pi_x(h_m), x' = Exp_x(-lr * h_t) — with h_t clipped to clip_norm
// first. Throws on non-finite gradients (never silently skips).
void rsgd_step(double* x, const double* euclid_grad, std::size_t len, double lr,
               double clip_norm);
HyperboloidPoint rsgd_step(const HyperboloidPoint& x, const Vec& euclid_grad,
                           const RsgdConfig& cfg);

// plain SGD with the same clipping convention, for the euclidean baseline
void sgd_step(double* x, const double* grad, std::size_t len, double lr,
              double clip_norm);

// rescale v to Minkowski norm max_norm when it exceeds it; direction kept
TangentVector clip_tangent(const TangentVector& v, double max_norm);

enum class InitScheme { cube_lift, poincare_ball, frequency_radius };

struct InitConfig {
    InitScheme scheme = InitScheme::cube_lift;
    double width = 0.001;
};

// Deterministic per (seed, index): each point draws from its own derived
// stream, so tables built for different counts agree on shared prefixes.
//   cube_lift:        spatial coords uniform in [-width, width]^dim, timelike
//                     coordinate set to satisfy the constraint
//   poincare_ball:    uniform in a Poincare ball of radius width, lifted
//   frequency_radius: direction uniform on the sphere, radius
//                     width / log(max(n_i, 2)) in the Poincare ball, lifted
// For euclidean geometry the same spatial draws are used without the lift.
// frequency_radius requires a frequency for every id (>= 1). stream_salt
// separates tables drawn from one seed (0 = items, 1 = users).
EmbeddingTable init_embeddings(std::size_t count, int dim, Geometry geom,
                               const InitConfig& cfg,
                               const std::vector<std::int64_t>& frequencies,
                               std::uint64_t seed,
                               std::uint64_t stream_salt = 0);

}  // namespace hyprec
