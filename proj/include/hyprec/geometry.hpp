#pragma once
// Hyperbolic geometry at curvature -1 in three models: hyperboloid (Lorentz),
// Klein ball, Poincare ball. The hyperboloid is the optimisation domain; Klein
// hosts the Einstein midpoint; Poincare is used for initialisation and
// visualisation exports.
//
// Conventions: an n-dimensional hyperboloid point has n+1 ambient coordinates
// with coords[0] timelike; the Minkowski signature is (-, +, ..., +).

#include <cstddef>
#include <vector>

namespace hyprec {

using Vec = std::vector<double>;

// ---------------------------------------------------------------------------
// raw kernels on contiguous coordinate arrays (hot paths; no validation)
// ---------------------------------------------------------------------------

// <u,v>_H = -u0*v0 + sum_{i>=1} ui*vi
double minkowski_inner(const double* u, const double* v, std::size_t len);

// d(u,v) = arccosh(clamp(-<u,v>_H, >= 1)); clamping absorbs round-off so
// d(x,x) == 0 exactly.
double hyperboloid_distance(const double* u, const double* v, std::size_t len);

// Ambient Euclidean gradient of d(u,v) with respect to v:
//   dd/dv = -g.u / sqrt(<u,v>_H^2 - 1)
// The radicand is floored at `floor` (default 1e-12, i.e. denominator >= 1e-6)
// to guard the d -> 0 singularity.
void distance_gradient(const double* u, const double* v, std::size_t len,
                       double floor, double* out);

// Pi_x(v) = v + <x,v>_H x : orthogonal projection onto the tangent space at x.
void project_to_tangent(const double* x, const double* v, std::size_t len,
                        double* out);

// Minkowski norm of a tangent (spacelike) vector: sqrt(max(<v,v>_H, 0)).
double tangent_norm(const double* v, std::size_t len);

// Exp_x(v) = cosh(|v|) x + sinh(|v|) v/|v|, renormalised so <x',x'>_H = -1
// exactly; returns x unchanged when |v| < 1e-12 (removable singularity).
void exp_map(const double* x, const double* v, std::size_t len, double* out);

// Log_x(y): tangent vector at x of length d(x,y) pointing toward y;
// zero vector when d < 1e-12.
void log_map(const double* x, const double* y, std::size_t len, double* out);

// rescale so <x,x>_H = -1 exactly (divide by sqrt(-<x,x>_H))
void renormalize(double* x, std::size_t len);

// ---------------------------------------------------------------------------
// model point types (validated at construction through the make_* helpers)
// ---------------------------------------------------------------------------

struct HyperboloidPoint {
    Vec coords;  // invariant: |<x,x>_H + 1| <= 1e-9 and coords[0] >= 1
};

struct KleinPoint {
    Vec coords;  // invariant: ||coords|| < 1
};

struct PoincarePoint {
    Vec coords;  // invariant: ||coords|| < 1
};

struct TangentVector {
    HyperboloidPoint base;
    Vec coords;  // invariant: <coords, base>_H = 0 within 1e-9
};

// Diagonal metric of signature (-1, +1, ..., +1); never materialised as a
// matrix. Applying it twice is the identity (g.g = I), and g^{-1} = g.
struct MinkowskiMetric {
    std::size_t dimension;  // manifold dimension n; vectors have n+1 entries
    Vec apply(const Vec& v) const;
};

// validating constructors (throw std::domain_error / std::invalid_argument)
HyperboloidPoint make_hyperboloid(Vec coords);
KleinPoint make_klein(Vec coords);
PoincarePoint make_poincare(Vec coords);
TangentVector make_tangent(HyperboloidPoint base, Vec coords);

bool on_hyperboloid(const Vec& coords, double tol = 1e-9);

// ---------------------------------------------------------------------------
// typed operations
// ---------------------------------------------------------------------------

double minkowski_inner(const Vec& u, const Vec& v);
double hyperboloid_distance(const HyperboloidPoint& u, const HyperboloidPoint& v);
Vec distance_gradient(const HyperboloidPoint& u, const HyperboloidPoint& v,
                      double floor = 1e-12);
TangentVector project_to_tangent(const HyperboloidPoint& x, const Vec& v);
HyperboloidPoint exp_map(const HyperboloidPoint& x, const TangentVector& v);
TangentVector log_map(const HyperboloidPoint& x, const HyperboloidPoint& y);

KleinPoint hyperboloid_to_klein(const HyperboloidPoint& x);
HyperboloidPoint klein_to_hyperboloid(const KleinPoint& k);
PoincarePoint hyperboloid_to_poincare(const HyperboloidPoint& x);
HyperboloidPoint poincare_to_hyperboloid(const PoincarePoint& p);
double poincare_distance(const PoincarePoint& u, const PoincarePoint& v);

// gamma(k) = (1 - ||k||^2)^{-1/2}; equals the timelike coordinate of the lift
double lorentz_gamma(const KleinPoint& k);

// p = sum_i w_i gamma_i k_i / sum_i w_i gamma_i  (weights optional, all > 0)
KleinPoint einstein_midpoint(const std::vector<KleinPoint>& points,
                             const std::vector<double>& weights = {});

// Riemannian gradient descent on sum_i d^2(p, x_i), started from points[0].
HyperboloidPoint frechet_mean(const std::vector<HyperboloidPoint>& points,
                              int iterations, double step = 0.3);

}  // namespace hyprec
