#include "hyprec/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace hyprec {

namespace {

void require_same_length(std::size_t a, std::size_t b) {
    if (a != b)
        throw std::invalid_argument("dimension mismatch: " + std::to_string(a) +
                                    " vs " + std::to_string(b));
}

double sq_norm(const double* v, std::size_t len) {
    double s = 0.0;
    for (std::size_t i = 0; i < len; ++i) s += v[i] * v[i];
    return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// raw kernels
// ---------------------------------------------------------------------------

double minkowski_inner(const double* u, const double* v, std::size_t len) {
    double s = -u[0] * v[0];
    for (std::size_t i = 1; i < len; ++i) s += u[i] * v[i];
    return s;
}

double hyperboloid_distance(const double* u, const double* v, std::size_t len) {
    double w = -minkowski_inner(u, v, len);
    if (w <= 1.0) return 0.0;  // round-off guard below 1
    // round-off can also land above 1 for identical inputs (acosh(1 + eps)
    // is ~1e-8, not 0); the equality test only runs in that narrow band
    if (w < 1.0 + 1e-8 && std::equal(u, u + len, v)) return 0.0;
    return std::acosh(w);
}

void distance_gradient(const double* u, const double* v, std::size_t len,
                       double floor, double* out) {
    double inner = minkowski_inner(u, v, len);
    double rad = inner * inner - 1.0;
    if (rad < floor) rad = floor;
    double inv = 1.0 / std::sqrt(rad);
    // -g.u / sqrt(<u,v>^2 - 1): g negates the timelike coordinate
    out[0] = u[0] * inv;
    for (std::size_t i = 1; i < len; ++i) out[i] = -u[i] * inv;
}

void project_to_tangent(const double* x, const double* v, std::size_t len,
                        double* out) {
    double xv = minkowski_inner(x, v, len);
    for (std::size_t i = 0; i < len; ++i) out[i] = v[i] + xv * x[i];
}

double tangent_norm(const double* v, std::size_t len) {
    double n2 = minkowski_inner(v, v, len);
    return n2 > 0.0 ? std::sqrt(n2) : 0.0;
}

void renormalize(double* x, std::size_t len) {
    double s = std::sqrt(-minkowski_inner(x, x, len));
    for (std::size_t i = 0; i < len; ++i) x[i] /= s;
}

void exp_map(const double* x, const double* v, std::size_t len, double* out) {
    double n = tangent_norm(v, len);
    if (n < 1e-12) {
        for (std::size_t i = 0; i < len; ++i) out[i] = x[i];
        return;
    }
    double c = std::cosh(n), s = std::sinh(n) / n;
    for (std::size_t i = 0; i < len; ++i) out[i] = c * x[i] + s * v[i];
    renormalize(out, len);
}

void log_map(const double* x, const double* y, std::size_t len, double* out) {
    double d = hyperboloid_distance(x, y, len);
    if (d < 1e-12) {
        for (std::size_t i = 0; i < len; ++i) out[i] = 0.0;
        return;
    }
    double c = std::cosh(d), s = d / std::sinh(d);
    for (std::size_t i = 0; i < len; ++i) out[i] = s * (y[i] - c * x[i]);
}

// ---------------------------------------------------------------------------
// validation
// ---------------------------------------------------------------------------

bool on_hyperboloid(const Vec& coords, double tol) {
    if (coords.size() < 2) return false;
    double q = minkowski_inner(coords.data(), coords.data(), coords.size());
    return std::abs(q + 1.0) <= tol && coords[0] >= 1.0 - tol;
}

HyperboloidPoint make_hyperboloid(Vec coords) {
    if (coords.size() < 2)
        throw std::invalid_argument("hyperboloid point needs >= 2 coordinates");
    if (!on_hyperboloid(coords))
        throw std::domain_error("point is not on the upper hyperboloid sheet");
    return HyperboloidPoint{std::move(coords)};
}

KleinPoint make_klein(Vec coords) {
    if (coords.empty()) throw std::invalid_argument("empty Klein point");
    if (sq_norm(coords.data(), coords.size()) >= 1.0)
        throw std::domain_error("Klein point must lie strictly inside the unit ball");
    return KleinPoint{std::move(coords)};
}

PoincarePoint make_poincare(Vec coords) {
    if (coords.empty()) throw std::invalid_argument("empty Poincare point");
    if (sq_norm(coords.data(), coords.size()) >= 1.0)
        throw std::domain_error("Poincare point must lie strictly inside the unit ball");
    return PoincarePoint{std::move(coords)};
}

TangentVector make_tangent(HyperboloidPoint base, Vec coords) {
    require_same_length(base.coords.size(), coords.size());
    double ip = minkowski_inner(base.coords.data(), coords.data(), coords.size());
    if (std::abs(ip) > 1e-9)
        throw std::domain_error("vector is not tangent at the base point");
    return TangentVector{std::move(base), std::move(coords)};
}

Vec MinkowskiMetric::apply(const Vec& v) const {
    require_same_length(v.size(), dimension + 1);
    Vec out = v;
    out[0] = -out[0];
    return out;
}

// ---------------------------------------------------------------------------
// typed operations
// ---------------------------------------------------------------------------

double minkowski_inner(const Vec& u, const Vec& v) {
    if (u.size() < 2) throw std::invalid_argument("vectors need >= 2 coordinates");
    require_same_length(u.size(), v.size());
    return minkowski_inner(u.data(), v.data(), u.size());
}

double hyperboloid_distance(const HyperboloidPoint& u, const HyperboloidPoint& v) {
    require_same_length(u.coords.size(), v.coords.size());
    return hyperboloid_distance(u.coords.data(), v.coords.data(), u.coords.size());
}

Vec distance_gradient(const HyperboloidPoint& u, const HyperboloidPoint& v,
                      double floor) {
    require_same_length(u.coords.size(), v.coords.size());
    Vec out(u.coords.size());
    distance_gradient(u.coords.data(), v.coords.data(), u.coords.size(), floor,
                      out.data());
    return out;
}

TangentVector project_to_tangent(const HyperboloidPoint& x, const Vec& v) {
    require_same_length(x.coords.size(), v.size());
    Vec out(v.size());
    project_to_tangent(x.coords.data(), v.data(), v.size(), out.data());
    return TangentVector{x, std::move(out)};
}

HyperboloidPoint exp_map(const HyperboloidPoint& x, const TangentVector& v) {
    require_same_length(x.coords.size(), v.coords.size());
    Vec out(x.coords.size());
    exp_map(x.coords.data(), v.coords.data(), x.coords.size(), out.data());
    return HyperboloidPoint{std::move(out)};
}

TangentVector log_map(const HyperboloidPoint& x, const HyperboloidPoint& y) {
    require_same_length(x.coords.size(), y.coords.size());
    Vec out(x.coords.size());
    log_map(x.coords.data(), y.coords.data(), x.coords.size(), out.data());
    return TangentVector{x, std::move(out)};
}

KleinPoint hyperboloid_to_klein(const HyperboloidPoint& x) {
    Vec out(x.coords.size() - 1);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = x.coords[i + 1] / x.coords[0];
    return KleinPoint{std::move(out)};
}

HyperboloidPoint klein_to_hyperboloid(const KleinPoint& k) {
    double n2 = sq_norm(k.coords.data(), k.coords.size());
    if (n2 >= 1.0)
        throw std::domain_error("Klein point on or outside the unit ball");
    double g = 1.0 / std::sqrt(1.0 - n2);
    Vec out(k.coords.size() + 1);
    out[0] = g;
    for (std::size_t i = 0; i < k.coords.size(); ++i) out[i + 1] = g * k.coords[i];
    return HyperboloidPoint{std::move(out)};
}

PoincarePoint hyperboloid_to_poincare(const HyperboloidPoint& x) {
    Vec out(x.coords.size() - 1);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = x.coords[i + 1] / (1.0 + x.coords[0]);
    return PoincarePoint{std::move(out)};
}

HyperboloidPoint poincare_to_hyperboloid(const PoincarePoint& p) {
    double n2 = sq_norm(p.coords.data(), p.coords.size());
    if (n2 >= 1.0)
        throw std::domain_error("Poincare point on or outside the unit ball");
    double inv = 1.0 / (1.0 - n2);
    Vec out(p.coords.size() + 1);
    out[0] = (1.0 + n2) * inv;
    for (std::size_t i = 0; i < p.coords.size(); ++i)
        out[i + 1] = 2.0 * p.coords[i] * inv;
    return HyperboloidPoint{std::move(out)};
}

double poincare_distance(const PoincarePoint& u, const PoincarePoint& v) {
    require_same_length(u.coords.size(), v.coords.size());
    double nu = sq_norm(u.coords.data(), u.coords.size());
    double nv = sq_norm(v.coords.data(), v.coords.size());
    if (nu >= 1.0 || nv >= 1.0)
        throw std::domain_error("Poincare point on or outside the unit ball");
    double diff = 0.0;
    for (std::size_t i = 0; i < u.coords.size(); ++i) {
        double d = u.coords[i] - v.coords[i];
        diff += d * d;
    }
    double arg = 1.0 + 2.0 * diff / ((1.0 - nu) * (1.0 - nv));
    if (arg < 1.0) arg = 1.0;
    return std::acosh(arg);
}

double lorentz_gamma(const KleinPoint& k) {
    double n2 = sq_norm(k.coords.data(), k.coords.size());
    if (n2 >= 1.0)
        throw std::domain_error("Klein point on or outside the unit ball");
    return 1.0 / std::sqrt(1.0 - n2);
}

KleinPoint einstein_midpoint(const std::vector<KleinPoint>& points,
                             const std::vector<double>& weights) {
    if (points.empty())
        throw std::domain_error("einstein_midpoint of an empty point list");
    if (!weights.empty() && weights.size() != points.size())
        throw std::invalid_argument("weights/points length mismatch");
    std::size_t dim = points[0].coords.size();
    Vec num(dim, 0.0);
    double den = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        require_same_length(points[i].coords.size(), dim);
        double w = weights.empty() ? 1.0 : weights[i];
        if (w <= 0.0) throw std::invalid_argument("midpoint weights must be > 0");
        double g = w * lorentz_gamma(points[i]);
        for (std::size_t j = 0; j < dim; ++j) num[j] += g * points[i].coords[j];
        den += g;
    }
    for (std::size_t j = 0; j < dim; ++j) num[j] /= den;
    return KleinPoint{std::move(num)};
}

HyperboloidPoint frechet_mean(const std::vector<HyperboloidPoint>& points,
                              int iterations, double step) {
    if (points.empty())
        throw std::domain_error("frechet_mean of an empty point list");
    if (iterations < 1 || step <= 0.0)
        throw std::invalid_argument("frechet_mean needs iterations >= 1, step > 0");
    std::size_t len = points[0].coords.size();
    Vec p = points[0].coords, dir(len), lg(len), next(len);
    for (int it = 0; it < iterations; ++it) {
        // descent direction for sum_i d^2(p, x_i): 2 sum_i Log_p(x_i)
        std::fill(dir.begin(), dir.end(), 0.0);
        for (const auto& x : points) {
            require_same_length(x.coords.size(), len);
            log_map(p.data(), x.coords.data(), len, lg.data());
            for (std::size_t j = 0; j < len; ++j) dir[j] += 2.0 * lg[j];
        }
        for (std::size_t j = 0; j < len; ++j) dir[j] *= step;
        exp_map(p.data(), dir.data(), len, next.data());
        p.swap(next);
    }
    return HyperboloidPoint{std::move(p)};
}

}  // namespace hyprec
