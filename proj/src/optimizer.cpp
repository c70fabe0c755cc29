#include "hyprec/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "hyprec/rng.hpp"

namespace hyprec {

namespace {

void require_finite(const double* g, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i)
        if (!std::isfinite(g[i]))
            throw std::runtime_error("non-finite gradient at coordinate " +
                                     std::to_string(i));
}

}  // namespace

void rsgd_step(double* x, const double* euclid_grad, std::size_t len, double lr,
               double clip_norm) {
    require_finite(euclid_grad, len);
    // h_m = g^{-1} grad; g is its own inverse, so just negate coordinate 0
    Vec h(euclid_grad, euclid_grad + len);
    h[0] = -h[0];
    Vec ht(len);
    project_to_tangent(x, h.data(), len, ht.data());
    double n = tangent_norm(ht.data(), len);
    if (clip_norm > 0.0 && n > clip_norm) {
        double s = clip_norm / n;
        for (std::size_t i = 0; i < len; ++i) ht[i] *= s;
    }
    for (std::size_t i = 0; i < len; ++i) ht[i] *= -lr;
    Vec out(len);
    exp_map(x, ht.data(), len, out.data());
    for (std::size_t i = 0; i < len; ++i) x[i] = out[i];
}

HyperboloidPoint rsgd_step(const HyperboloidPoint& x, const Vec& euclid_grad,
                           const RsgdConfig& cfg) {
    if (euclid_grad.size() != x.coords.size())
        throw std::invalid_argument("rsgd_step: gradient dimension mismatch");
    if (cfg.learning_rate <= 0.0)
        throw std::invalid_argument("rsgd_step: learning_rate must be > 0");
    Vec out = x.coords;
    rsgd_step(out.data(), euclid_grad.data(), out.size(), cfg.learning_rate,
              cfg.clip_norm);
    return HyperboloidPoint{std::move(out)};
}

void sgd_step(double* x, const double* grad, std::size_t len, double lr,
              double clip_norm) {
    require_finite(grad, len);
    double n2 = 0.0;
    for (std::size_t i = 0; i < len; ++i) n2 += grad[i] * grad[i];
    double s = 1.0;
    if (clip_norm > 0.0 && n2 > clip_norm * clip_norm)
        s = clip_norm / std::sqrt(n2);
    for (std::size_t i = 0; i < len; ++i) x[i] -= lr * s * grad[i];
}

TangentVector clip_tangent(const TangentVector& v, double max_norm) {
    if (max_norm <= 0.0)
        throw std::invalid_argument("clip_tangent: max_norm must be > 0");
    double n = tangent_norm(v.coords.data(), v.coords.size());
    if (n <= max_norm) return v;
    TangentVector out = v;
    double s = max_norm / n;
    for (double& c : out.coords) c *= s;
    return out;
}

EmbeddingTable init_embeddings(std::size_t count, int dim, Geometry geom,
                               const InitConfig& cfg,
                               const std::vector<std::int64_t>& frequencies,
                               std::uint64_t seed, std::uint64_t stream_salt) {
    if (count == 0) throw std::invalid_argument("init_embeddings: count == 0");
    if (dim < 2) throw std::invalid_argument("init_embeddings: dim must be >= 2");
    if (cfg.width < 0.0) throw std::invalid_argument("init width must be >= 0");
    if (cfg.scheme == InitScheme::frequency_radius &&
        frequencies.size() != count)
        throw std::invalid_argument(
            "frequency_radius requires a frequency for every id");

    EmbeddingTable table;
    table.geometry = geom;
    table.dim = dim;
    table.frequencies = frequencies;
    std::size_t len = table.row_len();
    table.items.assign(count * len, 0.0);

    Vec spatial(static_cast<std::size_t>(dim));
    for (std::size_t i = 0; i < count; ++i) {
        Rng rng(seed, rng_stream::init, stream_salt, i);
        if (cfg.scheme == InitScheme::cube_lift) {
            for (int c = 0; c < dim; ++c)
                spatial[std::size_t(c)] = rng.uniform(-cfg.width, cfg.width);
        } else {
            // uniform direction from normalised gaussians
            double n2 = 0.0;
            for (int c = 0; c < dim; ++c) {
                spatial[std::size_t(c)] = rng.normal();
                n2 += spatial[std::size_t(c)] * spatial[std::size_t(c)];
            }
            double inv = n2 > 0.0 ? 1.0 / std::sqrt(n2) : 0.0;
            double radius;
            if (cfg.scheme == InitScheme::poincare_ball) {
                // volumetrically uniform in the ball of radius width
                radius = cfg.width * std::pow(rng.uniform(), 1.0 / double(dim));
            } else {
                double n_i = double(std::max<std::int64_t>(frequencies[i], 2));
                radius = cfg.width / std::log(n_i);
            }
            if (radius >= 1.0)
                throw std::domain_error(
                    "init radius >= 1 leaves the Poincare ball; reduce width");
            for (int c = 0; c < dim; ++c) spatial[std::size_t(c)] *= inv * radius;
        }

        double* row = table.item(i);
        if (geom == Geometry::euclidean) {
            for (int c = 0; c < dim; ++c) row[c] = spatial[std::size_t(c)];
            continue;
        }
        if (cfg.scheme == InitScheme::cube_lift) {
            double n2 = 0.0;
            for (int c = 0; c < dim; ++c) n2 += spatial[std::size_t(c)] * spatial[std::size_t(c)];
            row[0] = std::sqrt(1.0 + n2);
            for (int c = 0; c < dim; ++c) row[c + 1] = spatial[std::size_t(c)];
        } else {
            HyperboloidPoint h =
                poincare_to_hyperboloid(PoincarePoint{Vec(spatial.begin(), spatial.end())});
            for (std::size_t c = 0; c < len; ++c) row[c] = h.coords[c];
        }
    }
    return table;
}

}  // namespace hyprec
