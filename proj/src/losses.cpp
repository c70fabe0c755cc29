#include "hyprec/losses.hpp"

#include <cmath>
#include <stdexcept>

namespace hyprec {

namespace {

double dot(const double* u, const double* v, std::size_t len) {
    double s = 0.0;
    for (std::size_t i = 0; i < len; ++i) s += u[i] * v[i];
    return s;
}

double l2_distance(const double* u, const double* v, std::size_t len) {
    double s = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        double d = u[i] - v[i];
        s += d * d;
    }
    return std::sqrt(s);
}

// numerically stable -ln sigma(x) = softplus(-x)
double softplus_neg(double x) {
    if (x >= 0.0) return std::log1p(std::exp(-x));
    return -x + std::log1p(std::exp(x));
}

}  // namespace

// ---------------------------------------------------------------------------
// dissimilarities
// ---------------------------------------------------------------------------

double dissimilarity(const double* u, const double* v, std::size_t len,
                     Geometry geom, ScoreMode mode) {
    if (geom == Geometry::hyperboloid) {
        if (mode == ScoreMode::neg_distance) return hyperboloid_distance(u, v, len);
        return -minkowski_inner(u, v, len);
    }
    if (mode == ScoreMode::neg_distance) return l2_distance(u, v, len);
    return -dot(u, v, len);
}

void dissimilarity_grad(const double* u, const double* v, std::size_t len,
                        Geometry geom, ScoreMode mode, double floor,
                        double* out) {
    if (geom == Geometry::hyperboloid) {
        if (mode == ScoreMode::neg_distance) {
            distance_gradient(u, v, len, floor, out);
        } else {
            // d(-<u,v>)/dv = -g.u
            out[0] = u[0];
            for (std::size_t i = 1; i < len; ++i) out[i] = -u[i];
        }
        return;
    }
    if (mode == ScoreMode::neg_distance) {
        double d = l2_distance(u, v, len);
        double denom = std::sqrt(std::max(d * d, floor));
        for (std::size_t i = 0; i < len; ++i) out[i] = (v[i] - u[i]) / denom;
    } else {
        for (std::size_t i = 0; i < len; ++i) out[i] = -u[i];
    }
}

double score(const double* u, const double* v, std::size_t len, Geometry geom,
             ScoreMode mode) {
    return -dissimilarity(u, v, len, geom, mode);
}

double score(const HyperboloidPoint& u, const HyperboloidPoint& i, ScoreMode mode) {
    if (u.coords.size() != i.coords.size())
        throw std::invalid_argument("score: dimension mismatch");
    return score(u.coords.data(), i.coords.data(), u.coords.size(),
                 Geometry::hyperboloid, mode);
}

// ---------------------------------------------------------------------------
// loss values
// ---------------------------------------------------------------------------

double bpr_loss(double s_ui, double s_uj, double lambda, double reg_term) {
    return softplus_neg(s_ui - s_uj) + lambda * reg_term;
}

double wmrb_rank(double d_pos, const std::vector<double>& d_negs, double slack) {
    if (slack <= 0.0) throw std::invalid_argument("wmrb slack must be > 0");
    double r = 0.0;
    for (double dk : d_negs) {
        double term = slack + d_pos - dk;
        if (term > 0.0) r += term;
    }
    return r;
}

double reg_term(const double* x, std::size_t len, Geometry geom) {
    if (geom == Geometry::euclidean) return dot(x, x, len);
    double d = std::acosh(std::max(x[0], 1.0));
    return d * d;
}

void reg_gradient(const double* x, std::size_t len, Geometry geom, double floor,
                  double* out) {
    if (geom == Geometry::euclidean) {
        for (std::size_t i = 0; i < len; ++i) out[i] = 2.0 * x[i];
        return;
    }
    // d(d^2)/dx for d = d(x, origin) = arccosh(x0): only the timelike
    // coordinate carries gradient; denominator floored like every distance
    // gradient.
    double d = std::acosh(std::max(x[0], 1.0));
    double denom = std::sqrt(std::max(x[0] * x[0] - 1.0, floor));
    out[0] = 2.0 * d / denom;
    for (std::size_t i = 1; i < len; ++i) out[i] = 0.0;
}

// ---------------------------------------------------------------------------
// user representation + backprop chain
// ---------------------------------------------------------------------------

UserRepr build_user_repr(const std::vector<int>& history,
                         const EmbeddingTable& emb, int exclude_item) {
    if (history.empty())
        throw std::domain_error("user representation of an empty history");
    UserRepr repr;
    repr.geometry = emb.geometry;
    for (int it : history)
        if (it != exclude_item) repr.items.push_back(it);
    if (repr.items.empty()) repr.items.push_back(exclude_item);

    std::size_t len = emb.row_len();
    if (emb.geometry == Geometry::euclidean) {
        repr.point.assign(len, 0.0);
        for (int it : repr.items) {
            const double* row = emb.item(std::size_t(it));
            for (std::size_t c = 0; c < len; ++c) repr.point[c] += row[c];
        }
        for (std::size_t c = 0; c < len; ++c)
            repr.point[c] /= double(repr.items.size());
        return repr;
    }

    std::size_t dim = len - 1;
    repr.klein.reserve(repr.items.size());
    repr.gamma.reserve(repr.items.size());
    repr.mid.assign(dim, 0.0);
    for (int it : repr.items) {
        const double* row = emb.item(std::size_t(it));
        Vec k(dim);
        double n2 = 0.0;
        for (std::size_t c = 0; c < dim; ++c) {
            k[c] = row[c + 1] / row[0];
            n2 += k[c] * k[c];
        }
        double g = 1.0 / std::sqrt(1.0 - n2);
        for (std::size_t c = 0; c < dim; ++c) repr.mid[c] += g * k[c];
        repr.gamma.push_back(g);
        repr.gamma_sum += g;
        repr.klein.push_back(std::move(k));
    }
    for (std::size_t c = 0; c < dim; ++c) repr.mid[c] /= repr.gamma_sum;

    double m2 = dot(repr.mid.data(), repr.mid.data(), dim);
    double gm = 1.0 / std::sqrt(1.0 - m2);
    repr.point.assign(len, 0.0);
    repr.point[0] = gm;
    for (std::size_t c = 0; c < dim; ++c) repr.point[c + 1] = gm * repr.mid[c];
    return repr;
}

void user_repr_backprop(const UserRepr& repr, const EmbeddingTable& emb,
                        const Vec& grad_user, std::vector<Vec>& grads) {
    std::size_t len = emb.row_len();
    if (grads.size() != repr.items.size())
        throw std::invalid_argument("user_repr_backprop: grads size mismatch");

    if (repr.geometry == Geometry::euclidean) {
        double inv = 1.0 / double(repr.items.size());
        for (std::size_t i = 0; i < repr.items.size(); ++i)
            for (std::size_t c = 0; c < len; ++c)
                grads[i][c] += grad_user[c] * inv;
        return;
    }

    std::size_t dim = len - 1;
    // lift K->H, u = (gm, gm*mid): (d lift/d mid)^T grad_user
    double gm = repr.point[0];
    double t = grad_user[0];
    for (std::size_t c = 0; c < dim; ++c) t += repr.mid[c] * grad_user[c + 1];
    Vec w(dim);  // gradient with respect to the midpoint
    double gm3 = gm * gm * gm;
    for (std::size_t c = 0; c < dim; ++c)
        w[c] = gm3 * repr.mid[c] * t + gm * grad_user[c + 1];

    // midpoint VJP then H->K projection VJP per history item
    for (std::size_t i = 0; i < repr.items.size(); ++i) {
        double gi = repr.gamma[i];
        const Vec& ki = repr.klein[i];
        double cw = 0.0;  // (x_i - p) . w
        for (std::size_t c = 0; c < dim; ++c) cw += (ki[c] - repr.mid[c]) * w[c];
        double a = gi / repr.gamma_sum;
        double b = gi * gi * gi / repr.gamma_sum * cw;
        // grad in Klein coords of item i: a*w + b*k_i, then through k = x_s/x0
        const double* row = emb.item(std::size_t(repr.items[i]));
        double x0 = row[0];
        double kdotg = 0.0;
        for (std::size_t c = 0; c < dim; ++c) {
            double gk = a * w[c] + b * ki[c];
            grads[i][c + 1] += gk / x0;
            kdotg += ki[c] * gk;
        }
        grads[i][0] += -kdotg / x0;
    }
}

Vec midpoint_jacobian_apply(const Vec& upstream,
                            const std::vector<KleinPoint>& history,
                            std::size_t j) {
    if (history.empty())
        throw std::domain_error("midpoint_jacobian_apply: empty history");
    if (j >= history.size())
        throw std::invalid_argument("midpoint_jacobian_apply: index out of range");
    std::size_t dim = history[0].coords.size();
    if (upstream.size() != dim)
        throw std::invalid_argument("midpoint_jacobian_apply: dimension mismatch");

    double S = 0.0;
    Vec p(dim, 0.0);
    std::vector<double> gammas(history.size());
    for (std::size_t i = 0; i < history.size(); ++i) {
        gammas[i] = lorentz_gamma(history[i]);
        for (std::size_t c = 0; c < dim; ++c)
            p[c] += gammas[i] * history[i].coords[c];
        S += gammas[i];
    }
    for (std::size_t c = 0; c < dim; ++c) p[c] /= S;

    const Vec& xj = history[j].coords;
    double cw = 0.0;
    for (std::size_t c = 0; c < dim; ++c) cw += (xj[c] - p[c]) * upstream[c];
    double gj = gammas[j];
    Vec out(dim);
    for (std::size_t c = 0; c < dim; ++c)
        out[c] = (gj / S) * upstream[c] + (gj * gj * gj / S) * cw * xj[c];
    return out;
}

// ---------------------------------------------------------------------------
// full loss gradients
// ---------------------------------------------------------------------------

namespace {

// user point + (for asymmetric mode) the machinery to push gradients back
struct UserContext {
    UserRepr repr;
    const double* point = nullptr;
    bool asymmetric = false;
};

UserContext make_user(int user, int positive, const EmbeddingTable& emb,
                      const std::vector<int>& history, UserMode umode) {
    UserContext ctx;
    ctx.asymmetric = (umode == UserMode::asymmetric);
    if (ctx.asymmetric) {
        ctx.repr = build_user_repr(history, emb, positive);
        ctx.point = ctx.repr.point.data();
    } else {
        ctx.point = emb.user(std::size_t(user));
    }
    return ctx;
}

void finish_user_gradient(const UserContext& ctx, int user,
                          const EmbeddingTable& emb, const Vec& grad_u,
                          LossGradients& out) {
    if (!ctx.asymmetric) {
        out.wrt_user_items.emplace_back(user, grad_u);
        return;
    }
    std::vector<Vec> grads(ctx.repr.items.size(), Vec(emb.row_len(), 0.0));
    user_repr_backprop(ctx.repr, emb, grad_u, grads);
    for (std::size_t i = 0; i < grads.size(); ++i)
        out.wrt_user_items.emplace_back(ctx.repr.items[i], std::move(grads[i]));
}

}  // namespace

LossGradients bpr_gradients(const Triplet& t, const EmbeddingTable& emb,
                            const std::vector<int>& user_history, UserMode umode,
                            ScoreMode smode, double lambda, double floor) {
    if (t.positive_item == t.negative_item)
        throw std::invalid_argument("bpr triplet with positive == negative");
    std::size_t len = emb.row_len();
    Geometry geom = emb.geometry;
    UserContext ctx = make_user(t.user, t.positive_item, emb, user_history, umode);
    const double* u = ctx.point;
    const double* vi = emb.item(std::size_t(t.positive_item));
    const double* vj = emb.item(std::size_t(t.negative_item));

    double d_ui = dissimilarity(u, vi, len, geom, smode);
    double d_uj = dissimilarity(u, vj, len, geom, smode);
    double delta = d_uj - d_ui;  // s_ui - s_uj
    double a = 1.0 / (1.0 + std::exp(delta));  // sigma(-delta)

    LossGradients out;
    double reg = reg_term(vi, len, geom) + reg_term(vj, len, geom);
    if (!ctx.asymmetric) reg += reg_term(u, len, geom);
    out.loss = softplus_neg(delta) + lambda * reg;

    Vec tmp(len), grad_u(len, 0.0);

    out.wrt_positive.assign(len, 0.0);
    dissimilarity_grad(u, vi, len, geom, smode, floor, tmp.data());
    for (std::size_t c = 0; c < len; ++c) out.wrt_positive[c] = a * tmp[c];
    dissimilarity_grad(vi, u, len, geom, smode, floor, tmp.data());
    for (std::size_t c = 0; c < len; ++c) grad_u[c] += a * tmp[c];

    out.wrt_negatives.emplace_back(len, 0.0);
    dissimilarity_grad(u, vj, len, geom, smode, floor, tmp.data());
    for (std::size_t c = 0; c < len; ++c) out.wrt_negatives[0][c] = -a * tmp[c];
    dissimilarity_grad(vj, u, len, geom, smode, floor, tmp.data());
    for (std::size_t c = 0; c < len; ++c) grad_u[c] -= a * tmp[c];

    if (lambda > 0.0) {
        reg_gradient(vi, len, geom, floor, tmp.data());
        for (std::size_t c = 0; c < len; ++c) out.wrt_positive[c] += lambda * tmp[c];
        reg_gradient(vj, len, geom, floor, tmp.data());
        for (std::size_t c = 0; c < len; ++c)
            out.wrt_negatives[0][c] += lambda * tmp[c];
        if (!ctx.asymmetric) {
            reg_gradient(u, len, geom, floor, tmp.data());
            for (std::size_t c = 0; c < len; ++c) grad_u[c] += lambda * tmp[c];
        }
    }

    finish_user_gradient(ctx, t.user, emb, grad_u, out);
    return out;
}

LossGradients wmrb_gradients(const WmrbBatch& batch, const EmbeddingTable& emb,
                             const std::vector<int>& user_history,
                             UserMode umode, ScoreMode smode, double floor) {
    if (batch.negative_items.empty())
        throw std::invalid_argument("wmrb batch without negatives");
    if (batch.slack <= 0.0) throw std::invalid_argument("wmrb slack must be > 0");
    std::size_t len = emb.row_len();
    Geometry geom = emb.geometry;
    UserContext ctx =
        make_user(batch.user, batch.positive_item, emb, user_history, umode);
    const double* u = ctx.point;
    const double* vp = emb.item(std::size_t(batch.positive_item));

    double d_pos = dissimilarity(u, vp, len, geom, smode);
    std::size_t n_neg = batch.negative_items.size();
    std::vector<double> d_neg(n_neg);
    std::vector<char> active(n_neg, 0);
    double r = 0.0;
    std::size_t n_active = 0;
    for (std::size_t k = 0; k < n_neg; ++k) {
        const double* vk = emb.item(std::size_t(batch.negative_items[k]));
        d_neg[k] = dissimilarity(u, vk, len, geom, smode);
        double term = batch.slack + d_pos - d_neg[k];
        if (term > 0.0) {  // strict: eta_k
            active[k] = 1;
            ++n_active;
            r += term;
        }
    }

    LossGradients out;
    out.loss = std::log1p(r);
    out.wrt_positive.assign(len, 0.0);
    out.wrt_negatives.assign(n_neg, Vec(len, 0.0));
    Vec grad_u(len, 0.0), tmp(len);
    if (n_active == 0) {  // empty K: all gradients zero
        finish_user_gradient(ctx, batch.user, emb, grad_u, out);
        return out;
    }

    double inv = 1.0 / (1.0 + r);
    dissimilarity_grad(u, vp, len, geom, smode, floor, tmp.data());
    for (std::size_t c = 0; c < len; ++c)
        out.wrt_positive[c] = double(n_active) * inv * tmp[c];
    dissimilarity_grad(vp, u, len, geom, smode, floor, tmp.data());
    for (std::size_t c = 0; c < len; ++c)
        grad_u[c] += double(n_active) * inv * tmp[c];

    for (std::size_t k = 0; k < n_neg; ++k) {
        if (!active[k]) continue;
        const double* vk = emb.item(std::size_t(batch.negative_items[k]));
        dissimilarity_grad(u, vk, len, geom, smode, floor, tmp.data());
        for (std::size_t c = 0; c < len; ++c)
            out.wrt_negatives[k][c] = -inv * tmp[c];
        dissimilarity_grad(vk, u, len, geom, smode, floor, tmp.data());
        for (std::size_t c = 0; c < len; ++c) grad_u[c] -= inv * tmp[c];
    }

    finish_user_gradient(ctx, batch.user, emb, grad_u, out);
    return out;
}

}  // namespace hyprec
