#pragma once
// Ranking objectives (BPR, WMRB) and their analytic gradients, including the
// Einstein-midpoint Jacobian chain used by the asymmetric user representation.
//
// Both losses are written over a dissimilarity D(u,v):
//   neg_distance: D = d(u,v)           (hyperboloid distance / L2)
//   neg_inner:    D = -<u,v>           (monotone in d on the hyperboloid,
//                                       no d->0 gradient singularity)
// score(u,v) = -D(u,v), so higher scores mean more similar in every mode and
// the two modes induce identical rankings.

#include <cstddef>
#include <utility>
#include <vector>

#include "hyprec/embedding.hpp"
#include "hyprec/geometry.hpp"

namespace hyprec {

enum class ScoreMode { neg_distance, neg_inner };
enum class UserMode { symmetric, asymmetric };

struct Triplet {
    int user = 0;
    int positive_item = 0;
    int negative_item = 0;  // != positive_item, outside user's train history
};

struct WmrbBatch {
    int user = 0;
    int positive_item = 0;
    std::vector<int> negative_items;  // nonempty, none in user's train history
    double slack = 1.0;               // > 0
};

struct LossGradients {
    double loss = 0.0;
    Vec wrt_positive;                  // ambient gradient, positive item
    std::vector<Vec> wrt_negatives;    // per negative (zero vector if inactive)
    // asymmetric: per history item the midpoint-path gradient;
    // symmetric: a single entry {user id, gradient of the user point}
    std::vector<std::pair<int, Vec>> wrt_user_items;
};

// ---------------------------------------------------------------------------
// scores and loss values
// ---------------------------------------------------------------------------

double dissimilarity(const double* u, const double* v, std::size_t len,
                     Geometry geom, ScoreMode mode);

// gradient of D(u,v) with respect to v (ambient; `floor` guards denominators)
void dissimilarity_grad(const double* u, const double* v, std::size_t len,
                        Geometry geom, ScoreMode mode, double floor, double* out);

double score(const double* u, const double* v, std::size_t len, Geometry geom,
             ScoreMode mode);
double score(const HyperboloidPoint& u, const HyperboloidPoint& i, ScoreMode mode);

// -ln sigma(s_ui - s_uj) + lambda * reg_term, computed via softplus so large
// gaps neither overflow nor round to -ln(1) = 0 prematurely.
double bpr_loss(double s_ui, double s_uj, double lambda, double reg_term);

// r = sum_k max(0, slack + d_pos - d_k) over the negative dissimilarities
double wmrb_rank(double d_pos, const std::vector<double>& d_negs, double slack);

// squared distance to the origin (hyperboloid) / squared L2 norm (euclidean),
// the per-point regularizer; gradient is ambient.
double reg_term(const double* x, std::size_t len, Geometry geom);
void reg_gradient(const double* x, std::size_t len, Geometry geom, double floor,
                  double* out);

// ---------------------------------------------------------------------------
// asymmetric user representation (hyperboloid: Klein projection -> Einstein
// midpoint -> lift; euclidean: arithmetic mean) with backprop intermediates
// ---------------------------------------------------------------------------

struct UserRepr {
    Vec point;               // user representation, ambient coords
    std::vector<int> items;  // history items used (after any exclusion)
    Geometry geometry = Geometry::hyperboloid;
    // hyperboloid intermediates for the Jacobian chain
    std::vector<Vec> klein;  // history projected to Klein
    Vec mid;                 // Einstein midpoint (Klein coords)
    std::vector<double> gamma;
    double gamma_sum = 0.0;
};

// exclude_item: removed from `history` before aggregating (pass -1 to keep
// all). A history that would become empty falls back to the single remaining
// item (the d->0 singularity is handled by floored gradient denominators).
UserRepr build_user_repr(const std::vector<int>& history,
                         const EmbeddingTable& emb, int exclude_item = -1);

// Accumulates d(loss)/d(history item j as ambient coords) into grads[j] given
// the ambient gradient with respect to the user point: the chain
// (H->K projection)^T . (midpoint Jacobian)^T . (K->H lift)^T per item.
void user_repr_backprop(const UserRepr& repr, const EmbeddingTable& emb,
                        const Vec& grad_user, std::vector<Vec>& grads);

// Einstein-midpoint Jacobian-vector product alone: multiplies `upstream`
// (a gradient with respect to the midpoint) by d(midpoint)/d(history[j]).
//   dp/dx_j = (gamma_j/S) I + (gamma_j^3/S)(x_j - p) x_j^T,  S = sum gamma_k
Vec midpoint_jacobian_apply(const Vec& upstream,
                            const std::vector<KleinPoint>& history,
                            std::size_t j);

// ---------------------------------------------------------------------------
// full loss gradients
// ---------------------------------------------------------------------------

// BPR over one triplet: L = -ln sigma(s_ui - s_uj) + lambda * (reg of the
// touched ranking parameters: user point in symmetric mode, positive,
// negative).
LossGradients bpr_gradients(const Triplet& t, const EmbeddingTable& emb,
                            const std::vector<int>& user_history, UserMode umode,
                            ScoreMode smode, double lambda, double floor = 1e-12);

// WMRB over one positive and a batch of negatives: L = log(1 + r) with
//   dL/dv_j = |K|/(1+r) * dD(u,v_j)/dv_j
//   dL/dv_k = -1/(1+r) * dD(u,v_k)/dv_k          for active k, else 0
//   dL/du   = 1/(1+r) * sum_{k in K} (dD(u,v_j)/du - dD(u,v_k)/du)
// where K = {k : D(u,v_j) + slack > D(u,v_k)} (strict). Regularization is not
// part of L here; the trainer adds lambda * reg separately.
LossGradients wmrb_gradients(const WmrbBatch& batch, const EmbeddingTable& emb,
                             const std::vector<int>& user_history,
                             UserMode umode, ScoreMode smode,
                             double floor = 1e-12);

}  // namespace hyprec
