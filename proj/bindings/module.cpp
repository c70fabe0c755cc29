// Python bindings for the core operations: hyperboloid geometry, the two
// ranking losses, Riemannian SGD steps, power-law fitting, ranking metrics,
// and a one-call train/evaluate pipeline over raw interaction tuples.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "hyprec/data.hpp"
#include "hyprec/embedding.hpp"
#include "hyprec/eval.hpp"
#include "hyprec/geometry.hpp"
#include "hyprec/losses.hpp"
#include "hyprec/netstats.hpp"
#include "hyprec/optimizer.hpp"
#include "hyprec/recommender.hpp"
#include "hyprec/rng.hpp"

namespace py = pybind11;
using namespace hyprec;

namespace {

std::vector<std::vector<double>> rows_of(const std::vector<double>& flat,
                                         std::size_t row_len) {
    std::vector<std::vector<double>> out;
    if (row_len == 0) return out;
    out.reserve(flat.size() / row_len);
    for (std::size_t i = 0; i + row_len <= flat.size(); i += row_len)
        out.emplace_back(flat.begin() + long(i), flat.begin() + long(i + row_len));
    return out;
}

py::dict fit_to_dict(const PowerLawFit& fit) {
    py::dict d;
    d["gamma_hat"] = fit.gamma_hat;
    d["x_min"] = fit.x_min;
    d["ks_statistic"] = fit.ks_statistic;
    d["n_tail"] = fit.n_tail;
    d["p_value"] = fit.p_value;
    return d;
}

Interaction make_interaction(const std::string& user, const std::string& item,
                             double rating, long long timestamp) {
    Interaction it;
    it.user = user;
    it.item = item;
    it.rating = rating;
    it.has_rating = true;
    it.timestamp = timestamp;
    return it;
}

}  // namespace

PYBIND11_MODULE(_hyprec, m) {
    m.doc() = "hyperbolic recommender core (hyperboloid geometry, ranking "
              "losses, power-law statistics)";

    // ---- geometry ---------------------------------------------------------
    m.def(
        "distance",
        [](const Vec& u, const Vec& v) {
            return hyperboloid_distance(make_hyperboloid(u), make_hyperboloid(v));
        },
        py::arg("u"), py::arg("v"),
        "Geodesic distance between two hyperboloid points.");

    m.def(
        "distance_gradient",
        [](const Vec& u, const Vec& v) {
            return distance_gradient(make_hyperboloid(u), make_hyperboloid(v));
        },
        py::arg("u"), py::arg("v"),
        "Riemannian gradient of d(u, .) at v (tangent vector at v).");

    m.def(
        "exp_map",
        [](const Vec& x, const Vec& v) {
            HyperboloidPoint p = make_hyperboloid(x);
            return exp_map(p, make_tangent(p, v)).coords;
        },
        py::arg("x"), py::arg("v"),
        "Exponential map: follow the geodesic from x along tangent v.");

    m.def(
        "log_map",
        [](const Vec& x, const Vec& y) {
            return log_map(make_hyperboloid(x), make_hyperboloid(y)).coords;
        },
        py::arg("x"), py::arg("y"),
        "Logarithmic map: tangent at x pointing to y with |v| = d(x, y).");

    m.def(
        "to_poincare",
        [](const Vec& x) {
            return hyperboloid_to_poincare(make_hyperboloid(x)).coords;
        },
        py::arg("x"));
    m.def(
        "from_poincare",
        [](const Vec& p) {
            return poincare_to_hyperboloid(make_poincare(p)).coords;
        },
        py::arg("p"));
    m.def(
        "to_klein",
        [](const Vec& x) {
            return hyperboloid_to_klein(make_hyperboloid(x)).coords;
        },
        py::arg("x"));
    m.def(
        "from_klein",
        [](const Vec& k) { return klein_to_hyperboloid(make_klein(k)).coords; },
        py::arg("k"));

    m.def(
        "einstein_midpoint",
        [](const std::vector<Vec>& klein_points, const Vec& weights) {
            std::vector<KleinPoint> pts;
            pts.reserve(klein_points.size());
            for (const Vec& k : klein_points) pts.push_back(make_klein(k));
            KleinPoint mid = weights.empty()
                                 ? einstein_midpoint(pts)
                                 : einstein_midpoint(pts, weights);
            return mid.coords;
        },
        py::arg("klein_points"), py::arg("weights") = Vec{},
        "Gamma-weighted Einstein midpoint of Klein-model points.");

    m.def(
        "frechet_mean",
        [](const std::vector<Vec>& points, int iterations, double step) {
            std::vector<HyperboloidPoint> pts;
            pts.reserve(points.size());
            for (const Vec& x : points) pts.push_back(make_hyperboloid(x));
            return frechet_mean(pts, iterations, step).coords;
        },
        py::arg("points"), py::arg("iterations") = 20, py::arg("step") = 0.3,
        "Iterative intrinsic mean of hyperboloid points.");

    // ---- losses -----------------------------------------------------------
    m.def(
        "dissimilarity",
        [](const Vec& u, const Vec& v, const std::string& geometry,
           const std::string& score_mode) {
            if (u.size() != v.size())
                throw std::invalid_argument("length mismatch");
            return dissimilarity(u.data(), v.data(), u.size(),
                                 geometry_from_string(geometry),
                                 score_mode_from_string(score_mode));
        },
        py::arg("u"), py::arg("v"), py::arg("geometry") = "hyperboloid",
        py::arg("score_mode") = "neg_inner",
        "Dissimilarity D(u, v); the ranking score is -D.");

    m.def("bpr_loss", &bpr_loss, py::arg("pos_score"), py::arg("neg_score"),
          py::arg("lambda_reg") = 0.0, py::arg("reg_term") = 0.0,
          "Overflow-safe BPR loss softplus(neg - pos) + lambda * reg.");

    m.def("wmrb_rank", &wmrb_rank, py::arg("pos_dissim"),
          py::arg("neg_dissims"), py::arg("slack") = 1.0,
          "Margin-rank estimate sum_k max(0, slack + D_pos - D_k).");

    // ---- optimizer --------------------------------------------------------
    m.def(
        "rsgd_step",
        [](const Vec& x, const Vec& grad, double lr, double clip) {
            RsgdConfig cfg;
            cfg.learning_rate = lr;
            cfg.clip_norm = clip;
            return rsgd_step(make_hyperboloid(x), grad, cfg).coords;
        },
        py::arg("x"), py::arg("euclid_grad"), py::arg("lr") = 0.1,
        py::arg("clip") = 1.0,
        "One Riemannian SGD step from a Euclidean ambient gradient.");

    // ---- power-law statistics ----------------------------------------------
    m.def("hurwitz_zeta", &hurwitz_zeta, py::arg("s"), py::arg("a"));

    m.def(
        "fit_power_law",
        [](const std::vector<long long>& values, std::size_t min_tail,
           std::size_t max_candidates) {
            return fit_to_dict(powerlaw_fit(values, min_tail, max_candidates));
        },
        py::arg("values"), py::arg("min_tail") = 50,
        py::arg("max_candidates") = 64,
        "Discrete MLE fit with KS-minimizing x_min; returns a dict.");

    m.def(
        "power_law_p_value",
        [](const std::vector<long long>& values, int bootstraps,
           std::uint64_t seed, int threads, std::size_t min_tail,
           std::size_t max_candidates) {
            PowerLawFit fit = powerlaw_fit(values, min_tail, max_candidates);
            fit.p_value = ks_p_value(fit, values, bootstraps, seed, threads);
            return fit_to_dict(fit);
        },
        py::arg("values"), py::arg("bootstraps") = 1000, py::arg("seed") = 1,
        py::arg("threads") = 1, py::arg("min_tail") = 50,
        py::arg("max_candidates") = 64,
        "Fit plus semi-parametric bootstrap goodness-of-fit p-value.");

    m.def(
        "sample_power_law",
        [](std::size_t n, double gamma, long long x_min, std::uint64_t seed) {
            Rng rng(seed);
            return sample_powerlaw(n, gamma, x_min, rng);
        },
        py::arg("n"), py::arg("gamma"), py::arg("x_min") = 1,
        py::arg("seed") = 1);

    // ---- ranking metrics ---------------------------------------------------
    m.def("rank_of_positive", &rank_of_positive, py::arg("positive_score"),
          py::arg("negative_scores"),
          "1-based rank; ties count against the positive.");
    m.def("hit_rate_at_k", &hit_rate_at_k, py::arg("ranks"), py::arg("k"));
    m.def("ndcg_at_k", &ndcg_at_k, py::arg("ranks"), py::arg("k"));

    // ---- end-to-end pipeline -----------------------------------------------
    m.def(
        "train_and_evaluate",
        [](const std::vector<std::tuple<std::string, std::string, double,
                                        long long>>& rows,
           const std::string& loss, const std::string& geometry,
           const std::string& user_mode, const std::string& score_mode,
           int dim, int negatives, int epochs, double lr, double lambda_reg,
           const std::string& init_scheme, double init_width,
           std::uint64_t seed, int eval_negatives, int k) {
            std::vector<Interaction> inter;
            inter.reserve(rows.size());
            for (const auto& [u, i, r, t] : rows)
                inter.push_back(make_interaction(u, i, r, t));
            InteractionDataset ds = chronological_split(inter);

            ModelConfig mcfg;
            mcfg.loss = loss_from_string(loss);
            mcfg.geometry = geometry_from_string(geometry);
            mcfg.user_mode = user_mode_from_string(user_mode);
            mcfg.score_mode = score_mode_from_string(score_mode);
            mcfg.dim = dim;
            mcfg.negatives_per_positive = negatives;
            mcfg.epochs = epochs;
            mcfg.lambda_reg = lambda_reg;
            mcfg.seed = seed;
            validate_config(mcfg);
            RsgdConfig ocfg;
            ocfg.learning_rate = lr;
            InitConfig icfg;
            icfg.scheme = init_scheme_from_string(init_scheme);
            icfg.width = init_width;

            TrainedModel model = train(ds, mcfg, ocfg, icfg);
            ModelScorer scorer(model.table, model.config, ds);
            EvalConfig ec;
            ec.k = k;
            ec.num_negatives = eval_negatives;
            ec.seed = seed;
            EvalResult res = evaluate(scorer, SplitPart::test, ds, ec);

            py::dict out;
            out["hr_at_k"] = res.hr_at_k;
            out["ndcg_at_k"] = res.ndcg_at_k;
            out["users_evaluated"] = res.users_evaluated;
            out["users_skipped"] = res.users_skipped;
            out["final_loss"] = model.log.empty() ? 0.0
                                                  : model.log.back().mean_loss;
            py::list curve;
            for (const auto& e : model.log) curve.append(e.val_hr);
            out["val_hr_curve"] = curve;
            out["item_ids"] = ds.item_ids;
            out["user_ids"] = ds.user_ids;
            out["items"] = rows_of(model.table.items, model.table.row_len());
            out["users"] = rows_of(model.table.users, model.table.row_len());
            return out;
        },
        py::arg("rows"), py::arg("loss") = "wmrb",
        py::arg("geometry") = "hyperboloid", py::arg("user_mode") = "symmetric",
        py::arg("score_mode") = "neg_inner", py::arg("dim") = 8,
        py::arg("negatives") = 20, py::arg("epochs") = 3, py::arg("lr") = 0.1,
        py::arg("lambda_reg") = 0.01, py::arg("init_scheme") = "cube_lift",
        py::arg("init_width") = 0.001, py::arg("seed") = 1,
        py::arg("eval_negatives") = 50, py::arg("k") = 10,
        "Split chronologically, train, and score the test split; rows are "
        "(user, item, rating, timestamp) tuples.");
}
