#include "hyprec/recommender.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "hyprec/rng.hpp"

namespace hyprec {

std::string to_string(LossKind k) {
    return k == LossKind::bpr ? "bpr" : "wmrb";
}
std::string to_string(UserMode m) {
    return m == UserMode::symmetric ? "symmetric" : "asymmetric";
}
std::string to_string(ScoreMode m) {
    return m == ScoreMode::neg_distance ? "neg_distance" : "neg_inner";
}
std::string to_string(InitScheme s) {
    switch (s) {
        case InitScheme::cube_lift: return "cube_lift";
        case InitScheme::poincare_ball: return "poincare_ball";
        default: return "frequency_radius";
    }
}

namespace {

[[noreturn]] void bad_enum(const char* what, const std::string& s) {
    throw std::invalid_argument(std::string("unknown ") + what + ": '" + s + "'");
}

}  // namespace

Geometry geometry_from_string(const std::string& s) {
    if (s == "hyperboloid") return Geometry::hyperboloid;
    if (s == "euclidean") return Geometry::euclidean;
    bad_enum("geometry", s);
}
LossKind loss_from_string(const std::string& s) {
    if (s == "bpr") return LossKind::bpr;
    if (s == "wmrb") return LossKind::wmrb;
    bad_enum("loss", s);
}
UserMode user_mode_from_string(const std::string& s) {
    if (s == "symmetric") return UserMode::symmetric;
    if (s == "asymmetric") return UserMode::asymmetric;
    bad_enum("user_mode", s);
}
ScoreMode score_mode_from_string(const std::string& s) {
    if (s == "neg_distance") return ScoreMode::neg_distance;
    if (s == "neg_inner") return ScoreMode::neg_inner;
    bad_enum("score_mode", s);
}
InitScheme init_scheme_from_string(const std::string& s) {
    if (s == "cube_lift") return InitScheme::cube_lift;
    if (s == "poincare_ball") return InitScheme::poincare_ball;
    if (s == "frequency_radius") return InitScheme::frequency_radius;
    bad_enum("init_scheme", s);
}

void validate_config(const ModelConfig& cfg) {
    if (cfg.dim < 2) throw std::invalid_argument("config: dim must be >= 2");
    if (cfg.negatives_per_positive < 1)
        throw std::invalid_argument("config: negatives must be >= 1");
    if (cfg.loss == LossKind::bpr && cfg.negatives_per_positive != 1)
        throw std::invalid_argument(
            "config: bpr pairs one negative per positive; set negatives=1 or "
            "switch to wmrb");
    if (cfg.slack <= 0.0) throw std::invalid_argument("config: slack must be > 0");
    if (cfg.lambda_reg < 0.0)
        throw std::invalid_argument("config: lambda must be >= 0");
    if (cfg.epochs < 1) throw std::invalid_argument("config: epochs must be >= 1");
    if (cfg.batch_size < 1)
        throw std::invalid_argument("config: batch_size must be >= 1");
    if (cfg.lr_decay < 0.0 || cfg.lr_decay >= 1.0)
        throw std::invalid_argument("config: lr_decay must be in [0, 1)");
}

Vec user_representation(const std::vector<int>& history,
                        const EmbeddingTable& emb) {
    return build_user_repr(history, emb).point;
}

ModelScorer::ModelScorer(const EmbeddingTable& table, const ModelConfig& cfg,
                         const InteractionDataset& dataset)
    : table_(table), cfg_(cfg), dataset_(dataset) {}

void ModelScorer::score(int user, const std::vector<int>& items,
                        std::vector<double>& out) const {
    const std::size_t len = table_.row_len();
    const double* u;
    Vec aggregated;
    if (cfg_.user_mode == UserMode::symmetric) {
        u = table_.user(static_cast<std::size_t>(user));
    } else {
        aggregated = user_representation(
            dataset_.train[static_cast<std::size_t>(user)], table_);
        u = aggregated.data();
    }
    out.resize(items.size());
    for (std::size_t i = 0; i < items.size(); ++i)
        out[i] = hyprec::score(u, table_.item(static_cast<std::size_t>(items[i])),
                               len, cfg_.geometry, cfg_.score_mode);
}

namespace {

bool any_nonzero(const Vec& v) {
    for (double x : v)
        if (x != 0.0) return true;
    return false;
}

void accumulate(std::unordered_map<int, Vec>& acc, int id, const Vec& g,
                std::size_t len) {
    auto [it, inserted] = acc.try_emplace(id);
    if (inserted) it->second.assign(len, 0.0);
    Vec& target = it->second;
    for (std::size_t c = 0; c < len; ++c) target[c] += g[c];
}

// Trainer-side regularisation for one wmrb sample (the loss function keeps
// it out so its gradients stay bare rank gradients): positive, user point
// (symmetric mode), and the negatives in the active set — the parameters this
// sample's objective actually involves. Returns the loss contribution.
double apply_wmrb_reg(LossGradients& g, const EmbeddingTable& emb, int user,
                      int positive, const std::vector<int>& negatives,
                      UserMode umode, double lambda, double floor) {
    const std::size_t len = emb.row_len();
    const Geometry geom = emb.geometry;
    double reg = 0.0;
    Vec tmp(len);
    auto add = [&](const double* x, Vec& target) {
        reg += reg_term(x, len, geom);
        reg_gradient(x, len, geom, floor, tmp.data());
        for (std::size_t c = 0; c < len; ++c) target[c] += lambda * tmp[c];
    };
    add(emb.item(static_cast<std::size_t>(positive)), g.wrt_positive);
    for (std::size_t k = 0; k < negatives.size(); ++k)
        if (any_nonzero(g.wrt_negatives[k]))
            add(emb.item(static_cast<std::size_t>(negatives[k])),
                g.wrt_negatives[k]);
    if (umode == UserMode::symmetric)
        add(emb.user(static_cast<std::size_t>(user)),
            g.wrt_user_items[0].second);
    return lambda * reg;
}

}  // namespace

TrainedModel train(const InteractionDataset& dataset, const ModelConfig& mcfg,
                   const RsgdConfig& ocfg, const InitConfig& icfg, int threads,
                   std::ostream* progress) {
    validate_config(mcfg);
    if (ocfg.learning_rate <= 0.0)
        throw std::invalid_argument("train: learning_rate must be > 0");
    if (dataset.user_count() == 0 || dataset.item_count() == 0)
        throw std::runtime_error("train: empty dataset");

    TrainedModel model;
    model.config = mcfg;
    model.optimizer = ocfg;
    model.init = icfg;
    model.table = init_embeddings(dataset.item_count(), mcfg.dim, mcfg.geometry,
                                  icfg, dataset.frequencies, mcfg.seed,
                                  /*stream_salt=*/0);
    if (mcfg.user_mode == UserMode::symmetric) {
        // frequency_radius reads per-id counts; a user's count is its history
        std::vector<std::int64_t> user_freq(dataset.user_count());
        for (std::size_t u = 0; u < dataset.user_count(); ++u)
            user_freq[u] = static_cast<std::int64_t>(dataset.train[u].size());
        EmbeddingTable users = init_embeddings(
            dataset.user_count(), mcfg.dim, mcfg.geometry, icfg, user_freq,
            mcfg.seed, /*stream_salt=*/1);
        model.table.users = std::move(users.items);
    }

    std::vector<std::pair<int, int>> pairs;  // (user, positive item)
    std::vector<std::vector<int>> sorted_hist(dataset.user_count());
    for (std::size_t u = 0; u < dataset.user_count(); ++u) {
        sorted_hist[u] = dataset.train[u];
        std::sort(sorted_hist[u].begin(), sorted_hist[u].end());
        for (int item : dataset.train[u])
            pairs.emplace_back(static_cast<int>(u), item);
    }
    if (pairs.empty())
        throw std::runtime_error("train: no training interactions");

    const bool has_validation =
        dataset.validation.size() == dataset.user_count() &&
        !dataset.validation.empty();
    const std::size_t len = model.table.row_len();
    const bool hyp = mcfg.geometry == Geometry::hyperboloid;
    const double floor = ocfg.singularity_floor;
    const std::size_t batch = static_cast<std::size_t>(mcfg.batch_size);

    std::unordered_map<int, Vec> item_acc, user_acc;
    std::vector<int> negatives;
    for (int e = 0; e < mcfg.epochs; ++e) {
        const auto t0 = std::chrono::steady_clock::now();
        const double lr =
            ocfg.learning_rate * std::pow(1.0 - mcfg.lr_decay, double(e));
        Rng shuffle_rng(mcfg.seed, rng_stream::epoch_shuffle,
                        static_cast<std::uint64_t>(e));
        shuffle_rng.shuffle(pairs);
        Rng neg_rng(mcfg.seed, rng_stream::train_negatives,
                    static_cast<std::uint64_t>(e));

        double loss_sum = 0.0;
        std::size_t done = 0;
        std::size_t batch_index = 0;
        while (done < pairs.size()) {
            const std::size_t bend = std::min(done + batch, pairs.size());
            const auto [first_user, first_item] = pairs[done];
            try {
                item_acc.clear();
                user_acc.clear();
                for (std::size_t p = done; p < bend; ++p) {
                    const auto [u, pos] = pairs[p];
                    sample_train_negatives(sorted_hist[static_cast<std::size_t>(u)],
                                           mcfg.negatives_per_positive, dataset,
                                           neg_rng, negatives);
                    LossGradients g;
                    if (mcfg.loss == LossKind::bpr) {
                        g = bpr_gradients(
                            Triplet{u, pos, negatives[0]}, model.table,
                            dataset.train[static_cast<std::size_t>(u)],
                            mcfg.user_mode, mcfg.score_mode, mcfg.lambda_reg,
                            floor);
                    } else {
                        WmrbBatch wb;
                        wb.user = u;
                        wb.positive_item = pos;
                        wb.negative_items = negatives;
                        wb.slack = mcfg.slack;
                        g = wmrb_gradients(
                            wb, model.table,
                            dataset.train[static_cast<std::size_t>(u)],
                            mcfg.user_mode, mcfg.score_mode, floor);
                        if (mcfg.lambda_reg > 0.0)
                            g.loss += apply_wmrb_reg(
                                g, model.table, u, pos, negatives,
                                mcfg.user_mode, mcfg.lambda_reg, floor);
                    }
                    if (!std::isfinite(g.loss))
                        throw std::runtime_error("non-finite loss");
                    loss_sum += g.loss;
                    accumulate(item_acc, pos, g.wrt_positive, len);
                    for (std::size_t k = 0; k < negatives.size(); ++k)
                        if (any_nonzero(g.wrt_negatives[k]))
                            accumulate(item_acc, negatives[k],
                                       g.wrt_negatives[k], len);
                    for (const auto& [id, vec] : g.wrt_user_items) {
                        if (mcfg.user_mode == UserMode::symmetric)
                            accumulate(user_acc, id, vec, len);
                        else
                            accumulate(item_acc, id, vec, len);
                    }
                }
                const double scale = 1.0 / static_cast<double>(bend - done);
                auto apply = [&](double* x, Vec& grad) {
                    for (double& v : grad) v *= scale;
                    if (hyp)
                        rsgd_step(x, grad.data(), len, lr, ocfg.clip_norm);
                    else
                        sgd_step(x, grad.data(), len, lr, ocfg.clip_norm);
                };
                for (auto& [id, grad] : item_acc)
                    apply(model.table.item(static_cast<std::size_t>(id)), grad);
                for (auto& [id, grad] : user_acc)
                    apply(model.table.user(static_cast<std::size_t>(id)), grad);
            } catch (const std::exception& ex) {
                throw std::runtime_error(
                    "training aborted at epoch " + std::to_string(e + 1) +
                    ", batch " + std::to_string(batch_index) + " (user '" +
                    dataset.user_ids[static_cast<std::size_t>(first_user)] +
                    "', positive item '" +
                    dataset.item_ids[static_cast<std::size_t>(first_item)] +
                    "'): " + ex.what());
            }
            done = bend;
            ++batch_index;
        }

        TrainingLogEntry entry;
        entry.epoch = e + 1;
        entry.mean_loss = loss_sum / static_cast<double>(pairs.size());
        if (has_validation) {
            ModelScorer scorer(model.table, mcfg, dataset);
            EvalConfig ec;
            ec.k = 10;
            ec.num_negatives = 100;
            ec.seed = mcfg.seed;
            EvalResult r =
                evaluate(scorer, SplitPart::validation, dataset, ec, threads);
            entry.val_hr = r.hr_at_k;
            entry.val_ndcg = r.ndcg_at_k;
        }
        entry.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        model.log.push_back(entry);
        if (progress) {
            char buf[160];
            if (has_validation)
                std::snprintf(buf, sizeof buf,
                              "epoch %d/%d  mean_loss %.6g  val_hr@10 %.4f  "
                              "val_ndcg@10 %.4f  %.1fs",
                              entry.epoch, mcfg.epochs, entry.mean_loss,
                              entry.val_hr, entry.val_ndcg, entry.seconds);
            else
                std::snprintf(buf, sizeof buf,
                              "epoch %d/%d  mean_loss %.6g  %.1fs",
                              entry.epoch, mcfg.epochs, entry.mean_loss,
                              entry.seconds);
            *progress << buf << std::endl;
        }
    }
    return model;
}

namespace {

std::vector<int> rank_by_point(const EmbeddingTable& table,
                               const ModelConfig& cfg, const double* point,
                               const std::vector<int>& candidates) {
    if (candidates.empty()) return {};
    std::string missing;
    for (int c : candidates) {
        if (c < 0 || static_cast<std::size_t>(c) >= table.item_count()) {
            if (!missing.empty()) missing += ", ";
            missing += std::to_string(c);
        }
    }
    if (!missing.empty())
        throw std::runtime_error("rank_items: unknown candidate ids: " + missing);

    const std::size_t len = table.row_len();
    std::vector<std::pair<double, int>> scored;
    scored.reserve(candidates.size());
    for (int c : candidates)
        scored.emplace_back(score(point, table.item(static_cast<std::size_t>(c)),
                                  len, cfg.geometry, cfg.score_mode),
                            c);
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::vector<int> out;
    out.reserve(scored.size());
    for (const auto& [s, c] : scored) out.push_back(c);
    return out;
}

}  // namespace

std::vector<int> rank_items(const TrainedModel& model,
                            const InteractionDataset& dataset, int user,
                            const std::vector<int>& candidates) {
    if (user < 0 || static_cast<std::size_t>(user) >= dataset.user_count())
        throw std::runtime_error("rank_items: unknown user id " +
                                 std::to_string(user));
    if (model.config.user_mode == UserMode::symmetric)
        return rank_by_point(model.table, model.config,
                             model.table.user(static_cast<std::size_t>(user)),
                             candidates);
    Vec point = user_representation(
        dataset.train[static_cast<std::size_t>(user)], model.table);
    return rank_by_point(model.table, model.config, point.data(), candidates);
}

std::vector<int> rank_items(const TrainedModel& model,
                            const std::vector<int>& history,
                            const std::vector<int>& candidates) {
    Vec point = user_representation(history, model.table);
    return rank_by_point(model.table, model.config, point.data(), candidates);
}

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

PointModel native_model(Geometry g) {
    return g == Geometry::hyperboloid ? PointModel::hyperboloid
                                      : PointModel::euclidean;
}

}  // namespace

void save_model(const std::string& dir, const TrainedModel& model,
                const InteractionDataset& dataset) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    {
        std::ofstream out(dir + "/config.txt");
        if (!out)
            throw std::runtime_error("cannot write " + dir + "/config.txt");
        const ModelConfig& c = model.config;
        out << "geometry=" << to_string(c.geometry) << "\n";
        out << "user_mode=" << to_string(c.user_mode) << "\n";
        out << "loss=" << to_string(c.loss) << "\n";
        out << "score_mode=" << to_string(c.score_mode) << "\n";
        out << "dim=" << c.dim << "\n";
        out << "negatives=" << c.negatives_per_positive << "\n";
        out << "slack=" << fmt17(c.slack) << "\n";
        out << "lambda=" << fmt17(c.lambda_reg) << "\n";
        out << "epochs=" << c.epochs << "\n";
        out << "batch_size=" << c.batch_size << "\n";
        out << "lr_decay=" << fmt17(c.lr_decay) << "\n";
        out << "seed=" << c.seed << "\n";
        out << "learning_rate=" << fmt17(model.optimizer.learning_rate) << "\n";
        out << "clip_norm=" << fmt17(model.optimizer.clip_norm) << "\n";
        out << "init_scheme=" << to_string(model.init.scheme) << "\n";
        out << "init_width=" << fmt17(model.init.width) << "\n";
    }
    {
        std::ofstream out(dir + "/training_log.txt");
        if (!out)
            throw std::runtime_error("cannot write " + dir +
                                     "/training_log.txt");
        out << "# epoch mean_loss val_hr@10 val_ndcg@10\n";
        for (const TrainingLogEntry& e : model.log)
            out << e.epoch << " " << fmt17(e.mean_loss) << " "
                << fmt17(e.val_hr) << " " << fmt17(e.val_ndcg) << "\n";
    }
    write_embeddings(dir + "/items.emb", model.table, dataset.item_ids,
                     native_model(model.config.geometry), false);
    if (model.config.user_mode == UserMode::symmetric)
        write_embeddings(dir + "/users.emb", model.table, dataset.user_ids,
                         native_model(model.config.geometry), true);
}

namespace {

// rebind file rows (arbitrary order, original string ids) to dense ids
void bind_rows(const LoadedEmbeddings& le,
               const std::unordered_map<std::string, int>& index,
               const std::vector<std::string>& names, const char* what,
               std::size_t len, std::vector<double>& out) {
    if (le.count() != names.size())
        throw std::runtime_error(
            std::string("model holds ") + std::to_string(le.count()) + " " +
            what + " rows but the dataset has " + std::to_string(names.size()));
    out.assign(names.size() * len, 0.0);
    std::vector<char> seen(names.size(), 0);
    for (std::size_t r = 0; r < le.count(); ++r) {
        auto it = index.find(le.ids[r]);
        if (it == index.end())
            throw std::runtime_error(std::string("model ") + what + " '" +
                                     le.ids[r] +
                                     "' does not appear in the dataset; was "
                                     "the split configuration changed?");
        const std::size_t dense = static_cast<std::size_t>(it->second);
        if (seen[dense])
            throw std::runtime_error(std::string("duplicate ") + what +
                                     " id '" + le.ids[r] + "' in model file");
        seen[dense] = 1;
        for (std::size_t c = 0; c < len; ++c)
            out[dense * len + c] = le.rows[r * len + c];
    }
}

}  // namespace

TrainedModel load_model(const std::string& dir,
                        const InteractionDataset& dataset) {
    std::ifstream in(dir + "/config.txt");
    if (!in)
        throw std::runtime_error("cannot open " + dir + "/config.txt");
    TrainedModel model;
    std::string line;
    while (std::getline(in, line)) {
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        ModelConfig& c = model.config;
        if (key == "geometry") c.geometry = geometry_from_string(value);
        else if (key == "user_mode") c.user_mode = user_mode_from_string(value);
        else if (key == "loss") c.loss = loss_from_string(value);
        else if (key == "score_mode") c.score_mode = score_mode_from_string(value);
        else if (key == "dim") c.dim = std::stoi(value);
        else if (key == "negatives") c.negatives_per_positive = std::stoi(value);
        else if (key == "slack") c.slack = std::stod(value);
        else if (key == "lambda") c.lambda_reg = std::stod(value);
        else if (key == "epochs") c.epochs = std::stoi(value);
        else if (key == "batch_size") c.batch_size = std::stoi(value);
        else if (key == "lr_decay") c.lr_decay = std::stod(value);
        else if (key == "seed") c.seed = std::stoull(value);
        else if (key == "learning_rate")
            model.optimizer.learning_rate = std::stod(value);
        else if (key == "clip_norm") model.optimizer.clip_norm = std::stod(value);
        else if (key == "init_scheme")
            model.init.scheme = init_scheme_from_string(value);
        else if (key == "init_width") model.init.width = std::stod(value);
        // unknown keys are ignored for forward compatibility
    }
    validate_config(model.config);

    model.table.geometry = model.config.geometry;
    model.table.dim = model.config.dim;
    model.table.frequencies = dataset.frequencies;
    const std::size_t len = model.table.row_len();

    LoadedEmbeddings items = read_embeddings(dir + "/items.emb");
    if (items.model != native_model(model.config.geometry))
        throw std::runtime_error(dir + "/items.emb stores " +
                                 to_string(items.model) +
                                 " coordinates; expected " +
                                 to_string(native_model(model.config.geometry)));
    if (items.dim != model.config.dim)
        throw std::runtime_error(dir + "/items.emb dimension " +
                                 std::to_string(items.dim) +
                                 " does not match config dim " +
                                 std::to_string(model.config.dim));
    bind_rows(items, dataset.item_index, dataset.item_ids, "item", len,
              model.table.items);
    if (model.config.user_mode == UserMode::symmetric) {
        LoadedEmbeddings users = read_embeddings(dir + "/users.emb");
        if (users.model != native_model(model.config.geometry) ||
            users.dim != model.config.dim)
            throw std::runtime_error(dir +
                                     "/users.emb does not match the model "
                                     "geometry/dimension");
        bind_rows(users, dataset.user_index, dataset.user_ids, "user", len,
                  model.table.users);
    }
    return model;
}

void export_embeddings(const TrainedModel& model,
                       const InteractionDataset& dataset, PointModel target,
                       const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const std::string suffix = to_string(target) + ".emb";
    write_embeddings(dir + "/items_" + suffix, model.table, dataset.item_ids,
                     target, false);
    if (model.config.user_mode == UserMode::symmetric)
        write_embeddings(dir + "/users_" + suffix, model.table,
                         dataset.user_ids, target, true);
}

}  // namespace hyprec
