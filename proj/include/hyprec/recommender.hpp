#pragma once
// Model assembly and the training loop: symmetric/asymmetric user modes on
// the hyperboloid or flat geometry, BPR or WMRB objective, Riemannian or
// plain SGD, per-epoch validation metrics, and model-directory persistence.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hyprec/data.hpp"
#include "hyprec/embedding.hpp"
#include "hyprec/eval.hpp"
#include "hyprec/losses.hpp"
#include "hyprec/optimizer.hpp"

namespace hyprec {

enum class LossKind { bpr, wmrb };

std::string to_string(LossKind k);
std::string to_string(UserMode m);
std::string to_string(ScoreMode m);
std::string to_string(InitScheme s);
Geometry geometry_from_string(const std::string& s);
LossKind loss_from_string(const std::string& s);
UserMode user_mode_from_string(const std::string& s);
ScoreMode score_mode_from_string(const std::string& s);
InitScheme init_scheme_from_string(const std::string& s);

struct ModelConfig {
    Geometry geometry = Geometry::hyperboloid;
    UserMode user_mode = UserMode::symmetric;
    LossKind loss = LossKind::wmrb;
    ScoreMode score_mode = ScoreMode::neg_inner;
    int dim = 50;
    int negatives_per_positive = 100;  // bpr requires exactly 1
    double slack = 1.0;                // wmrb margin
    double lambda_reg = 0.01;
    int epochs = 10;
    int batch_size = 1;
    double lr_decay = 0.0;  // per-epoch multiplicative learning-rate decay
    std::uint64_t seed = 0;
};

// throws std::invalid_argument on inconsistent settings (e.g. bpr with
// negatives_per_positive != 1)
void validate_config(const ModelConfig& cfg);

struct TrainingLogEntry {
    int epoch = 0;          // 1-based
    double mean_loss = 0.0;
    double val_hr = -1.0;   // -1 when the dataset carries no validation split
    double val_ndcg = -1.0;
    double seconds = 0.0;   // wall clock; reported live, never persisted
};

struct TrainedModel {
    ModelConfig config;
    RsgdConfig optimizer;
    InitConfig init;
    EmbeddingTable table;  // items + (symmetric mode) users
    std::vector<TrainingLogEntry> log;
};

// Aggregated user point: arithmetic mean (euclidean) or Klein-projected
// Einstein midpoint lifted back to the hyperboloid. Throws on empty history.
Vec user_representation(const std::vector<int>& history,
                        const EmbeddingTable& emb);

// scores items against the model's user point (table row or fresh aggregate)
class ModelScorer : public ItemScorer {
  public:
    ModelScorer(const EmbeddingTable& table, const ModelConfig& cfg,
                const InteractionDataset& dataset);
    void score(int user, const std::vector<int>& items,
               std::vector<double>& out) const override;

  private:
    const EmbeddingTable& table_;
    const ModelConfig& cfg_;
    const InteractionDataset& dataset_;
};

// Shuffled-positives SGD with uniform negatives outside the user's training
// history; per-epoch validation HR@10/NDCG@10 (100 negatives, fixed draws)
// whenever the dataset carries holdout splits. Deterministic given seeds;
// progress lines (with wall-clock) go to *progress when non-null.
TrainedModel train(const InteractionDataset& dataset, const ModelConfig& mcfg,
                   const RsgdConfig& ocfg, const InitConfig& icfg,
                   int threads = 1, std::ostream* progress = nullptr);

// Candidates sorted by descending score, ties broken by ascending dense id.
// Out-of-range candidates raise an error listing every offender.
std::vector<int> rank_items(const TrainedModel& model,
                            const InteractionDataset& dataset, int user,
                            const std::vector<int>& candidates);
std::vector<int> rank_items(const TrainedModel& model,
                            const std::vector<int>& history,
                            const std::vector<int>& candidates);

// Model directory: config.txt (key=value), items.emb, users.emb (symmetric
// only), training_log.txt (epoch, mean loss, validation metrics — wall-clock
// excluded so reruns are byte-identical).
void save_model(const std::string& dir, const TrainedModel& model,
                const InteractionDataset& dataset);

// Rebinds stored embeddings to the dataset's dense ids; every dataset item
// (and user, in symmetric mode) must be present, and vice versa.
TrainedModel load_model(const std::string& dir,
                        const InteractionDataset& dataset);

// Writes items_<target>.emb (+ users_<target>.emb in symmetric mode) under
// dir; hyperboloid tables may target hyperboloid, klein, or poincare.
void export_embeddings(const TrainedModel& model,
                       const InteractionDataset& dataset, PointModel target,
                       const std::string& dir);

}  // namespace hyprec
