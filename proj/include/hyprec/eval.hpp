#pragma once
// HR@k / NDCG@k under the sampled-negatives protocol: each held-out positive
// is ranked against num_negatives uniformly sampled unseen items.

#include <cstdint>
#include <vector>

#include "hyprec/data.hpp"

namespace hyprec {

struct EvalConfig {
    int k = 10;
    int num_negatives = 100;
    std::uint64_t seed = 0;
    // invariant: k <= num_negatives + 1
};

struct EvalResult {
    double hr_at_k = 0.0;
    double ndcg_at_k = 0.0;
    std::size_t users_evaluated = 0;
    std::size_t users_skipped = 0;       // positives outside the train catalog
    std::vector<int> evaluated_users;    // dense user ids, ascending
    std::vector<int> per_user_ranks;     // aligned with evaluated_users
};

enum class SplitPart { validation, test };

// 1-based rank of the positive among 1 + |negatives| candidates under
// descending score; ties count against the positive. Throws on non-finite
// scores (a missing score must not silently place a candidate).
int rank_of_positive(double positive_score,
                     const std::vector<double>& negative_scores);

double hit_rate_at_k(const std::vector<int>& ranks, int k);

// leave-one-out NDCG: per-user gain 1/log2(rank+1) when rank <= k else 0;
// the single-relevant-item ideal is 1, so the mean gain is the NDCG
double ndcg_at_k(const std::vector<int>& ranks, int k);

// Scores one user's candidate items in a single call (so per-user work such
// as an aggregated user representation happens once). Must be thread-safe
// for concurrent users.
class ItemScorer {
  public:
    virtual ~ItemScorer() = default;
    virtual void score(int user, const std::vector<int>& items,
                       std::vector<double>& out) const = 0;
};

// Per user: draw negatives (excluding all of the user's interactions, from a
// per-user stream so draws are identical across epochs), rank the held-out
// positive, aggregate. Held-out items absent from the train catalog are
// skipped with a count. Result is independent of the thread count.
EvalResult evaluate(const ItemScorer& scorer, SplitPart part,
                    const InteractionDataset& dataset, const EvalConfig& cfg,
                    int threads = 1);

}  // namespace hyprec
