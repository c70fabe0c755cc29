#include "hyprec/eval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

namespace hyprec {

int rank_of_positive(double positive_score,
                     const std::vector<double>& negative_scores) {
    if (!std::isfinite(positive_score))
        throw std::runtime_error("rank_of_positive: non-finite positive score");
    int rank = 1;
    for (double s : negative_scores) {
        if (!std::isfinite(s))
            throw std::runtime_error(
                "rank_of_positive: non-finite negative score");
        if (s >= positive_score) ++rank;
    }
    return rank;
}

namespace {

void check_ranks(const std::vector<int>& ranks, int k, const char* what) {
    if (ranks.empty())
        throw std::runtime_error(std::string(what) +
                                 " is undefined on an empty rank list");
    if (k < 1)
        throw std::invalid_argument(std::string(what) + " needs k >= 1");
    for (int r : ranks)
        if (r < 1)
            throw std::invalid_argument(std::string(what) +
                                        " needs 1-based ranks");
}

}  // namespace

double hit_rate_at_k(const std::vector<int>& ranks, int k) {
    check_ranks(ranks, k, "hit_rate_at_k");
    std::size_t hits = 0;
    for (int r : ranks)
        if (r <= k) ++hits;
    return static_cast<double>(hits) / static_cast<double>(ranks.size());
}

double ndcg_at_k(const std::vector<int>& ranks, int k) {
    check_ranks(ranks, k, "ndcg_at_k");
    double acc = 0.0;
    for (int r : ranks)
        if (r <= k) acc += 1.0 / std::log2(static_cast<double>(r) + 1.0);
    return acc / static_cast<double>(ranks.size());
}

EvalResult evaluate(const ItemScorer& scorer, SplitPart part,
                    const InteractionDataset& dataset, const EvalConfig& cfg,
                    int threads) {
    if (cfg.k < 1 || cfg.num_negatives < 1)
        throw std::invalid_argument("evaluate: k and num_negatives must be >= 1");
    if (cfg.k > cfg.num_negatives + 1)
        throw std::invalid_argument(
            "evaluate: k exceeds the candidate count (num_negatives + 1)");

    const std::size_t n_users = dataset.user_count();
    if (n_users == 0) throw std::runtime_error("evaluate: dataset has no users");
    const std::vector<int>& held_out =
        part == SplitPart::validation ? dataset.validation : dataset.test;
    if (held_out.size() != n_users)
        throw std::runtime_error("evaluate: dataset lacks the requested split");

    // rank per user, 0 = skipped (positive unseen in training)
    std::vector<int> rank_by_user(n_users, 0);
    auto run_range = [&](std::size_t lo, std::size_t hi) {
        std::vector<int> items;
        std::vector<double> scores;
        std::vector<double> neg_scores;
        for (std::size_t u = lo; u < hi; ++u) {
            const int positive = held_out[u];
            if (!dataset.in_catalog[static_cast<std::size_t>(positive)])
                continue;  // removal rule: unseen positives are not evaluable
            Rng rng(cfg.seed, rng_stream::eval_negatives,
                    static_cast<std::uint64_t>(u));
            std::vector<int> negatives = sample_negatives(
                static_cast<int>(u), cfg.num_negatives, dataset, rng);
            items.clear();
            items.push_back(positive);
            items.insert(items.end(), negatives.begin(), negatives.end());
            scorer.score(static_cast<int>(u), items, scores);
            if (scores.size() != items.size())
                throw std::runtime_error(
                    "evaluate: scorer returned " +
                    std::to_string(scores.size()) + " scores for " +
                    std::to_string(items.size()) + " items");
            neg_scores.assign(scores.begin() + 1, scores.end());
            rank_by_user[u] = rank_of_positive(scores[0], neg_scores);
        }
    };

    int workers = std::max(1, threads);
    workers = static_cast<int>(std::min<std::size_t>(
        static_cast<std::size_t>(workers), n_users));
    if (workers == 1) {
        run_range(0, n_users);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t) {
            std::size_t lo = n_users * static_cast<std::size_t>(t) /
                             static_cast<std::size_t>(workers);
            std::size_t hi = n_users * static_cast<std::size_t>(t + 1) /
                             static_cast<std::size_t>(workers);
            pool.emplace_back(run_range, lo, hi);
        }
        for (std::thread& t : pool) t.join();
    }

    EvalResult res;
    for (std::size_t u = 0; u < n_users; ++u) {
        if (rank_by_user[u] == 0) {
            ++res.users_skipped;
            continue;
        }
        res.evaluated_users.push_back(static_cast<int>(u));
        res.per_user_ranks.push_back(rank_by_user[u]);
    }
    if (res.per_user_ranks.empty())
        throw std::runtime_error(
            "evaluate: no evaluable users (every held-out item is outside the "
            "training catalog)");
    res.users_evaluated = res.per_user_ranks.size();
    res.hr_at_k = hit_rate_at_k(res.per_user_ranks, cfg.k);
    res.ndcg_at_k = ndcg_at_k(res.per_user_ranks, cfg.k);
    return res;
}

}  // namespace hyprec
