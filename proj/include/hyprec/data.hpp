#pragma once
// Interaction ingestion, positivity/min-interaction filtering, chronological
// leave-one-out splitting, and negative sampling.

#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hyprec/rng.hpp"

namespace hyprec {

enum class InputFormat { csv_rating, csv_implicit };

struct Interaction {
    std::string user;
    std::string item;
    double rating = 0.0;
    bool has_rating = false;
    long long timestamp = 0;
};

// Accepts comma-, tab- or space-separated fields:
//   csv_rating:   user,item,rating,timestamp
//   csv_implicit: user,item,timestamp
// A non-numeric first row is treated as a header and skipped. File order is
// preserved (it is the timestamp tie-break). Malformed rows and empty files
// are errors naming the line.
std::vector<Interaction> load_interactions(const std::string& path,
                                           InputFormat format);

// keeps interactions with rating >= min_rating; throws if ratings are absent
std::vector<Interaction> filter_positive(std::vector<Interaction> interactions,
                                         double min_rating);

// retains users with strictly more than k interactions (single pass)
std::vector<Interaction> filter_min_interactions(
    std::vector<Interaction> interactions, int k);

struct InteractionDataset {
    // dense ids assigned in first-appearance order over retained users
    std::vector<std::string> user_ids;  // dense user -> original id
    std::vector<std::string> item_ids;  // dense item -> original id
    std::unordered_map<std::string, int> user_index;
    std::unordered_map<std::string, int> item_index;

    std::vector<std::vector<int>> train;  // per user, time-ordered item lists
    std::vector<int> validation;          // per user, second most recent
    std::vector<int> test;                // per user, most recent

    std::vector<std::int64_t> frequencies;  // per item, train occurrences only
    std::vector<int> catalog;               // items appearing in train
    std::vector<char> in_catalog;           // per item flag

    std::size_t excluded_users = 0;  // dropped for having < 3 interactions

    std::size_t user_count() const { return train.size(); }
    std::size_t item_count() const { return item_ids.size(); }
};

// Per user: most recent -> test, second most recent -> validation, rest ->
// train (timestamp ties broken by file order). Users with fewer than 3
// interactions are excluded and counted. Frequencies and the catalog come
// from train only.
InteractionDataset chronological_split(const std::vector<Interaction>& interactions);

// n distinct items uniform over catalog minus the user's train/validation/
// test items; throws (naming the user) when the eligible pool is too small.
std::vector<int> sample_negatives(int user, int n,
                                  const InteractionDataset& dataset, Rng& rng);

// train-time variant: excludes only the user's train history, duplicates
// allowed (uniform draws over the non-interacted catalog)
void sample_train_negatives(const std::vector<int>& history_sorted, int n,
                            const InteractionDataset& dataset, Rng& rng,
                            std::vector<int>& out);

// split manifest + dense-id map persistence (see cli): `split.txt`, `ids.txt`;
// the manifest records counts, filter settings, the seed, and every user's
// validation/test holdout so an experiment can be replayed exactly
void write_split_manifest(const std::string& path,
                          const InteractionDataset& dataset,
                          double min_rating, bool rating_filter_applied,
                          int min_interactions, std::uint64_t seed);
void write_id_map(const std::string& path, const InteractionDataset& dataset);

// verifies a manifest produced by write_split_manifest against `dataset`;
// throws on any mismatch (config drift between split and train/evaluate)
void check_split_manifest(const std::string& path,
                          const InteractionDataset& dataset);

}  // namespace hyprec
