#include "hyprec/data.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hyprec {
namespace {

void split_fields(const std::string& line, std::vector<std::string>& out) {
    out.clear();
    std::string cur;
    for (char c : line) {
        if (c == ',' || c == '\t' || c == ' ') {
            if (!cur.empty()) {
                out.push_back(cur);
                cur.clear();
            }
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
}

bool parse_double(const std::string& s, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size();
    } catch (const std::exception&) {
        return false;
    }
}

bool parse_timestamp(const std::string& s, long long& out) {
    // Accept integer seconds or fractional epochs (truncated toward zero).
    try {
        std::size_t pos = 0;
        out = std::stoll(s, &pos);
        if (pos == s.size()) return true;
        double d = 0.0;
        if (!parse_double(s, d)) return false;
        out = static_cast<long long>(d);
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

[[noreturn]] void row_error(const std::string& path, std::size_t line_no,
                            const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

}  // namespace

std::vector<Interaction> load_interactions(const std::string& path,
                                           InputFormat format) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path);

    const std::size_t want =
        format == InputFormat::csv_rating ? 4u : 3u;

    std::vector<Interaction> rows;
    std::vector<std::string> fields;
    std::string line;
    std::size_t line_no = 0;
    bool saw_data = false;
    while (std::getline(in, line)) {
        ++line_no;
        split_fields(line, fields);
        if (fields.empty()) continue;  // blank line
        if (fields.size() != want)
            row_error(path, line_no,
                      "expected " + std::to_string(want) + " fields, got " +
                          std::to_string(fields.size()));

        Interaction r;
        r.user = fields[0];
        r.item = fields[1];
        bool ok = true;
        if (format == InputFormat::csv_rating) {
            ok = parse_double(fields[2], r.rating) &&
                 parse_timestamp(fields[3], r.timestamp);
            r.has_rating = true;
        } else {
            ok = parse_timestamp(fields[2], r.timestamp);
        }
        if (!ok) {
            // a non-numeric first row is a header; anywhere else it is an error
            if (!saw_data && line_no == 1) continue;
            row_error(path, line_no, "non-numeric rating/timestamp field");
        }
        saw_data = true;
        rows.push_back(std::move(r));
    }
    if (rows.empty())
        throw std::runtime_error(path + ": no interactions found");
    return rows;
}

std::vector<Interaction> filter_positive(std::vector<Interaction> interactions,
                                         double min_rating) {
    for (const Interaction& r : interactions)
        if (!r.has_rating)
            throw std::runtime_error(
                "positivity filter requires explicit ratings "
                "(input was loaded as implicit feedback)");
    std::vector<Interaction> kept;
    kept.reserve(interactions.size());
    for (Interaction& r : interactions)
        if (r.rating >= min_rating) kept.push_back(std::move(r));
    return kept;
}

std::vector<Interaction> filter_min_interactions(
    std::vector<Interaction> interactions, int k) {
    std::unordered_map<std::string, int> counts;
    counts.reserve(interactions.size());
    for (const Interaction& r : interactions) ++counts[r.user];
    std::vector<Interaction> kept;
    kept.reserve(interactions.size());
    for (Interaction& r : interactions)
        if (counts[r.user] > k) kept.push_back(std::move(r));
    return kept;
}

InteractionDataset chronological_split(
    const std::vector<Interaction>& interactions) {
    // Group per user preserving file order within each group.
    std::unordered_map<std::string, std::vector<std::size_t>> per_user;
    per_user.reserve(interactions.size());
    std::vector<std::string> user_order;  // first-appearance order
    for (std::size_t idx = 0; idx < interactions.size(); ++idx) {
        auto [it, inserted] =
            per_user.try_emplace(interactions[idx].user);
        if (inserted) user_order.push_back(interactions[idx].user);
        it->second.push_back(idx);
    }

    InteractionDataset ds;
    for (const std::string& user : user_order) {
        std::vector<std::size_t>& rows = per_user[user];
        if (rows.size() < 3) {
            ++ds.excluded_users;
            continue;
        }
        // stable sort by timestamp; equal stamps keep file order
        std::stable_sort(rows.begin(), rows.end(),
                         [&](std::size_t a, std::size_t b) {
                             return interactions[a].timestamp <
                                    interactions[b].timestamp;
                         });
        int u = static_cast<int>(ds.user_ids.size());
        ds.user_ids.push_back(user);
        ds.user_index.emplace(user, u);

        auto item_id = [&](std::size_t row) {
            const std::string& key = interactions[row].item;
            auto [it, inserted] =
                ds.item_index.try_emplace(key, static_cast<int>(ds.item_ids.size()));
            if (inserted) ds.item_ids.push_back(key);
            return it->second;
        };

        std::vector<int> history;
        history.reserve(rows.size() - 2);
        for (std::size_t i = 0; i + 2 < rows.size(); ++i)
            history.push_back(item_id(rows[i]));
        ds.train.push_back(std::move(history));
        ds.validation.push_back(item_id(rows[rows.size() - 2]));
        ds.test.push_back(item_id(rows[rows.size() - 1]));
    }

    ds.frequencies.assign(ds.item_ids.size(), 0);
    for (const std::vector<int>& history : ds.train)
        for (int item : history) ++ds.frequencies[static_cast<std::size_t>(item)];
    ds.in_catalog.assign(ds.item_ids.size(), 0);
    for (std::size_t i = 0; i < ds.frequencies.size(); ++i) {
        if (ds.frequencies[i] > 0) {
            ds.in_catalog[i] = 1;
            ds.catalog.push_back(static_cast<int>(i));
        }
    }
    return ds;
}

std::vector<int> sample_negatives(int user, int n,
                                  const InteractionDataset& dataset, Rng& rng) {
    const std::vector<int>& history = dataset.train[static_cast<std::size_t>(user)];
    std::unordered_set<int> blocked(history.begin(), history.end());
    blocked.insert(dataset.validation[static_cast<std::size_t>(user)]);
    blocked.insert(dataset.test[static_cast<std::size_t>(user)]);

    std::size_t blocked_in_catalog = 0;
    for (int item : blocked)
        if (dataset.in_catalog[static_cast<std::size_t>(item)]) ++blocked_in_catalog;
    const std::size_t eligible = dataset.catalog.size() - blocked_in_catalog;
    if (static_cast<std::size_t>(n) > eligible)
        throw std::runtime_error(
            "user " + dataset.user_ids[static_cast<std::size_t>(user)] +
            ": requested " + std::to_string(n) + " negatives but only " +
            std::to_string(eligible) + " eligible items exist");

    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(n));
    if (static_cast<std::size_t>(n) == eligible ||
        static_cast<std::size_t>(n) * 2 > eligible) {
        // materialize the pool; full set, or partial shuffle for a big draw
        std::vector<int> pool;
        pool.reserve(eligible);
        for (int item : dataset.catalog)
            if (!blocked.count(item)) pool.push_back(item);
        if (static_cast<std::size_t>(n) == eligible) return pool;
        for (int i = 0; i < n; ++i) {
            std::size_t j =
                static_cast<std::size_t>(i) +
                static_cast<std::size_t>(rng.below(
                    static_cast<std::uint64_t>(pool.size() - static_cast<std::size_t>(i))));
            std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
            out.push_back(pool[static_cast<std::size_t>(i)]);
        }
        return out;
    }
    // sparse draw: rejection sampling over the catalog
    std::unordered_set<int> chosen;
    chosen.reserve(static_cast<std::size_t>(n) * 2);
    while (out.size() < static_cast<std::size_t>(n)) {
        int item = dataset.catalog[static_cast<std::size_t>(
            rng.below(static_cast<std::uint64_t>(dataset.catalog.size())))];
        if (blocked.count(item) || chosen.count(item)) continue;
        chosen.insert(item);
        out.push_back(item);
    }
    return out;
}

void sample_train_negatives(const std::vector<int>& history_sorted, int n,
                            const InteractionDataset& dataset, Rng& rng,
                            std::vector<int>& out) {
    out.clear();
    if (history_sorted.size() >= dataset.catalog.size())
        throw std::runtime_error(
            "cannot sample train negatives: user interacted with the whole catalog");
    while (out.size() < static_cast<std::size_t>(n)) {
        int item = dataset.catalog[static_cast<std::size_t>(
            rng.below(static_cast<std::uint64_t>(dataset.catalog.size())))];
        if (std::binary_search(history_sorted.begin(), history_sorted.end(), item))
            continue;
        out.push_back(item);
    }
}

void write_split_manifest(const std::string& path,
                          const InteractionDataset& dataset,
                          double min_rating, bool rating_filter_applied,
                          int min_interactions, std::uint64_t seed) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write split manifest: " + path);
    std::size_t train_total = 0;
    for (const std::vector<int>& h : dataset.train) train_total += h.size();
    out << "hyprec-split v1\n";
    out << "users " << dataset.user_count() << "\n";
    out << "items " << dataset.item_count() << "\n";
    out << "catalog " << dataset.catalog.size() << "\n";
    out << "excluded_users " << dataset.excluded_users << "\n";
    if (rating_filter_applied) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", min_rating);
        out << "min_rating " << buf << "\n";
    } else {
        out << "min_rating none\n";
    }
    out << "min_interactions " << min_interactions << "\n";
    out << "seed " << seed << "\n";
    out << "train " << train_total << "\n";
    // per-user holdouts (original ids) let an experiment be replayed exactly
    for (std::size_t u = 0; u < dataset.user_count(); ++u)
        out << "holdout " << dataset.user_ids[u] << " "
            << dataset.item_ids[static_cast<std::size_t>(dataset.validation[u])]
            << " "
            << dataset.item_ids[static_cast<std::size_t>(dataset.test[u])]
            << "\n";
    if (!out) throw std::runtime_error("failed writing split manifest: " + path);
}

void write_id_map(const std::string& path, const InteractionDataset& dataset) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write id map: " + path);
    out << "hyprec-ids v1 " << dataset.user_count() << " "
        << dataset.item_count() << "\n";
    for (std::size_t u = 0; u < dataset.user_ids.size(); ++u)
        out << "user " << u << " " << dataset.user_ids[u] << "\n";
    for (std::size_t i = 0; i < dataset.item_ids.size(); ++i)
        out << "item " << i << " " << dataset.item_ids[i] << "\n";
    if (!out) throw std::runtime_error("failed writing id map: " + path);
}

void check_split_manifest(const std::string& path,
                          const InteractionDataset& dataset) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open split manifest: " + path +
                                 " (run the split command first)");
    std::string header;
    std::getline(in, header);
    if (header != "hyprec-split v1")
        throw std::runtime_error(path + ": not a split manifest");
    std::size_t train_total = 0;
    for (const std::vector<int>& h : dataset.train) train_total += h.size();
    std::string key;
    std::size_t holdouts_seen = 0;
    while (in >> key) {
        auto expect = [&](std::size_t got) {
            std::string value;
            in >> value;
            if (value != std::to_string(got))
                throw std::runtime_error(
                    path + ": manifest mismatch for '" + key + "' (manifest " +
                    value + ", dataset " + std::to_string(got) +
                    "); rerun the split with the same configuration");
        };
        if (key == "users") expect(dataset.user_count());
        else if (key == "items") expect(dataset.item_count());
        else if (key == "catalog") expect(dataset.catalog.size());
        else if (key == "excluded_users") expect(dataset.excluded_users);
        else if (key == "train") expect(train_total);
        else if (key == "holdout") {
            std::string user, val_item, test_item;
            in >> user >> val_item >> test_item;
            auto uit = dataset.user_index.find(user);
            if (uit == dataset.user_index.end())
                throw std::runtime_error(path + ": manifest user '" + user +
                                         "' missing from dataset");
            const std::size_t u = static_cast<std::size_t>(uit->second);
            if (dataset.item_ids[static_cast<std::size_t>(
                    dataset.validation[u])] != val_item ||
                dataset.item_ids[static_cast<std::size_t>(dataset.test[u])] !=
                    test_item)
                throw std::runtime_error(
                    path + ": holdout mismatch for user '" + user +
                    "'; rerun the split with the same configuration");
            ++holdouts_seen;
        } else {
            std::string value;
            in >> value;  // informational keys (min_rating, seed, ...)
        }
    }
    if (holdouts_seen != dataset.user_count())
        throw std::runtime_error(path + ": manifest lists " +
                                 std::to_string(holdouts_seen) +
                                 " holdouts but dataset has " +
                                 std::to_string(dataset.user_count()) +
                                 " users");
}

}  // namespace hyprec
