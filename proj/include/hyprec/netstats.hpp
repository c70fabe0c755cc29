#pragma once
// Bipartite user-item graph statistics, one-mode projection degrees, and the
// discrete maximum-likelihood power-law fit with KS-minimizing x_min and a
// semi-parametric bootstrap p-value.

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "hyprec/data.hpp"
#include "hyprec/rng.hpp"

namespace hyprec {

struct BipartiteGraph {
    std::unordered_map<std::string, std::int64_t> user_degrees;
    std::unordered_map<std::string, std::int64_t> item_degrees;
    std::int64_t edge_count = 0;
};

// dedups (user, item) pairs; asserts the degree identity
// sum(user degrees) = sum(item degrees) = edge count
BipartiteGraph build_bipartite(const std::vector<Interaction>& interactions);

struct BipartiteSummary {
    std::size_t n_users = 0;
    std::size_t n_items = 0;
    std::int64_t edges = 0;
    double density = 0.0;           // edges / (n_users * n_items)
    double mean_user_degree = 0.0;  // edges / n_users
    double mean_item_degree = 0.0;  // edges / n_items
};

BipartiteSummary bipartite_stats(const BipartiteGraph& graph);

// degree sequences sorted ascending (stable inputs for fitting/dumping)
std::vector<std::int64_t> item_degree_sequence(const BipartiteGraph& graph);
std::vector<std::int64_t> user_degree_sequence(const BipartiteGraph& graph);

enum class ProjectionSide { item, user };

// Weighted degree of each node in the one-mode projection: for side=item the
// projection joins items co-interacted by a user with weight = number of such
// users, and node i's weighted degree is sum over users holding i of
// (basket size - 1). Computed without materializing the projection.
std::unordered_map<std::string, std::int64_t> one_mode_projection(
    const std::vector<Interaction>& interactions, ProjectionSide side);

// Euler-Maclaurin Hurwitz zeta, accurate to ~1e-12 relative for
// s in (1, 60], a >= 1 (integer a hits a cached-log fast path).
double hurwitz_zeta(double s, double a);

struct PowerLawFit {
    double gamma_hat = 0.0;
    long long x_min = 0;
    double ks_statistic = 0.0;
    double p_value = -1.0;  // not computed until ks_p_value
    std::size_t n_tail = 0;
};

// Discrete MLE for P(x) ~ x^(-gamma), x >= x_min, with x_min chosen to
// minimize the KS distance between the empirical and fitted CDFs over the
// tail. Candidate x_min values are the distinct sample values whose tail
// holds at least min_tail points, thinned geometrically to max_candidates.
// Throws on empty/non-positive input, all-equal samples, or a tail that
// never reaches min_tail.
PowerLawFit powerlaw_fit(const std::vector<long long>& samples,
                         std::size_t min_tail = 50,
                         std::size_t max_candidates = 64);

// Semi-parametric bootstrap: each replicate redraws n points, tail from the
// fitted law via inverse CDF and body from the empirical values below x_min,
// then refits with the same policy; p = fraction of replicate KS statistics
// >= the observed one. Deterministic given seed (per-replicate streams);
// bootstraps < 100 emits a reliability warning on stderr.
double ks_p_value(const PowerLawFit& fit, const std::vector<long long>& samples,
                  int bootstraps, std::uint64_t seed, int threads = 1);

// inverse-CDF sampler for the discrete power law (also the test oracle)
std::vector<long long> sample_powerlaw(std::size_t n, double gamma,
                                       long long x_min, Rng& rng);

// empirical complementary CDF points (x ascending, P(X >= x))
std::vector<std::pair<long long, double>> empirical_ccdf(
    const std::vector<std::int64_t>& values);

}  // namespace hyprec
