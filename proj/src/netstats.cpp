#include "hyprec/netstats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <stdexcept>
#include <thread>
#include <unordered_set>

namespace hyprec {
namespace {

constexpr std::size_t kLogCacheSize = std::size_t{1} << 20;
constexpr std::size_t kCountingSortCap = std::size_t{1} << 22;
constexpr long long kZetaWalkCap = 34;    // above this a fresh series eval wins
constexpr std::size_t kCcdfTableCap = 3'000'000;
constexpr double kCcdfTableFloor = 1e-9;

double log_pos(double t) {
    static const std::vector<double> cache = [] {
        std::vector<double> c(kLogCacheSize, 0.0);
        for (std::size_t i = 1; i < kLogCacheSize; ++i)
            c[i] = std::log(static_cast<double>(i));
        return c;
    }();
    if (t >= 1.0 && t < static_cast<double>(kLogCacheSize)) {
        std::size_t i = static_cast<std::size_t>(t);
        if (static_cast<double>(i) == t) return cache[i];
    }
    return std::log(t);
}

// t^(-s) for t >= 1
double neg_pow(double t, double s) { return std::exp(-s * log_pos(t)); }

// run-length encoding of a sample: distinct values ascending + their counts
struct UniqueCounts {
    std::vector<long long> uniq;
    std::vector<std::int64_t> counts;
};

UniqueCounts unique_counts(const std::vector<long long>& samples) {
    UniqueCounts uc;
    long long max_val = 0;
    for (long long v : samples) max_val = std::max(max_val, v);
    if (static_cast<std::size_t>(max_val) < kCountingSortCap) {
        std::vector<std::int64_t> hist(static_cast<std::size_t>(max_val) + 1, 0);
        for (long long v : samples) ++hist[static_cast<std::size_t>(v)];
        for (std::size_t v = 1; v < hist.size(); ++v) {
            if (hist[v] > 0) {
                uc.uniq.push_back(static_cast<long long>(v));
                uc.counts.push_back(hist[v]);
            }
        }
    } else {
        std::vector<long long> sorted = samples;
        std::sort(sorted.begin(), sorted.end());
        for (long long v : sorted) {
            if (uc.uniq.empty() || uc.uniq.back() != v) {
                uc.uniq.push_back(v);
                uc.counts.push_back(1);
            } else {
                ++uc.counts.back();
            }
        }
    }
    return uc;
}

// walks zeta(s, a) -> zeta(s, b) for b > a via zeta(s,a+1) = zeta(s,a) - a^-s,
// falling back to a fresh series evaluation for long gaps
struct ZetaWalker {
    double s;
    long long a;
    double z;
    ZetaWalker(double s_, long long a_) : s(s_), a(a_) {
        z = hurwitz_zeta(s, static_cast<double>(a));
    }
    double at(long long b) {
        if (b == a) return z;
        if (b - a > kZetaWalkCap) {
            a = b;
            z = hurwitz_zeta(s, static_cast<double>(b));
            return z;
        }
        while (a < b) {
            z -= neg_pow(static_cast<double>(a), s);
            ++a;
        }
        return z;
    }
};

// d/dgamma of the tail log-likelihood; MLE is its root
double mle_gamma(double slog_tail, std::int64_t n_tail, long long x_min) {
    const double a = static_cast<double>(x_min);
    const double n = static_cast<double>(n_tail);
    auto dldg = [&](double g) {
        const double eps = 1e-6;
        double hi = std::log(hurwitz_zeta(g + eps, a));
        double lo = std::log(hurwitz_zeta(g - eps, a));
        return -n * (hi - lo) / (2.0 * eps) - slog_tail;
    };
    double lo = 1.0001, hi = 20.0;
    if (dldg(lo) < 0.0) return lo;
    if (dldg(hi) > 0.0) return hi;
    for (int it = 0; it < 40; ++it) {
        double mid = 0.5 * (lo + hi);
        if (dldg(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// sup distance between the empirical tail CDF and the fitted discrete CDF,
// checked on both sides of every jump
double ks_stat(const UniqueCounts& uc, std::size_t i0, double gamma) {
    const long long x_min = uc.uniq[i0];
    std::int64_t n = 0;
    for (std::size_t j = i0; j < uc.counts.size(); ++j) n += uc.counts[j];
    ZetaWalker zeta(gamma, x_min);
    const double zx = zeta.at(x_min);
    double ks = 0.0;
    std::int64_t cum = 0;
    for (std::size_t j = i0; j < uc.uniq.size(); ++j) {
        const long long x = uc.uniq[j];
        const double fcdf_prev = 1.0 - zeta.at(x) / zx;
        const double ecdf_prev =
            static_cast<double>(cum) / static_cast<double>(n);
        const double fcdf = 1.0 - zeta.at(x + 1) / zx;
        cum += uc.counts[j];
        const double ecdf = static_cast<double>(cum) / static_cast<double>(n);
        ks = std::max(ks, std::abs(ecdf - fcdf));
        ks = std::max(ks, std::abs(ecdf_prev - fcdf_prev));
    }
    return ks;
}

PowerLawFit fit_encoded(const UniqueCounts& uc, std::size_t min_tail,
                        std::size_t max_candidates) {
    if (uc.uniq.size() < 2)
        throw std::runtime_error(
            "power-law fit is degenerate: all samples are equal");

    const std::size_t m = uc.uniq.size();
    std::vector<std::int64_t> nt(m);        // tail count from unique i up
    std::vector<double> slog(m);            // tail sum of count * log(value)
    std::int64_t acc_n = 0;
    double acc_s = 0.0;
    for (std::size_t i = m; i-- > 0;) {
        acc_n += uc.counts[i];
        acc_s += static_cast<double>(uc.counts[i]) *
                 log_pos(static_cast<double>(uc.uniq[i]));
        nt[i] = acc_n;
        slog[i] = acc_s;
    }

    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < m; ++i)
        if (static_cast<std::size_t>(nt[i]) >= min_tail) eligible.push_back(i);
    if (eligible.empty())
        throw std::runtime_error(
            "power-law fit needs at least " + std::to_string(min_tail) +
            " samples in the fitted tail");

    if (eligible.size() > max_candidates) {
        // geometric thinning over candidate ranks, deduplicated
        const double L = static_cast<double>(eligible.size());
        std::vector<std::size_t> thinned;
        for (std::size_t i = 0; i < max_candidates; ++i) {
            double pos = std::pow(
                L, static_cast<double>(i) / static_cast<double>(max_candidates - 1));
            std::size_t rank = static_cast<std::size_t>(pos);
            rank = (rank == 0 ? 0 : rank - 1);
            if (rank >= eligible.size()) rank = eligible.size() - 1;
            if (thinned.empty() || thinned.back() != eligible[rank])
                thinned.push_back(eligible[rank]);
        }
        eligible = std::move(thinned);
    }

    PowerLawFit best;
    bool have_best = false;
    for (std::size_t i : eligible) {
        const long long x_min = uc.uniq[i];
        const double gamma = mle_gamma(slog[i], nt[i], x_min);
        const double ks = ks_stat(uc, i, gamma);
        if (!have_best || ks < best.ks_statistic) {
            best.gamma_hat = gamma;
            best.x_min = x_min;
            best.ks_statistic = ks;
            best.n_tail = static_cast<std::size_t>(nt[i]);
            have_best = true;
        }
    }
    return best;
}

// complementary CDF table for the fitted tail: table[j] = P(X >= x_min + j)
std::vector<double> ccdf_table(double gamma, long long x_min) {
    std::vector<double> table;
    table.push_back(1.0);
    const double zx = hurwitz_zeta(gamma, static_cast<double>(x_min));
    long long x = x_min;
    while (table.back() > kCcdfTableFloor && table.size() < kCcdfTableCap) {
        table.push_back(table.back() -
                        neg_pow(static_cast<double>(x), gamma) / zx);
        ++x;
    }
    return table;
}

long long draw_from_table(const std::vector<double>& table, long long x_min,
                          Rng& rng) {
    const double v = 1.0 - rng.uniform();  // in (0, 1]
    auto it = std::partition_point(table.begin(), table.end(),
                                   [v](double t) { return t >= v; });
    std::size_t idx = static_cast<std::size_t>(it - table.begin());
    idx = (idx == 0 ? 0 : idx - 1);
    return x_min + static_cast<long long>(idx);
}

}  // namespace

BipartiteGraph build_bipartite(const std::vector<Interaction>& interactions) {
    if (interactions.empty())
        throw std::runtime_error("bipartite statistics need a nonempty dataset");
    BipartiteGraph g;
    std::unordered_set<std::string> seen;
    seen.reserve(interactions.size() * 2);
    for (const Interaction& r : interactions) {
        std::string key = r.user;
        key.push_back('\x1f');
        key += r.item;
        if (!seen.insert(std::move(key)).second) continue;
        ++g.user_degrees[r.user];
        ++g.item_degrees[r.item];
        ++g.edge_count;
    }
    std::int64_t su = 0, si = 0;
    for (const auto& [_, d] : g.user_degrees) su += d;
    for (const auto& [_, d] : g.item_degrees) si += d;
    if (su != g.edge_count || si != g.edge_count)
        throw std::logic_error("bipartite degree identity violated");
    return g;
}

BipartiteSummary bipartite_stats(const BipartiteGraph& graph) {
    if (graph.user_degrees.empty() || graph.item_degrees.empty())
        throw std::runtime_error("bipartite statistics need a nonempty graph");
    BipartiteSummary s;
    s.n_users = graph.user_degrees.size();
    s.n_items = graph.item_degrees.size();
    s.edges = graph.edge_count;
    s.density = static_cast<double>(s.edges) /
                (static_cast<double>(s.n_users) * static_cast<double>(s.n_items));
    s.mean_user_degree =
        static_cast<double>(s.edges) / static_cast<double>(s.n_users);
    s.mean_item_degree =
        static_cast<double>(s.edges) / static_cast<double>(s.n_items);
    return s;
}

std::vector<std::int64_t> item_degree_sequence(const BipartiteGraph& graph) {
    std::vector<std::int64_t> out;
    out.reserve(graph.item_degrees.size());
    for (const auto& [_, d] : graph.item_degrees) out.push_back(d);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::int64_t> user_degree_sequence(const BipartiteGraph& graph) {
    std::vector<std::int64_t> out;
    out.reserve(graph.user_degrees.size());
    for (const auto& [_, d] : graph.user_degrees) out.push_back(d);
    std::sort(out.begin(), out.end());
    return out;
}

std::unordered_map<std::string, std::int64_t> one_mode_projection(
    const std::vector<Interaction>& interactions, ProjectionSide side) {
    if (interactions.empty())
        throw std::runtime_error("one-mode projection needs a nonempty dataset");
    // distinct neighbor sets per node on the opposite side
    std::unordered_map<std::string, std::unordered_set<std::string>> groups;
    for (const Interaction& r : interactions) {
        if (side == ProjectionSide::item)
            groups[r.user].insert(r.item);
        else
            groups[r.item].insert(r.user);
    }
    // node i's weighted degree is sum over groups holding i of (size - 1):
    // every co-member contributes one unit of shared-neighbor weight
    std::unordered_map<std::string, std::int64_t> degrees;
    for (const auto& [_, members] : groups) {
        const std::int64_t w = static_cast<std::int64_t>(members.size()) - 1;
        for (const std::string& node : members) degrees[node] += w;
    }
    return degrees;
}

double hurwitz_zeta(double s, double a) {
    if (!(s > 1.0) || !(a >= 1.0))
        throw std::domain_error("hurwitz_zeta needs s > 1 and a >= 1");
    constexpr int kDirectTerms = 28;
    double acc = 0.0;
    for (int k = 0; k < kDirectTerms; ++k)
        acc += neg_pow(a + static_cast<double>(k), s);
    const double t = a + static_cast<double>(kDirectTerms);
    const double lt = log_pos(t);
    acc += std::exp((1.0 - s) * lt) / (s - 1.0);
    acc += 0.5 * std::exp(-s * lt);
    acc += s * std::exp((-s - 1.0) * lt) / 12.0;
    acc -= s * (s + 1.0) * (s + 2.0) * std::exp((-s - 3.0) * lt) / 720.0;
    acc += s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) *
           std::exp((-s - 5.0) * lt) / 30240.0;
    return acc;
}

PowerLawFit powerlaw_fit(const std::vector<long long>& samples,
                         std::size_t min_tail, std::size_t max_candidates) {
    if (samples.empty())
        throw std::runtime_error("power-law fit needs a nonempty sample");
    for (long long v : samples)
        if (v < 1)
            throw std::runtime_error(
                "power-law fit needs positive integer samples");
    if (max_candidates < 2)
        throw std::runtime_error("power-law fit needs max_candidates >= 2");
    return fit_encoded(unique_counts(samples), min_tail, max_candidates);
}

double ks_p_value(const PowerLawFit& fit, const std::vector<long long>& samples,
                  int bootstraps, std::uint64_t seed, int threads) {
    if (bootstraps <= 0)
        throw std::runtime_error("ks_p_value needs bootstraps >= 1");
    if (bootstraps < 100)
        std::cerr << "warning: " << bootstraps
                  << " bootstrap replicates give an unreliable p-value "
                     "(resolution coarser than 0.01); use >= 100\n";
    if (fit.n_tail == 0 || fit.x_min < 1)
        throw std::runtime_error("ks_p_value needs a valid fit");

    const std::size_t n = samples.size();
    std::vector<long long> body;
    std::size_t n_tail = 0;
    for (long long v : samples) {
        if (v >= fit.x_min)
            ++n_tail;
        else
            body.push_back(v);
    }
    if (n_tail == 0) throw std::runtime_error("fit tail is empty for this sample");
    const double p_tail =
        static_cast<double>(n_tail) / static_cast<double>(n);
    const std::vector<double> table = ccdf_table(fit.gamma_hat, fit.x_min);
    const double ks_obs = fit.ks_statistic;

    const int B = bootstraps;
    std::vector<char> hit(static_cast<std::size_t>(B), 0);
    auto run_range = [&](int b_lo, int b_hi) {
        std::vector<long long> synth(n);
        for (int b = b_lo; b < b_hi; ++b) {
            Rng rng(seed, rng_stream::bootstrap, static_cast<std::uint64_t>(b));
            // tail size is binomial(n, p_tail)
            std::size_t tail_b = 0;
            for (std::size_t i = 0; i < n; ++i)
                if (rng.uniform() < p_tail) ++tail_b;
            std::size_t w = 0;
            for (std::size_t i = 0; i + tail_b < n; ++i)
                synth[w++] = body[static_cast<std::size_t>(
                    rng.below(static_cast<std::uint64_t>(body.size())))];
            for (std::size_t i = 0; i < tail_b; ++i)
                synth[w++] = draw_from_table(table, fit.x_min, rng);
            bool is_hit = true;  // a failed replicate fit counts against rejection
            try {
                PowerLawFit f = fit_encoded(unique_counts(synth), 50, 64);
                is_hit = f.ks_statistic >= ks_obs;
            } catch (const std::exception&) {
            }
            hit[static_cast<std::size_t>(b)] = is_hit ? 1 : 0;
        }
    };

    int workers = std::max(1, threads);
    workers = std::min(workers, B);
    if (workers == 1) {
        run_range(0, B);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t) {
            int lo = static_cast<int>(static_cast<long long>(B) * t / workers);
            int hi =
                static_cast<int>(static_cast<long long>(B) * (t + 1) / workers);
            pool.emplace_back(run_range, lo, hi);
        }
        for (std::thread& t : pool) t.join();
    }

    std::int64_t hits = 0;
    for (char h : hit) hits += h;
    return static_cast<double>(hits) / static_cast<double>(B);
}

std::vector<long long> sample_powerlaw(std::size_t n, double gamma,
                                       long long x_min, Rng& rng) {
    if (x_min < 1) throw std::domain_error("sample_powerlaw needs x_min >= 1");
    const std::vector<double> table = ccdf_table(gamma, x_min);
    std::vector<long long> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = draw_from_table(table, x_min, rng);
    return out;
}

std::vector<std::pair<long long, double>> empirical_ccdf(
    const std::vector<std::int64_t>& values) {
    std::vector<long long> v(values.begin(), values.end());
    if (v.empty()) return {};
    UniqueCounts uc = unique_counts(v);
    std::vector<std::pair<long long, double>> out;
    out.reserve(uc.uniq.size());
    const double n = static_cast<double>(v.size());
    std::int64_t before = 0;
    for (std::size_t i = 0; i < uc.uniq.size(); ++i) {
        out.emplace_back(uc.uniq[i],
                         (n - static_cast<double>(before)) / n);
        before += uc.counts[i];
    }
    return out;
}

}  // namespace hyprec
