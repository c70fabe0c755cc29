#include "hyprec/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace hyprec {

namespace {

int scenario_groups(const std::string& name) {
    if (name == "sim1") return 2;
    if (name == "sim2") return 3;
    if (name == "sim3") return 3;  // plus the shared item
    throw std::invalid_argument("unknown scenario '" + name +
                                "' (expected sim1, sim2 or sim3)");
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

}  // namespace

InteractionDataset build_scenario(const std::string& name) {
    const int groups = scenario_groups(name);
    const bool shared_item = name == "sim3";

    InteractionDataset ds;
    const char* user_names[] = {"A", "B", "C", "D", "E", "F"};
    const int n_users = groups * 2;
    const int n_items = groups * 2 + (shared_item ? 1 : 0);
    for (int u = 0; u < n_users; ++u) {
        ds.user_ids.push_back(user_names[u]);
        ds.user_index.emplace(user_names[u], u);
    }
    for (int i = 0; i < n_items; ++i) {
        std::string id = std::to_string(i + 1);
        ds.item_index.emplace(id, i);
        ds.item_ids.push_back(std::move(id));
    }
    for (int u = 0; u < n_users; ++u) {
        const int g = u / 2;
        std::vector<int> history = {2 * g, 2 * g + 1};
        if (shared_item) history.push_back(n_items - 1);
        ds.train.push_back(std::move(history));
    }
    ds.frequencies.assign(static_cast<std::size_t>(n_items), 0);
    for (const std::vector<int>& h : ds.train)
        for (int item : h) ++ds.frequencies[static_cast<std::size_t>(item)];
    ds.in_catalog.assign(static_cast<std::size_t>(n_items), 1);
    for (int i = 0; i < n_items; ++i) ds.catalog.push_back(i);
    return ds;
}

SimulationReport run_simulation(const std::string& name, std::uint64_t seed) {
    const int groups = scenario_groups(name);
    const bool shared_item = name == "sim3";

    SimulationReport rep;
    rep.scenario = name;
    rep.dataset = build_scenario(name);

    // fixed demonstration recipe: 2-D symmetric hyperboloid BPR, distance
    // scores, learning rate 1 decaying 2% per epoch, tight hypercube
    // initialisation (width 0.01)
    ModelConfig mcfg;
    mcfg.geometry = Geometry::hyperboloid;
    mcfg.user_mode = UserMode::symmetric;
    mcfg.loss = LossKind::bpr;
    mcfg.score_mode = ScoreMode::neg_distance;
    mcfg.dim = 2;
    mcfg.negatives_per_positive = 1;
    mcfg.lambda_reg = 0.0;
    mcfg.epochs = 300;
    mcfg.batch_size = 1;
    mcfg.lr_decay = 0.02;
    mcfg.seed = seed;
    RsgdConfig ocfg;
    ocfg.learning_rate = 1.0;
    ocfg.clip_norm = 1.0;
    InitConfig icfg;
    icfg.scheme = InitScheme::cube_lift;
    icfg.width = 0.01;

    rep.model = train(rep.dataset, mcfg, ocfg, icfg);

    const EmbeddingTable& table = rep.model.table;
    const std::size_t len = table.row_len();
    const int n_users = groups * 2;
    const int n_grouped_items = groups * 2;

    auto dist = [&](int user, int item) {
        return hyperboloid_distance(table.user(static_cast<std::size_t>(user)),
                                    table.item(static_cast<std::size_t>(item)),
                                    len);
    };

    rep.max_intra = 0.0;
    rep.min_inter = 0.0;
    bool first_inter = true;
    for (int u = 0; u < n_users; ++u) {
        for (int i = 0; i < n_grouped_items; ++i) {
            const double d = dist(u, i);
            if (u / 2 == i / 2) {
                rep.max_intra = std::max(rep.max_intra, d);
            } else if (first_inter || d < rep.min_inter) {
                rep.min_inter = d;
                first_inter = false;
            }
        }
    }
    rep.clusters_ok = rep.max_intra < rep.min_inter;
    rep.checks.push_back(name + " cluster separation: " +
                         (rep.clusters_ok ? "PASS" : "FAIL") + " (max intra " +
                         fmt(rep.max_intra) + (rep.clusters_ok ? " < " : " >= ") +
                         "min inter " + fmt(rep.min_inter) + ")");

    if (shared_item) {
        const int item7 = n_grouped_items;  // dense id of the shared item
        // item 7 must sit closer to every user than any foreign group's items
        rep.item7_distance_ok = true;
        for (int u = 0; u < n_users; ++u) {
            double foreign_min = 0.0;
            bool first = true;
            for (int i = 0; i < n_grouped_items; ++i) {
                if (u / 2 == i / 2) continue;
                const double d = dist(u, i);
                if (first || d < foreign_min) {
                    foreign_min = d;
                    first = false;
                }
            }
            if (!(dist(u, item7) < foreign_min)) {
                rep.item7_distance_ok = false;
                break;
            }
        }
        rep.checks.push_back(
            name + " shared item closer than foreign groups: " +
            (rep.item7_distance_ok ? "PASS" : "FAIL"));

        // and nearest the origin in the Poincare projection
        auto radius = [&](int item) {
            const double* row = table.item(static_cast<std::size_t>(item));
            PoincarePoint p = hyperboloid_to_poincare(
                HyperboloidPoint{Vec(row, row + len)});
            double n2 = 0.0;
            for (double c : p.coords) n2 += c * c;
            return std::sqrt(n2);
        };
        const double r7 = radius(item7);
        double r_min = radius(0);
        for (int i = 1; i < n_grouped_items; ++i)
            r_min = std::min(r_min, radius(i));
        rep.item7_radius_ok = r7 < r_min;
        rep.checks.push_back(name + " shared item nearest the origin: " +
                             (rep.item7_radius_ok ? "PASS" : "FAIL") +
                             " (radius " + fmt(r7) +
                             (rep.item7_radius_ok ? " < " : " >= ") +
                             fmt(r_min) + ")");
    }
    return rep;
}

}  // namespace hyprec
