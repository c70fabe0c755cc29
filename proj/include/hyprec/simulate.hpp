#pragma once
// Built-in demonstration graphs: disjoint user-item groups (sim1: two,
// sim2: three) plus sim3's universally purchased item 7. Trains the 2-D
// symmetric hyperboloid BPR model and checks the structural claims: items
// cluster with their users, and item 7 lands near the origin.

#include <cstdint>
#include <string>
#include <vector>

#include "hyprec/recommender.hpp"

namespace hyprec {

struct SimulationReport {
    std::string scenario;
    TrainedModel model;
    InteractionDataset dataset;
    bool clusters_ok = false;       // max intra-group d(u,i) < min inter-group
    bool item7_distance_ok = true;  // sim3: item 7 closer than foreign groups
    bool item7_radius_ok = true;    // sim3: smallest Poincare radius of items
    double max_intra = 0.0;
    double min_inter = 0.0;
    std::vector<std::string> checks;  // one printable pass/fail line each

    bool passed() const {
        return clusters_ok && item7_distance_ok && item7_radius_ok;
    }
};

// scenario name must be sim1, sim2 or sim3
InteractionDataset build_scenario(const std::string& name);

SimulationReport run_simulation(const std::string& name, std::uint64_t seed);

}  // namespace hyprec
