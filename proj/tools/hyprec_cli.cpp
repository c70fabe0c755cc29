// hyprec: command-line driver for the hyperbolic recommender toolkit.
//
// Commands:
//   analyze   bipartite statistics + discrete power-law fit of item degrees
//   split     chronological leave-one-out split; writes split.txt + ids.txt
//   train     fit embeddings on the train split; writes a model directory
//   evaluate  HR@k / NDCG@k of a trained model on validation or test
//   simulate  built-in demonstration graphs with structural assertions
//   export    convert stored embeddings to another coordinate model
//
// Exit codes: 0 success, 1 assertion/metric failure (simulate), 2 input or
// configuration error.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hyprec/data.hpp"
#include "hyprec/embedding.hpp"
#include "hyprec/eval.hpp"
#include "hyprec/netstats.hpp"
#include "hyprec/optimizer.hpp"
#include "hyprec/recommender.hpp"
#include "hyprec/simulate.hpp"

namespace {

using namespace hyprec;

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string fmt_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// shared dataset flags

struct DataOpts {
    std::string input;
    std::string format = "csv_rating";
    double min_rating = 4.0;
    bool no_rating_filter = false;
    int min_interactions = 0;
};

void add_data_flags(CLI::App* cmd, DataOpts& d) {
    cmd->add_option("--input", d.input, "interaction file (user item [rating] timestamp)")
        ->required();
    cmd->add_option("--format", d.format, "input format")
        ->check(CLI::IsMember({"csv_rating", "csv_implicit"}))
        ->capture_default_str();
    cmd->add_option("--min-rating", d.min_rating,
                    "positivity threshold (csv_rating only)")
        ->capture_default_str();
    cmd->add_flag("--no-rating-filter", d.no_rating_filter,
                  "keep every interaction regardless of rating");
    cmd->add_option("--min-interactions", d.min_interactions,
                    "drop users with <= this many interactions (0 disables)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
}

InputFormat parse_format(const std::string& s) {
    return s == "csv_implicit" ? InputFormat::csv_implicit
                               : InputFormat::csv_rating;
}

bool rating_filter_active(const DataOpts& d) {
    return d.format == "csv_rating" && !d.no_rating_filter;
}

std::vector<Interaction> load_filtered(const DataOpts& d) {
    auto rows = load_interactions(d.input, parse_format(d.format));
    if (rating_filter_active(d)) rows = filter_positive(std::move(rows), d.min_rating);
    if (d.min_interactions > 0)
        rows = filter_min_interactions(std::move(rows), d.min_interactions);
    return rows;
}

InteractionDataset build_dataset(const DataOpts& d) {
    return chronological_split(load_filtered(d));
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeOpts {
    DataOpts data;
    int bootstraps = 1000;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string dump_ccdf;
};

int cmd_analyze(const AnalyzeOpts& o) {
    auto rows = load_filtered(o.data);
    BipartiteGraph graph = build_bipartite(rows);
    BipartiteSummary s = bipartite_stats(graph);
    std::vector<std::int64_t> degrees = item_degree_sequence(graph);

    std::vector<long long> samples(degrees.begin(), degrees.end());
    PowerLawFit fit = powerlaw_fit(samples);
    double p = std::nan("");
    if (o.bootstraps > 0)
        p = ks_p_value(fit, samples, o.bootstraps, o.seed, o.threads);

    std::printf("# users items interactions density mean_item_degree "
                "gamma_hat x_min ks n_tail p_value\n");
    std::printf("%zu %zu %lld %s %s %s %lld %s %zu %s\n", s.n_users, s.n_items,
                static_cast<long long>(s.edges), fmt_g(s.density).c_str(),
                fmt_g(s.mean_item_degree).c_str(), fmt_g(fit.gamma_hat).c_str(),
                fit.x_min, fmt_g(fit.ks_statistic).c_str(), fit.n_tail,
                fmt_g(p).c_str());

    if (!o.dump_ccdf.empty()) {
        std::ofstream out(o.dump_ccdf);
        if (!out)
            throw std::runtime_error("cannot write ccdf file: " + o.dump_ccdf);
        out << "# x ccdf\n";
        for (const auto& [x, ccdf] : empirical_ccdf(degrees))
            out << x << ' ' << fmt_full(ccdf) << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------
// split

struct SplitOpts {
    DataOpts data;
    std::string out_dir;
    std::uint64_t seed = 0;
};

int cmd_split(const SplitOpts& o) {
    InteractionDataset ds = build_dataset(o.data);
    std::filesystem::create_directories(o.out_dir);
    write_split_manifest(o.out_dir + "/split.txt", ds, o.data.min_rating,
                         rating_filter_active(o.data), o.data.min_interactions,
                         o.seed);
    write_id_map(o.out_dir + "/ids.txt", ds);
    std::size_t train_total = 0;
    for (const auto& h : ds.train) train_total += h.size();
    std::printf("users=%zu items=%zu train=%zu validation=%zu test=%zu "
                "excluded_users=%zu\n",
                ds.user_count(), ds.item_count(), train_total,
                ds.validation.size(), ds.test.size(), ds.excluded_users);
    return 0;
}

// ---------------------------------------------------------------------------
// train

struct TrainOpts {
    DataOpts data;
    std::string out_dir;
    std::string geometry = "hyperboloid";
    std::string user_mode = "symmetric";
    std::string loss = "wmrb";
    std::string score_mode = "neg_inner";
    std::string init_scheme = "cube_lift";
    int dim = 50;
    int negatives = 100;
    double slack = 1.0;
    double lambda_reg = 0.01;
    int epochs = 10;
    int batch_size = 1;
    double lr = 0.1;
    double lr_decay = 0.0;
    double clip_norm = 1.0;
    double init_width = 0.001;
    std::uint64_t seed = 0;
    int threads = 1;
};

ModelConfig model_config(const TrainOpts& o) {
    ModelConfig m;
    m.geometry = geometry_from_string(o.geometry);
    m.user_mode = user_mode_from_string(o.user_mode);
    m.loss = loss_from_string(o.loss);
    m.score_mode = score_mode_from_string(o.score_mode);
    m.dim = o.dim;
    m.negatives_per_positive = o.negatives;
    m.slack = o.slack;
    m.lambda_reg = o.lambda_reg;
    m.epochs = o.epochs;
    m.batch_size = o.batch_size;
    m.lr_decay = o.lr_decay;
    m.seed = o.seed;
    return m;
}

int cmd_train(const TrainOpts& o) {
    ModelConfig mcfg = model_config(o);
    validate_config(mcfg);
    RsgdConfig ocfg;
    ocfg.learning_rate = o.lr;
    ocfg.clip_norm = o.clip_norm;
    InitConfig icfg;
    icfg.scheme = init_scheme_from_string(o.init_scheme);
    icfg.width = o.init_width;

    InteractionDataset ds = build_dataset(o.data);
    check_split_manifest(o.out_dir + "/split.txt", ds);

    TrainedModel model = train(ds, mcfg, ocfg, icfg, o.threads, &std::cerr);
    std::string model_dir = o.out_dir + "/model";
    save_model(model_dir, model, ds);

    const TrainingLogEntry& last = model.log.back();
    std::printf("model_dir=%s epochs=%d final_loss=%s", model_dir.c_str(),
                last.epoch, fmt_g(last.mean_loss).c_str());
    if (last.val_hr >= 0.0)
        std::printf(" val_hr@10=%s val_ndcg@10=%s", fmt_g(last.val_hr).c_str(),
                    fmt_g(last.val_ndcg).c_str());
    std::printf("\n");
    return 0;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvalOpts {
    DataOpts data;
    std::string out_dir;
    std::string model_dir;  // defaults to <out_dir>/model
    std::string split = "test";
    std::string ranks_out;  // defaults to <out_dir>/ranks_<split>.txt
    int k = 10;
    int negatives = 100;
    std::uint64_t seed = 0;
    int threads = 1;
};

int cmd_evaluate(const EvalOpts& o) {
    InteractionDataset ds = build_dataset(o.data);
    check_split_manifest(o.out_dir + "/split.txt", ds);
    std::string model_dir = o.model_dir.empty() ? o.out_dir + "/model" : o.model_dir;
    TrainedModel model = load_model(model_dir, ds);

    ModelScorer scorer(model.table, model.config, ds);
    EvalConfig ec;
    ec.k = o.k;
    ec.num_negatives = o.negatives;
    ec.seed = o.seed;
    SplitPart part = o.split == "validation" ? SplitPart::validation : SplitPart::test;
    EvalResult res = evaluate(scorer, part, ds, ec, o.threads);

    std::printf("split=%s hr@%d=%s ndcg@%d=%s users=%zu skipped=%zu "
                "negatives=%d seed=%llu\n",
                o.split.c_str(), o.k, fmt_g(res.hr_at_k).c_str(), o.k,
                fmt_g(res.ndcg_at_k).c_str(), res.users_evaluated,
                res.users_skipped, o.negatives,
                static_cast<unsigned long long>(o.seed));

    std::string ranks_path = o.ranks_out.empty()
                                 ? o.out_dir + "/ranks_" + o.split + ".txt"
                                 : o.ranks_out;
    std::ofstream out(ranks_path);
    if (!out) throw std::runtime_error("cannot write rank file: " + ranks_path);
    out << "# split=" << o.split << " k=" << o.k << " negatives=" << o.negatives
        << " seed=" << o.seed << "\n# user rank\n";
    for (std::size_t i = 0; i < res.evaluated_users.size(); ++i)
        out << ds.user_ids[static_cast<std::size_t>(res.evaluated_users[i])]
            << ' ' << res.per_user_ranks[i] << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// simulate

struct SimOpts {
    std::string scenario;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
};

int cmd_simulate(const SimOpts& o) {
    SimulationReport rep = run_simulation(o.scenario, o.seed);
    std::filesystem::create_directories(o.out_dir);
    export_embeddings(rep.model, rep.dataset, PointModel::poincare, o.out_dir);
    for (const auto& line : rep.checks) std::printf("%s\n", line.c_str());
    return rep.passed() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// export

struct ExportOpts {
    std::string model_dir;
    std::string target;
    std::string out_dir;  // defaults to model_dir
};

// Re-encodes stored embedding files without needing the source dataset: ids
// and row order are taken from the files themselves.
void convert_file(const std::string& src, const std::string& dst,
                  Geometry geom, PointModel target, bool user_table) {
    LoadedEmbeddings le = read_embeddings(src);
    PointModel native = geom == Geometry::hyperboloid ? PointModel::hyperboloid
                                                      : PointModel::euclidean;
    if (le.model != native)
        throw std::runtime_error(src + ": expected " + to_string(native) +
                                 " coordinates, found " + to_string(le.model));
    EmbeddingTable table;
    table.geometry = geom;
    table.dim = le.dim;
    if (user_table)
        table.users = le.rows;
    else
        table.items = le.rows;
    write_embeddings(dst, table, le.ids, target, user_table);
}

int cmd_export(const ExportOpts& o) {
    PointModel target = point_model_from_string(o.target);

    std::ifstream cfg(o.model_dir + "/config.txt");
    if (!cfg)
        throw std::runtime_error("cannot open " + o.model_dir +
                                 "/config.txt (is this a model directory?)");
    std::string geometry_value;
    for (std::string line; std::getline(cfg, line);) {
        auto eq = line.find('=');
        if (eq != std::string::npos && line.substr(0, eq) == "geometry")
            geometry_value = line.substr(eq + 1);
    }
    if (geometry_value.empty())
        throw std::runtime_error(o.model_dir +
                                 "/config.txt: missing geometry entry");
    Geometry geom = geometry_from_string(geometry_value);

    std::string out_dir = o.out_dir.empty() ? o.model_dir : o.out_dir;
    std::filesystem::create_directories(out_dir);
    std::string suffix = "_" + to_string(target) + ".emb";
    convert_file(o.model_dir + "/items.emb", out_dir + "/items" + suffix, geom,
                 target, false);
    std::printf("wrote %s\n", (out_dir + "/items" + suffix).c_str());
    if (std::filesystem::exists(o.model_dir + "/users.emb")) {
        convert_file(o.model_dir + "/users.emb", out_dir + "/users" + suffix,
                     geom, target, true);
        std::printf("wrote %s\n", (out_dir + "/users" + suffix).c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hyperbolic-geometry recommender toolkit"};
    app.require_subcommand(1);

    AnalyzeOpts a;
    auto* analyze = app.add_subcommand(
        "analyze", "bipartite statistics and item-degree power-law fit");
    add_data_flags(analyze, a.data);
    analyze->add_option("--bootstraps", a.bootstraps,
                        "bootstrap replicates for the KS p-value (0 skips)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    analyze->add_option("--seed", a.seed, "bootstrap RNG seed")
        ->capture_default_str();
    analyze->add_option("--threads", a.threads, "worker threads")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    analyze->add_option("--dump-ccdf", a.dump_ccdf,
                        "write the empirical item-degree CCDF to this file");
    analyze->set_config("--config", "", "flat key=value config; flags win");

    SplitOpts sp;
    auto* split = app.add_subcommand(
        "split", "chronological leave-one-out split (writes split.txt, ids.txt)");
    add_data_flags(split, sp.data);
    split->add_option("--out-dir", sp.out_dir, "output directory")->required();
    split->add_option("--seed", sp.seed, "seed recorded in the manifest")
        ->capture_default_str();
    split->set_config("--config", "", "flat key=value config; flags win");

    TrainOpts t;
    auto* train_cmd = app.add_subcommand(
        "train", "fit embeddings on the train split (writes <out-dir>/model)");
    add_data_flags(train_cmd, t.data);
    train_cmd->add_option("--out-dir", t.out_dir,
                          "directory holding split.txt; receives model/")
        ->required();
    train_cmd->add_option("--geometry", t.geometry, "embedding geometry")
        ->check(CLI::IsMember({"hyperboloid", "euclidean"}))
        ->capture_default_str();
    train_cmd->add_option("--user-mode", t.user_mode, "user representation")
        ->check(CLI::IsMember({"symmetric", "asymmetric"}))
        ->capture_default_str();
    train_cmd->add_option("--loss", t.loss, "ranking loss")
        ->check(CLI::IsMember({"bpr", "wmrb"}))
        ->capture_default_str();
    train_cmd->add_option("--score-mode", t.score_mode, "dissimilarity")
        ->check(CLI::IsMember({"neg_distance", "neg_inner"}))
        ->capture_default_str();
    train_cmd->add_option("--init-scheme", t.init_scheme, "initialisation")
        ->check(CLI::IsMember({"cube_lift", "poincare_ball", "frequency_radius"}))
        ->capture_default_str();
    train_cmd->add_option("--dim", t.dim, "manifold dimension")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    train_cmd->add_option("--negatives", t.negatives,
                          "negative samples per positive (bpr requires 1)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    train_cmd->add_option("--slack", t.slack, "wmrb margin")
        ->capture_default_str();
    train_cmd->add_option("--lambda", t.lambda_reg, "regularisation strength")
        ->capture_default_str();
    train_cmd->add_option("--epochs", t.epochs, "training epochs")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    train_cmd->add_option("--batch-size", t.batch_size, "positives per step")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    train_cmd->add_option("--lr", t.lr, "learning rate")->capture_default_str();
    train_cmd->add_option("--lr-decay", t.lr_decay,
                          "per-epoch multiplicative learning-rate decay")
        ->capture_default_str();
    train_cmd->add_option("--clip-norm", t.clip_norm,
                          "tangent-norm clip (<= 0 disables)")
        ->capture_default_str();
    train_cmd->add_option("--init-width", t.init_width, "initialisation width")
        ->capture_default_str();
    train_cmd->add_option("--seed", t.seed, "training RNG seed")
        ->capture_default_str();
    train_cmd->add_option("--threads", t.threads, "worker threads")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    train_cmd->set_config("--config", "", "flat key=value config; flags win");

    EvalOpts e;
    auto* eval_cmd = app.add_subcommand(
        "evaluate", "HR@k / NDCG@k of a trained model on a holdout split");
    add_data_flags(eval_cmd, e.data);
    eval_cmd->add_option("--out-dir", e.out_dir,
                         "directory holding split.txt (and model/ by default)")
        ->required();
    eval_cmd->add_option("--model-dir", e.model_dir,
                         "model directory (default <out-dir>/model)");
    eval_cmd->add_option("--split", e.split, "holdout part")
        ->check(CLI::IsMember({"validation", "test"}))
        ->capture_default_str();
    eval_cmd->add_option("--ranks-out", e.ranks_out,
                         "per-user rank file (default <out-dir>/ranks_<split>.txt)");
    eval_cmd->add_option("--k", e.k, "cutoff")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    eval_cmd->add_option("--eval-negatives", e.negatives,
                         "sampled negatives per user")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    eval_cmd->add_option("--seed", e.seed, "negative-sampling seed")
        ->capture_default_str();
    eval_cmd->add_option("--threads", e.threads, "worker threads")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    eval_cmd->set_config("--config", "", "flat key=value config; flags win");

    SimOpts sim;
    auto* simulate = app.add_subcommand(
        "simulate", "train a built-in scenario and check its structure");
    simulate->add_option("scenario", sim.scenario, "sim1, sim2 or sim3")
        ->required()
        ->check(CLI::IsMember({"sim1", "sim2", "sim3"}));
    simulate->add_option("--out-dir", sim.out_dir,
                         "directory for the Poincare coordinate files")
        ->capture_default_str();
    simulate->add_option("--seed", sim.seed, "training RNG seed")
        ->capture_default_str();
    simulate->set_config("--config", "", "flat key=value config; flags win");

    ExportOpts x;
    auto* export_cmd = app.add_subcommand(
        "export", "convert stored embeddings to another coordinate model");
    export_cmd->add_option("--model-dir", x.model_dir, "model directory")
        ->required();
    export_cmd->add_option("--target", x.target, "output coordinates")
        ->required()
        ->check(CLI::IsMember({"hyperboloid", "klein", "poincare", "euclidean"}));
    export_cmd->add_option("--out-dir", x.out_dir,
                           "output directory (default: the model directory)");
    export_cmd->set_config("--config", "", "flat key=value config; flags win");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        int code = app.exit(err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(a);
        if (split->parsed()) return cmd_split(sp);
        if (train_cmd->parsed()) return cmd_train(t);
        if (eval_cmd->parsed()) return cmd_evaluate(e);
        if (simulate->parsed()) return cmd_simulate(sim);
        if (export_cmd->parsed()) return cmd_export(x);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
    return 2;  // unreachable: require_subcommand(1)
}
