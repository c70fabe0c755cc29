#include "hyprec/embedding.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hyprec/geometry.hpp"

namespace hyprec {

std::string to_string(Geometry g) {
    return g == Geometry::hyperboloid ? "hyperboloid" : "euclidean";
}

std::string to_string(PointModel m) {
    switch (m) {
        case PointModel::hyperboloid: return "hyperboloid";
        case PointModel::klein: return "klein";
        case PointModel::poincare: return "poincare";
        case PointModel::euclidean: return "euclidean";
    }
    return "?";
}

PointModel point_model_from_string(const std::string& s) {
    if (s == "hyperboloid") return PointModel::hyperboloid;
    if (s == "klein") return PointModel::klein;
    if (s == "poincare") return PointModel::poincare;
    if (s == "euclidean") return PointModel::euclidean;
    throw std::invalid_argument("unknown point model: " + s);
}

std::size_t LoadedEmbeddings::row_len() const {
    return model == PointModel::hyperboloid ? std::size_t(dim) + 1
                                            : std::size_t(dim);
}

namespace {

void append_double(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

}  // namespace

void write_embeddings(const std::string& path, const EmbeddingTable& table,
                      const std::vector<std::string>& ids, PointModel target,
                      bool user_table) {
    const std::vector<double>& data = user_table ? table.users : table.items;
    std::size_t count = data.size() / table.row_len();
    if (ids.size() != count)
        throw std::invalid_argument("id list does not match embedding count");
    if (table.geometry == Geometry::euclidean && target != PointModel::euclidean)
        throw std::invalid_argument("euclidean tables export as euclidean only");
    if (table.geometry == Geometry::hyperboloid && target == PointModel::euclidean)
        throw std::invalid_argument("hyperboloid tables export as hyperboloid/klein/poincare");

    std::size_t out_len =
        target == PointModel::hyperboloid ? std::size_t(table.dim) + 1
                                          : std::size_t(table.dim);
    std::string out;
    out.reserve(count * out_len * 22 + 64);
    out += "hyprec-embeddings v1 ";
    out += to_string(target);
    out += ' ';
    out += std::to_string(table.dim);
    out += ' ';
    out += std::to_string(count);
    out += '\n';

    Vec converted;
    for (std::size_t r = 0; r < count; ++r) {
        const double* row = data.data() + r * table.row_len();
        const double* coords = row;
        if (target == PointModel::klein) {
            KleinPoint k = hyperboloid_to_klein(
                HyperboloidPoint{Vec(row, row + table.row_len())});
            converted = std::move(k.coords);
            coords = converted.data();
        } else if (target == PointModel::poincare) {
            PoincarePoint p = hyperboloid_to_poincare(
                HyperboloidPoint{Vec(row, row + table.row_len())});
            converted = std::move(p.coords);
            coords = converted.data();
        }
        out += ids[r];
        for (std::size_t c = 0; c < out_len; ++c) {
            out += ' ';
            append_double(out, coords[c]);
        }
        out += '\n';
    }

    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << out;
    if (!f) throw std::runtime_error("write failed: " + path);
}

LoadedEmbeddings read_embeddings(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open: " + path);
    std::string magic, version, model;
    int dim = 0;
    std::size_t count = 0;
    f >> magic >> version >> model >> dim >> count;
    if (magic != "hyprec-embeddings" || version != "v1")
        throw std::runtime_error("not a hyprec-embeddings v1 file: " + path);
    LoadedEmbeddings out;
    out.model = point_model_from_string(model);
    out.dim = dim;
    std::size_t len = out.row_len();
    out.ids.reserve(count);
    out.rows.reserve(count * len);
    for (std::size_t r = 0; r < count; ++r) {
        std::string id;
        if (!(f >> id))
            throw std::runtime_error(path + ": truncated at row " + std::to_string(r));
        out.ids.push_back(id);
        for (std::size_t c = 0; c < len; ++c) {
            double v;
            if (!(f >> v))
                throw std::runtime_error(path + ": bad coordinate at row " +
                                         std::to_string(r));
            out.rows.push_back(v);
        }
    }
    return out;
}

}  // namespace hyprec
