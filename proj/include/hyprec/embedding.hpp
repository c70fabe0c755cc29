#pragma once
// Dense embedding storage shared by the optimizer, losses and recommender,
// plus the text file format used for export/import.

#include <cstdint>
#include <string>
#include <vector>

namespace hyprec {

enum class Geometry { hyperboloid, euclidean };

// Coordinate model of an embedding file. `hyperboloid` round-trips exactly;
// klein/poincare are projections for plotting; euclidean is the flat baseline.
enum class PointModel { hyperboloid, klein, poincare, euclidean };

std::string to_string(Geometry g);
std::string to_string(PointModel m);
PointModel point_model_from_string(const std::string& s);

struct EmbeddingTable {
    Geometry geometry = Geometry::hyperboloid;
    int dim = 0;  // manifold dimension; hyperboloid rows carry dim+1 coords
    std::vector<double> items;  // row-major, item_count x row_len
    std::vector<double> users;  // symmetric mode only; empty otherwise
    std::vector<std::int64_t> frequencies;  // per item, training occurrences

    std::size_t row_len() const {
        return geometry == Geometry::hyperboloid ? std::size_t(dim) + 1
                                                 : std::size_t(dim);
    }
    std::size_t item_count() const { return items.size() / row_len(); }
    std::size_t user_count() const { return users.size() / row_len(); }

    double* item(std::size_t i) { return items.data() + i * row_len(); }
    const double* item(std::size_t i) const { return items.data() + i * row_len(); }
    double* user(std::size_t u) { return users.data() + u * row_len(); }
    const double* user(std::size_t u) const { return users.data() + u * row_len(); }
};

// Text format, UTF-8:
//   hyprec-embeddings v1 <model> <dim> <count>
//   <id> <c0> <c1> ...
// Coordinates use 17 significant digits so doubles round-trip exactly.
// `target` converts hyperboloid rows on the way out (klein/poincare exports
// drop the timelike coordinate). Euclidean tables only accept target
// `euclidean`.
void write_embeddings(const std::string& path, const EmbeddingTable& table,
                      const std::vector<std::string>& ids, PointModel target,
                      bool user_table = false);

struct LoadedEmbeddings {
    PointModel model = PointModel::hyperboloid;
    int dim = 0;
    std::vector<std::string> ids;
    std::vector<double> rows;  // row-major; hyperboloid/euclidean coords
    std::size_t row_len() const;
    std::size_t count() const { return ids.size(); }
};

LoadedEmbeddings read_embeddings(const std::string& path);

}  // namespace hyprec
