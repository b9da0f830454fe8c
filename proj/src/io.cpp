#include "submodstab/io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace submodstab::io {
namespace {

using nlohmann::json;

template <class T>
T field(const json& doc, const char* key) {
  if (!doc.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("field '") + key + "': " + e.what());
  }
}

// Library constructors throw std::invalid_argument; report those as format errors.
template <class F>
auto validated(F&& make) {
  try {
    return make();
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

std::string format_real(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

CubeFunction function_from_json(const json& doc) {
  if (!doc.is_object()) throw FormatError("function spec must be a JSON object");
  const int n = field<int>(doc, "n");
  const std::string kind = field<std::string>(doc, "kind");
  return validated([&] {
    if (kind == "dense") return CubeFunction::dense(n, field<std::vector<double>>(doc, "table"));
    if (kind == "cut") {
      std::vector<Edge> edges;
      for (const auto& e : field<std::vector<std::vector<double>>>(doc, "edges")) {
        if (e.size() != 3) throw FormatError("each edge must be [i, j, w]");
        edges.push_back({static_cast<int>(e[0]), static_cast<int>(e[1]), e[2]});
      }
      return CubeFunction::graph_cut(n, std::move(edges));
    }
    if (kind == "coverage")
      return CubeFunction::coverage(n, field<std::vector<double>>(doc, "universe_weights"),
                                    field<std::vector<std::vector<int>>>(doc, "sets"));
    if (kind == "budget_additive")
      return CubeFunction::budget_additive(n, field<std::vector<double>>(doc, "weights"),
                                           field<double>(doc, "budget"));
    if (kind == "uniform_matroid") return CubeFunction::uniform_matroid_rank(n, field<int>(doc, "k"));
    throw FormatError("unknown function kind '" + kind + "'");
  });
}

json function_to_json(const CubeFunction& f) {
  json doc{{"n", f.n()}};
  std::visit(
      [&doc](const auto& r) {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, DenseTable>) {
          doc["kind"] = "dense";
          doc["table"] = r.values;
        } else if constexpr (std::is_same_v<R, GraphCut>) {
          doc["kind"] = "cut";
          json edges = json::array();
          for (const Edge& e : r.edges) edges.push_back({e.u, e.v, e.weight});
          doc["edges"] = edges;
        } else if constexpr (std::is_same_v<R, Coverage>) {
          doc["kind"] = "coverage";
          doc["universe_weights"] = r.universe_weights;
          doc["sets"] = r.sets;
        } else if constexpr (std::is_same_v<R, BudgetAdditive>) {
          doc["kind"] = "budget_additive";
          doc["weights"] = r.weights;
          doc["budget"] = r.budget;
        } else {
          doc["kind"] = "uniform_matroid";
          doc["k"] = r.k;
        }
      },
      f.repr());
  return doc;
}

ProductDistribution distribution_from_json(const json& doc) {
  if (!doc.is_object()) throw FormatError("distribution spec must be a JSON object");
  if (doc.contains("uniform"))
    return validated([&] { return ProductDistribution::uniform(field<int>(doc, "uniform")); });
  return validated([&] { return ProductDistribution(field<std::vector<double>>(doc, "p")); });
}

json distribution_to_json(const ProductDistribution& dist) { return json{{"p", dist.p()}}; }

Database database_from_json(const json& doc) {
  if (!doc.is_object()) throw FormatError("database must be a JSON object");
  const int d = field<int>(doc, "d");
  std::vector<Mask> items;
  for (const auto& row : field<std::vector<std::vector<int>>>(doc, "items")) {
    if (row.size() != static_cast<std::size_t>(d))
      throw FormatError("every item must have exactly d attributes");
    Mask r = 0;
    for (int i = 0; i < d; ++i) {
      if (row[static_cast<std::size_t>(i)] != 0 && row[static_cast<std::size_t>(i)] != 1)
        throw FormatError("attributes must be 0 or 1");
      if (row[static_cast<std::size_t>(i)] == 1) r |= Mask{1} << i;
    }
    items.push_back(r);
  }
  return validated([&] { return Database(d, std::move(items)); });
}

json database_to_json(const Database& db) {
  json items = json::array();
  for (Mask r : db.items()) {
    json row = json::array();
    for (int i = 0; i < db.dimension(); ++i) row.push_back(has_element(r, i) ? 1 : 0);
    items.push_back(row);
  }
  return json{{"d", db.dimension()}, {"items", items}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("'" + path + "': " + e.what());
  }
}

std::string subset_string(Mask s) {
  std::string out = "{";
  bool first = true;
  for (int i = 0; i < 32; ++i) {
    if (!has_element(s, i)) continue;
    if (!first) out += ',';
    out += std::to_string(i);
    first = false;
  }
  return out + "}";
}

void write_expansion_csv(std::ostream& out, const FourierExpansion& e) {
  out << "mask,subset,coefficient\n";
  for (std::size_t s = 0; s < e.coeffs.size(); ++s)
    out << s << ",\"" << subset_string(static_cast<Mask>(s)) << "\"," << format_real(e.coeffs[s]) << '\n';
}

void write_polynomial_csv(std::ostream& out, const TruncatedPolynomial& p) {
  out << "mask,subset,coefficient\n";
  for (const auto& [s, c] : p.terms())
    out << s << ",\"" << subset_string(s) << "\"," << format_real(c) << '\n';
}

}  // namespace submodstab::io
