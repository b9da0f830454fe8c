#pragma once

// File formats.
//
// Function spec (JSON):
//   {"n": int, "kind": "dense"|"cut"|"coverage"|"budget_additive"|"uniform_matroid", ...}
//   dense:            "table": [2^n reals], index = subset mask
//   cut:              "edges": [[i, j, w], ...]
//   coverage:         "universe_weights": [reals], "sets": [[indices], ...]   (n sets)
//   budget_additive:  "weights": [reals], "budget": real
//   uniform_matroid:  "k": int
// Distribution spec (JSON): {"p": [reals]} or {"uniform": n}
// Database (JSON): {"d": int, "items": [[0/1, ...], ...]}
// Expansion dump (CSV): mask,subset,coefficient

#include <iosfwd>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "submodstab/cube_fn.hpp"
#include "submodstab/dist_fourier.hpp"
#include "submodstab/dp_release.hpp"
#include "submodstab/lowdeg_approx.hpp"

namespace submodstab::io {

/// Malformed or inconsistent input document.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

CubeFunction function_from_json(const nlohmann::json& doc);
nlohmann::json function_to_json(const CubeFunction& f);

ProductDistribution distribution_from_json(const nlohmann::json& doc);
nlohmann::json distribution_to_json(const ProductDistribution& dist);

Database database_from_json(const nlohmann::json& doc);
nlohmann::json database_to_json(const Database& db);

/// Parses a file; wraps parse and validation failures in FormatError with the path.
nlohmann::json read_json_file(const std::string& path);

/// "{0,3}" style rendering of a subset (0-based).
std::string subset_string(Mask s);

void write_expansion_csv(std::ostream& out, const FourierExpansion& e);
void write_polynomial_csv(std::ostream& out, const TruncatedPolynomial& p);

}  // namespace submodstab::io
