#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "roadweights/objective.hpp"

namespace roadweights {

// Objective variants: F1 keeps only the misfit and L2 terms, F2 adds the
// PageRank similarity term, F3 the directional adjacency term, F4 both.
enum class Variant { kF1 = 0, kF2 = 1, kF3 = 2, kF4 = 3 };

inline constexpr Variant kAllVariants[] = {Variant::kF1, Variant::kF2,
                                           Variant::kF3, Variant::kF4};

std::string_view to_string(Variant variant);
std::optional<Variant> parse_variant(std::string_view text);

// `base` with the terms the variant leaves out set to zero.
Penalties penalties_for(Variant variant, const Penalties& base);

struct RunConfig {
  Penalties penalties;
  double similarity_threshold = 0.95;
  SimilarityMode similarity_mode = SimilarityMode::kAuto;
  double highway_cutoff_kmh = 90.0;
  double default_speed_kmh = 50.0;
  double cg_tol = 1e-8;
  int cg_max_iters = 0;
  bool jacobi = false;
  double pr_tol = 1e-10;
  int pr_max_iters = 10'000;
  std::uint64_t seed = 1;
  double train_fraction = 0.5;
  Variant variant = Variant::kF4;

  // Throws a contract error on out-of-range values.
  void validate() const;

  // Applies one `key=value` setting; throws a contract error on an unknown
  // key or unparsable value.
  void set(std::string_view key, std::string_view value);

  // Every setting as key/value text, in a fixed order.
  std::vector<std::pair<std::string, std::string>> entries() const;

  // Reads `key = value` lines; blank lines and `#` comments are skipped.
  static RunConfig from_file(const std::filesystem::path& path);
};

}  // namespace roadweights
