#include "roadweights/config.hpp"

#include <fstream>

#include "roadweights/errors.hpp"
#include "text.hpp"

namespace roadweights {

std::string_view to_string(Variant variant) {
  switch (variant) {
    case Variant::kF1:
      return "F1";
    case Variant::kF2:
      return "F2";
    case Variant::kF3:
      return "F3";
    case Variant::kF4:
      return "F4";
  }
  return "?";
}

std::optional<Variant> parse_variant(std::string_view text) {
  for (Variant v : kAllVariants)
    if (to_string(v) == text) return v;
  return std::nullopt;
}

Penalties penalties_for(Variant variant, const Penalties& base) {
  Penalties p = base;
  if (variant == Variant::kF1 || variant == Variant::kF3) p.alpha = 0.0;
  if (variant == Variant::kF1 || variant == Variant::kF2) p.beta = 0.0;
  return p;
}

void RunConfig::validate() const {
  if (!(penalties.alpha >= 0.0) || !(penalties.beta >= 0.0))
    throw_contract("alpha and beta must be non-negative");
  if (!(penalties.gamma > 0.0)) throw_contract("gamma must be positive");
  if (!(similarity_threshold > 0.0 && similarity_threshold <= 1.0))
    throw_contract("similarity_threshold must lie in (0, 1]");
  if (!(highway_cutoff_kmh > 0.0)) throw_contract("highway_cutoff_kmh must be positive");
  if (!(default_speed_kmh > 0.0)) throw_contract("default_speed_kmh must be positive");
  if (!(cg_tol > 0.0) || cg_max_iters < 0)
    throw_contract("cg_tol must be positive and cg_max_iters non-negative");
  if (!(pr_tol > 0.0) || pr_max_iters < 0)
    throw_contract("pr_tol must be positive and pr_max_iters non-negative");
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw_contract("train_fraction must lie in (0, 1)");
}

namespace {

double need_double(std::string_view key, std::string_view value) {
  auto x = text::parse_double(value);
  if (!x) throw_contract("config: '" + std::string(key) + "' expects a number");
  return *x;
}

template <typename Int>
Int need_int(std::string_view key, std::string_view value) {
  auto x = text::parse_int<Int>(value);
  if (!x) throw_contract("config: '" + std::string(key) + "' expects an integer");
  return *x;
}

std::string_view to_string(SimilarityMode mode) {
  switch (mode) {
    case SimilarityMode::kAuto:
      return "auto";
    case SimilarityMode::kAllPairs:
      return "all-pairs";
    case SimilarityMode::kSortedSweep:
      return "sorted-sweep";
  }
  return "?";
}

}  // namespace

void RunConfig::set(std::string_view key, std::string_view raw) {
  const auto value = text::trim(raw);
  if (key == "alpha") {
    penalties.alpha = need_double(key, value);
  } else if (key == "beta") {
    penalties.beta = need_double(key, value);
  } else if (key == "gamma") {
    penalties.gamma = need_double(key, value);
  } else if (key == "similarity_threshold") {
    similarity_threshold = need_double(key, value);
  } else if (key == "similarity_mode") {
    if (value == "auto") similarity_mode = SimilarityMode::kAuto;
    else if (value == "all-pairs") similarity_mode = SimilarityMode::kAllPairs;
    else if (value == "sorted-sweep") similarity_mode = SimilarityMode::kSortedSweep;
    else throw_contract("config: unknown similarity_mode '" + std::string(value) + "'");
  } else if (key == "highway_cutoff_kmh") {
    highway_cutoff_kmh = need_double(key, value);
  } else if (key == "default_speed_kmh") {
    default_speed_kmh = need_double(key, value);
  } else if (key == "cg_tol") {
    cg_tol = need_double(key, value);
  } else if (key == "cg_max_iters") {
    cg_max_iters = need_int<int>(key, value);
  } else if (key == "jacobi") {
    if (value == "true" || value == "1") jacobi = true;
    else if (value == "false" || value == "0") jacobi = false;
    else throw_contract("config: 'jacobi' expects true or false");
  } else if (key == "pr_tol") {
    pr_tol = need_double(key, value);
  } else if (key == "pr_max_iters") {
    pr_max_iters = need_int<int>(key, value);
  } else if (key == "seed") {
    seed = need_int<std::uint64_t>(key, value);
  } else if (key == "train_fraction") {
    train_fraction = need_double(key, value);
  } else if (key == "variant") {
    auto v = parse_variant(value);
    if (!v) throw_contract("config: unknown variant '" + std::string(value) + "'");
    variant = *v;
  } else {
    throw_contract("config: unknown key '" + std::string(key) + "'");
  }
}

std::vector<std::pair<std::string, std::string>> RunConfig::entries() const {
  using text::format_double;
  return {
      {"alpha", format_double(penalties.alpha)},
      {"beta", format_double(penalties.beta)},
      {"gamma", format_double(penalties.gamma)},
      {"similarity_threshold", format_double(similarity_threshold)},
      {"similarity_mode", std::string(to_string(similarity_mode))},
      {"highway_cutoff_kmh", format_double(highway_cutoff_kmh)},
      {"default_speed_kmh", format_double(default_speed_kmh)},
      {"cg_tol", format_double(cg_tol)},
      {"cg_max_iters", std::to_string(cg_max_iters)},
      {"jacobi", jacobi ? "true" : "false"},
      {"pr_tol", format_double(pr_tol)},
      {"pr_max_iters", std::to_string(pr_max_iters)},
      {"seed", std::to_string(seed)},
      {"train_fraction", format_double(train_fraction)},
      {"variant", std::string(to_string(variant))},
  };
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config file " + path.string());
  RunConfig config;
  std::vector<Diagnostic> problems;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    auto body = text::trim(std::string_view(line).substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      problems.push_back({ErrorCode::kMalformedRow, path.string(), number,
                          "expected key=value"});
      continue;
    }
    try {
      config.set(text::trim(body.substr(0, eq)), body.substr(eq + 1));
    } catch (const Error& e) {
      problems.push_back({ErrorCode::kMalformedRow, path.string(), number, e.what()});
    }
  }
  if (!problems.empty()) throw ValidationError(std::move(problems));
  return config;
}

}  // namespace roadweights
