#pragma once

// The operations behind the command-line verbs, producing result documents.

#include "subdiff/io.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace subdiff::commands {

using io::json;

enum class OuterMode { Exact, Sample };

struct OuterRequest {
  OuterMode mode = OuterMode::Exact;
  bool closure = false;
  std::optional<std::size_t> dirs;
  std::optional<std::uint64_t> seed;
};

/// Outer-limit union (exact sweep) or sampled cloud. Throws
/// UnsupportedDimension when an exact sweep is requested for n > 2.
json outer(const io::Problem& p, const OuterRequest& req);

/// D family for a single-component problem.
json dfamily(const io::Problem& p);
/// D family for {"gradients": [[...], ...]}; exact unless a float forces otherwise.
json dfamily_from_gradients(const json& doc);

struct ErboundRequest {
  bool empirical = false;
  std::optional<std::uint64_t> seed;
};

json erbound(const io::Problem& p, const ErboundRequest& req);

struct OracleRequest {
  std::optional<std::vector<double>> radii;
  std::optional<std::size_t> dirs;
  std::optional<std::uint64_t> seed;
};

json oracle(const io::Problem& p, const OracleRequest& req);

/// Subdifferentials of the active components at the basepoint.
json basepoint_subdifferentials(const io::Problem& p);

}  // namespace subdiff::commands
