// Problem-file parsing for the krc command line tool. One JSON file holds a
// space (with a cost matrix or a named metric), named measures, and optional
// joint / family / chain blocks; commands reference the pieces they need.
#ifndef KRC_TOOLS_PROBLEM_HPP
#define KRC_TOOLS_PROBLEM_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "krc/cost.hpp"
#include "krc/dependence.hpp"
#include "krc/measures.hpp"
#include "krc/param.hpp"

namespace krc::cli {

struct ChainSpec {
  std::vector<double> transition;  // row-major over the space
  ProbVec init;
};

struct Problem {
  int version = 1;
  SpacePtr space;                       // null when no space block
  std::optional<CostMatrix> cost;       // explicit matrix or named metric
  std::map<std::string, ProbVec> measures;
  std::optional<JointLaw> joint;
  std::map<std::string, RandomMeasureFamily> families;
  std::optional<ChainSpec> chain;
};

/// Parses a problem from JSON. Field errors carry the offending path, e.g.
/// "space.cost[2]: row length mismatch".
Problem parse_problem(const nlohmann::json& j);

struct LoadedProblem {
  Problem problem;
  std::string digest;  // fnv1a-64 of the raw bytes, hex
};

/// Reads and parses a file; parse errors carry the byte position.
LoadedProblem load_problem(const std::string& path);

std::string fnv1a_hex(const std::string& bytes);

}  // namespace krc::cli

#endif  // KRC_TOOLS_PROBLEM_HPP
