#include "problem.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "krc/errors.hpp"

namespace krc::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InputError(where + ": " + what);
}

const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) fail(where, std::string("missing \"") + key + "\"");
  return j.at(key);
}

std::vector<std::string> parse_labels(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a nonempty array");
  std::vector<std::string> labels;
  labels.reserve(j.size());
  for (const auto& v : j) {
    if (v.is_string()) {
      labels.push_back(v.get<std::string>());
    } else if (v.is_number()) {
      labels.push_back(json(v).dump());
    } else {
      fail(where, "labels must be strings or numbers");
    }
  }
  return labels;
}

std::vector<double> parse_vector(const json& j, std::size_t n,
                                 const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  if (j.size() != n) {
    fail(where, "expected " + std::to_string(n) + " entries, got " +
                    std::to_string(j.size()));
  }
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& v = j.at(k);
    if (!v.is_number()) fail(where + "[" + std::to_string(k) + "]",
                             "expected a number");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<double> parse_matrix(const json& j, std::size_t rows,
                                 std::size_t cols, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of rows");
  if (j.size() != rows) {
    fail(where, "expected " + std::to_string(rows) + " rows, got " +
                    std::to_string(j.size()));
  }
  std::vector<double> out;
  out.reserve(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto row =
        parse_vector(j.at(r), cols, where + "[" + std::to_string(r) + "]");
    out.insert(out.end(), row.begin(), row.end());
  }
  return out;
}

// Positions for the "line" metric: the labels when they all parse as
// numbers, point indices otherwise.
std::vector<double> line_positions(const FiniteSpace& space) {
  std::vector<double> pos;
  pos.reserve(space.size());
  for (const std::string& label : space.labels()) {
    try {
      std::size_t used = 0;
      const double v = std::stod(label, &used);
      if (used != label.size()) break;
      pos.push_back(v);
    } catch (const std::exception&) {
      break;
    }
  }
  if (pos.size() == space.size()) return pos;
  pos.clear();
  for (std::size_t i = 0; i < space.size(); ++i) pos.push_back(double(i));
  return pos;
}

void parse_space_block(const json& j, Problem& p) {
  const std::string where = "space";
  const auto labels = parse_labels(need(j, "labels", where), where + ".labels");
  p.space = make_space(labels);
  const bool has_cost = j.contains("cost");
  const bool has_metric = j.contains("metric");
  if (has_cost && has_metric) fail(where, "give either \"cost\" or \"metric\"");
  if (has_cost) {
    const std::size_t n = p.space->size();
    p.cost = CostMatrix(
        p.space, parse_matrix(j.at("cost"), n, n, where + ".cost"));
  } else if (has_metric) {
    const std::string metric = j.at("metric").get<std::string>();
    if (metric == "discrete") {
      p.cost = CostMatrix::discrete(p.space);
    } else if (metric == "line") {
      p.cost = CostMatrix::line(p.space, line_positions(*p.space));
    } else {
      fail(where + ".metric", "unknown metric \"" + metric +
                                  "\" (use \"discrete\" or \"line\")");
    }
  }
}

void parse_joint_block(const json& j, Problem& p) {
  const std::string where = "joint";
  const auto omega_labels =
      parse_labels(need(j, "omega_labels", where), where + ".omega_labels");
  SpacePtr s;
  if (j.contains("s_labels")) {
    s = make_space(parse_labels(j.at("s_labels"), where + ".s_labels"));
    if (p.space && !same_space(s, p.space)) {
      fail(where + ".s_labels", "must match space.labels");
    }
  } else if (p.space) {
    s = p.space;
  } else {
    fail(where, "needs \"s_labels\" or a space block");
  }
  const auto omega = make_space(omega_labels);
  p.joint = JointLaw(omega, s,
                     parse_matrix(need(j, "table", where), omega->size(),
                                  s->size(), where + ".table"));
}

void parse_families_block(const json& j, Problem& p) {
  if (!j.is_object()) fail("families", "expected an object of named families");
  for (const auto& [name, body] : j.items()) {
    const std::string where = "families." + name;
    if (!p.space) fail(where, "families need a space block");
    const auto omega_labels = parse_labels(
        need(body, "omega_labels", where), where + ".omega_labels");
    const auto omega = make_space(omega_labels);
    ProbVec weights(omega, parse_vector(need(body, "weights", where),
                                        omega->size(), where + ".weights"));
    const auto& margins_json = need(body, "margins", where);
    if (!margins_json.is_array() || margins_json.size() != omega->size()) {
      fail(where + ".margins", "expected one margin per atom");
    }
    std::vector<ProbVec> margins;
    margins.reserve(omega->size());
    for (std::size_t w = 0; w < omega->size(); ++w) {
      margins.emplace_back(
          p.space, parse_vector(margins_json.at(w), p.space->size(),
                                where + ".margins[" + std::to_string(w) + "]"));
    }
    p.families.emplace(
        name, RandomMeasureFamily(omega, std::move(weights),
                                  std::move(margins)));
  }
}

void parse_chain_block(const json& j, Problem& p) {
  const std::string where = "chain";
  if (!p.space) fail(where, "chains need a space block");
  const std::size_t n = p.space->size();
  std::vector<double> transition = parse_matrix(
      need(j, "transition", where), n, n, where + ".transition");
  ProbVec init(p.space, parse_vector(need(j, "init", where), n,
                                     where + ".init"));
  p.chain = ChainSpec{std::move(transition), std::move(init)};
}

}  // namespace

Problem parse_problem(const json& j) {
  if (!j.is_object()) throw InputError("problem: top level must be an object");
  Problem p;
  if (j.contains("version")) {
    if (!j.at("version").is_number_integer()) {
      fail("version", "expected an integer");
    }
    p.version = j.at("version").get<int>();
    if (p.version != 1) {
      fail("version", "unsupported version " + std::to_string(p.version));
    }
  }
  if (j.contains("space")) {
    parse_space_block(j.at("space"), p);
  } else if (j.contains("labels")) {
    // Flat layout: labels/cost/metric at the top level.
    parse_space_block(j, p);
  }
  if (j.contains("measures")) {
    const auto& m = j.at("measures");
    if (!m.is_object()) fail("measures", "expected an object");
    if (!p.space) fail("measures", "measures need a space block");
    for (const auto& [name, body] : m.items()) {
      p.measures.emplace(
          name, ProbVec(p.space, parse_vector(body, p.space->size(),
                                              "measures." + name)));
    }
  }
  if (j.contains("joint")) parse_joint_block(j.at("joint"), p);
  if (j.contains("families")) parse_families_block(j.at("families"), p);
  if (j.contains("chain")) parse_chain_block(j.at("chain"), p);
  return p;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream out;
  out << std::hex << h;
  return out.str();
}

LoadedProblem load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string bytes = buffer.str();
  json j;
  try {
    j = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": parse error at byte " +
                     std::to_string(e.byte) + ": " + e.what());
  }
  try {
    return LoadedProblem{parse_problem(j), fnv1a_hex(bytes)};
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace krc::cli
