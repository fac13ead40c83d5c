#include "krc/finite_space.hpp"

#include <string>

#include "krc/errors.hpp"

namespace krc {

FiniteSpace::FiniteSpace(std::vector<std::string> labels)
    : labels_(std::move(labels)) {
  if (labels_.empty()) {
    throw InputError("FiniteSpace: need at least one point");
  }
  index_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    auto [it, inserted] = index_.emplace(labels_[i], i);
    if (!inserted) {
      throw InputError("FiniteSpace: duplicate label \"" + labels_[i] + "\"");
    }
  }
}

std::optional<std::size_t> FiniteSpace::index_of(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SpacePtr make_space(std::vector<std::string> labels) {
  return std::make_shared<const FiniteSpace>(std::move(labels));
}

SpacePtr make_space(std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return make_space(std::move(labels));
}

bool same_space(const SpacePtr& a, const SpacePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

}  // namespace krc
