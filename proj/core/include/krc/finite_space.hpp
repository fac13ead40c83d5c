#ifndef KRC_FINITE_SPACE_HPP
#define KRC_FINITE_SPACE_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace krc {

/// A finite labeled point space. The label order is canonical: every vector,
/// matrix and CDF in the library is indexed in this order.
class FiniteSpace {
 public:
  /// Throws InputError if labels are empty or not pairwise distinct.
  explicit FiniteSpace(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_[i]; }

  std::optional<std::size_t> index_of(std::string_view label) const;

  friend bool operator==(const FiniteSpace& a, const FiniteSpace& b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

using SpacePtr = std::shared_ptr<const FiniteSpace>;

SpacePtr make_space(std::vector<std::string> labels);

/// Convenience space with labels "0", "1", ..., "n-1".
SpacePtr make_space(std::size_t n);

/// True when both handles refer to the same space (by identity or by content).
bool same_space(const SpacePtr& a, const SpacePtr& b);

}  // namespace krc

#endif  // KRC_FINITE_SPACE_HPP
