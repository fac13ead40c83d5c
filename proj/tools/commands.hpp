#ifndef KRC_TOOLS_COMMANDS_HPP
#define KRC_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <optional>
#include <string>

namespace krc::cli {

// Exit codes: 0 success, 1 mathematical failure (untight cost, duality gap,
// bound violation), 2 input error (bad file, unknown name). Input errors
// throw krc::InputError and are mapped in main().
inline constexpr int kExitOk = 0;
inline constexpr int kExitMathFailure = 1;
inline constexpr int kExitInputError = 2;

struct CommonOptions {
  std::string file;
  bool json = false;
  bool apply_closure = false;  // replace the cost by its path closure
};

int cmd_validate(const CommonOptions& opt);

struct OtOptions : CommonOptions {
  std::string mu_name;
  std::string nu_name;
  bool show_dual = false;
};
int cmd_ot(const OtOptions& opt);

struct TauOptions : CommonOptions {
  bool with_beta = false;
  std::optional<std::string> bound_x0;  // label of the base point
  bool bound_min = false;               // tightest bound over all x0
};
int cmd_tau(const TauOptions& opt);

struct ReconstructOptions : CommonOptions {
  std::optional<std::size_t> sample_count;
  std::uint64_t seed = 0;
  std::optional<std::string> csv_path;
};
int cmd_reconstruct(const ReconstructOptions& opt);

struct ChainOptions : CommonOptions {
  std::size_t steps = 10;
};
int cmd_chain(const ChainOptions& opt);

}  // namespace krc::cli

#endif  // KRC_TOOLS_COMMANDS_HPP
