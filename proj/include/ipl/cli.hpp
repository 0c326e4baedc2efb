#pragma once

#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "ipl/errors.hpp"
#include "ipl/experiments.hpp"

namespace ipl {

/// Bad command line; maps to exit code 2.
class UsageError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Thrown by parse_args for --help; carries the formatted help text.
class HelpRequested : public std::exception {
 public:
  explicit HelpRequested(std::string text) : text_(std::move(text)) {}
  const char* what() const noexcept override { return text_.c_str(); }

 private:
  std::string text_;
};

/// Validated command line. Flag keys are the long option names without
/// dashes ("phi-start"); values are normalized (angles in radians, numbers in
/// shortest round-trip form) so that serialize/parse is a fixed point.
struct CliCommand {
  std::string subcommand;
  std::string name;
  std::map<std::string, std::string> flags;
  std::vector<std::string> emit;
  bool operator==(const CliCommand&) const = default;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitIo = 4;

/// `args` excludes the program name.
CliCommand parse_args(std::span<const std::string> args);
std::vector<std::string> serialize(const CliCommand& command);

/// Parameter flags of a command as experiment overrides.
Overrides to_overrides(const CliCommand& command);

int exit_code_for(const std::exception& error);
int execute(const CliCommand& command, std::ostream& out);
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace ipl
