#pragma once

// Front end for `conc-bounds`. Records go to `out` (JSON lines or CSV),
// diagnostics to `err`.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error,
// 3 numerical failure.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace concbounds::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitUsage = 2,
  kExitNumerical = 3,
};

using ParamValue = std::variant<double, std::string>;

struct ResultField {
  std::string name;
  std::optional<double> value;
  std::optional<double> std_error;
  std::optional<std::string> verdict;

  bool operator==(const ResultField&) const = default;
};

struct Meta {
  std::string version = kVersion;
  std::optional<std::uint64_t> seed;
  std::string timestamp;

  bool operator==(const Meta&) const = default;
};

struct OutputRecord {
  std::string command;
  std::vector<std::pair<std::string, ParamValue>> params;
  std::vector<ResultField> results;
  Meta meta;

  nlohmann::ordered_json to_json() const;
  static OutputRecord from_json(const nlohmann::ordered_json& j);

  bool operator==(const OutputRecord&) const = default;
};

/// A double as CSV text: 17 significant digits, empty for null.
std::string csv_number(std::optional<double> v);

/// Runs one command line (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace concbounds::cli
