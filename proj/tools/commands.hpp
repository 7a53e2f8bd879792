#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace nilcover::cli {

struct Options {
  unsigned p = 3;
  std::size_t cap_enum = 6;
  std::size_t cap_ambient = 24;
  std::uint64_t seed = 0;
};

struct Outcome {
  nlohmann::json result;
  std::vector<std::string> summary;
  bool ok = true;
};

Outcome run_check(const std::string& algebra_path, const Options& opts);
Outcome run_extend(const std::string& problem_path, const std::optional<std::string>& workspace_path,
                   const Options& opts);
Outcome run_cover(const std::string& experiments_path, const std::optional<std::string>& workspace_path,
                  const Options& opts);

}  // namespace nilcover::cli
