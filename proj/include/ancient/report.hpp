#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "ancient/config.hpp"

namespace ancient {

using Json = nlohmann::ordered_json;

/// Writes `text` to a temporary sibling and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& text);

Json config_json(const RunConfig& c);

/// Command output: config echo, results, and one entry per checked invariant
/// with the tolerance it was held to. Timings go to a separate file so the
/// report itself is reproducible byte for byte.
class Report {
 public:
  Report(std::string command, const RunConfig& config);

  Json& results() { return results_; }

  /// Records value `relation` tolerance ("<", "<=", ">", "finite") and
  /// returns whether it holds.
  bool check(const std::string& name, double value, const std::string& relation,
             double tolerance);
  /// Records a check whose verdict was decided elsewhere.
  bool check(const std::string& name, bool pass, const std::string& detail);

  void timing(const std::string& name, double seconds);
  bool all_pass() const;

  Json json() const;
  /// report.json and timings.json under `dir`.
  void write(const std::filesystem::path& dir) const;

 private:
  std::string command_;
  Json config_;
  Json results_ = Json::object();
  Json checks_ = Json::array();
  Json timings_ = Json::object();
  bool pass_ = true;
};

}  // namespace ancient
