#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace mskit {

struct PaperCheck {
  std::string name;
  std::string expected;
  std::string got;
  bool pass = false;
};

/// Names of the bundled worked-example checks, in run order.
std::vector<std::string> paper_check_names();

/// Runs every check against the specs in `data_dir`. Failures to load or
/// evaluate a spec are reported as failed checks.
std::vector<PaperCheck> run_paper_checks(const std::filesystem::path& data_dir);

}  // namespace mskit
