#pragma once

// Acceptance suite over a fixture directory: fixture presence, golden output
// comparison, and the numbered criteria with their time limits.

#include <filesystem>
#include <string>
#include <vector>

namespace subdiff::checks {

struct CheckResult {
  /// 0 for fixture and golden checks, otherwise the criterion number.
  int criterion = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceReport {
  std::vector<CheckResult> checks;

  bool all_passed() const;
  /// TAP-style listing, one line per check plus indented detail lines.
  std::string tap() const;
};

/// Fixture names the suite requires (files <name>.json).
const std::vector<std::string>& required_fixtures();

/// Golden outputs: fixtures/expected/<fixture>.<verb>.json holds the result of
/// a deterministic verb (outer, dfamily, erbound) on that fixture.
std::vector<CheckResult> check_goldens(const std::filesystem::path& fixtures_dir);

std::vector<CheckResult> check_fixtures_present(const std::filesystem::path& fixtures_dir);

CheckResult criterion_1(const std::filesystem::path& dir);
CheckResult criterion_2(const std::filesystem::path& dir);
CheckResult criterion_3(const std::filesystem::path& dir);
CheckResult criterion_4(const std::filesystem::path& dir);
CheckResult criterion_5(const std::filesystem::path& dir);
CheckResult criterion_6(std::uint64_t seed = 20240601);
CheckResult criterion_7(const std::filesystem::path& dir);
CheckResult criterion_8(const std::filesystem::path& dir);

/// Everything above. Criteria whose fixtures are missing are reported failed.
AcceptanceReport run_acceptance(const std::filesystem::path& fixtures_dir);

/// Result a golden file stores for (fixture, verb).
std::string golden_result(const std::filesystem::path& fixtures_dir, const std::string& fixture,
                          const std::string& verb);

}  // namespace subdiff::checks
