// Acceptance runner: one PASS/FAIL line per numbered criterion, then one line
// for the fixture presence and golden-output checks. Exit status 1 on any failure.

#include "subdiff/checks.hpp"

#include <iostream>

int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : SUBDIFF_FIXTURES_DIR;
  const auto report = subdiff::checks::run_acceptance(dir);
  bool ok = true;
  std::size_t support_failed = 0, support_total = 0;
  for (const auto& c : report.checks) {
    ok = ok && c.passed;
    if (c.criterion == 0) {
      ++support_total;
      if (!c.passed) {
        ++support_failed;
        std::cout << "  " << c.name << ": " << c.detail << "\n";
      }
      continue;
    }
    std::cout << (c.passed ? "PASS" : "FAIL") << " criterion " << c.criterion << " [" << c.seconds << " s] " << c.name
              << "\n    " << c.detail << "\n";
  }
  std::cout << (support_failed == 0 ? "PASS" : "FAIL") << " fixtures and golden outputs ("
            << support_total - support_failed << "/" << support_total << ")\n";
  return ok ? 0 : 1;
}
