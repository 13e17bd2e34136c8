#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace orbitfisher::acceptance {

struct Check {
  enum class Sense { at_most, at_least };
  std::string label;
  double measured = 0.0;
  double bound = 0.0;
  Sense sense = Sense::at_most;
  bool show_value = true;  // false for wall-clock checks, keeps output byte-stable
  bool pass() const;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  std::vector<Check> checks;
  std::string note;
  bool pass() const;
};

struct Options {
  std::uint64_t seed = 12345;
  /// Tightens every at_most bound to min(bound, tol).
  std::optional<double> tol;
};

CriterionResult sld_contract(const Options& opt);
CriterionResult pullback_theorem(const Options& opt);
CriterionResult symplecticity(const Options& opt);
CriterionResult u3_closed_form(const Options& opt);
CriterionResult bures_identities(const Options& opt);
CriterionResult structure_maps(const Options& opt);
CriterionResult orbit_accounting(const Options& opt);
CriterionResult equivariance(const Options& opt);
CriterionResult degeneration(const Options& opt);

std::vector<CriterionResult> run_all(const Options& opt);

/// "PASS [k] name: label measured <= bound; ..." (single line, no newline).
std::string format_line(const CriterionResult& r);

}  // namespace orbitfisher::acceptance
