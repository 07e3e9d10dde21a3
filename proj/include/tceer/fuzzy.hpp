#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tceer {

// Triangular membership function on the universe [0,1]. Shoulder shapes
// at the universe edges are expressed with a == b or b == c.
struct MembershipFunction {
  std::string label;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  double mu(double x) const;
};

struct FuzzyVariable {
  std::string name;
  std::vector<MembershipFunction> terms;

  // Membership degree per term. Inputs outside [0,1] are clamped and the
  // module-wide diagnostic counter is bumped.
  std::vector<double> fuzzify(double x) const;

  int term_index(std::string_view label) const;  // -1 when absent
};

// Two-input Mamdani controller: min rule activation, max aggregation per
// output term, centroid defuzzification by trapezoidal integration on a
// fixed uniform sample grid.
struct FuzzyController {
  std::string name;
  FuzzyVariable input1;
  FuzzyVariable input2;
  FuzzyVariable output;
  // rule_table[t1 * |input2 terms| + t2] = output term index.
  std::vector<int> rule_table;
  int resolution = 1001;

  int rule(int t1, int t2) const {
    return rule_table[static_cast<std::size_t>(t1) * input2.terms.size() +
                      static_cast<std::size_t>(t2)];
  }

  double infer(double x1, double x2) const;
  double infer_at_resolution(double x1, double x2, int resolution) const;

  // Checks table completeness and monotonicity, term ordering and
  // universe coverage; throws std::invalid_argument on violation.
  void validate() const;

  // Precomputes output-term samples at the default resolution. Call once
  // after construction; infer falls back to direct evaluation otherwise.
  void finalize();

 private:
  std::vector<std::vector<double>> term_samples_;
};

// Controller mapping (trust, complementary congestion index) to the
// trust-congestion metric. Low trust caps the output regardless of
// congestion.
FuzzyController make_tcm_controller();

// Controller mapping (energy metric, distance metric) to the
// energy-distance metric; the two inputs compensate each other
// symmetrically.
FuzzyController make_edm_controller();

// Scenario-file overrides of term breakpoints and rule tables. Any term
// line for a variable replaces that variable's term set wholesale; any
// rule line for a controller replaces its whole table, which must then be
// complete.
struct FlcOverrides {
  struct TermSpec {
    std::string controller, variable, label;
    double a = 0.0, b = 0.0, c = 0.0;
  };
  struct RuleSpec {
    std::string controller, t1, t2, out;
  };
  std::vector<TermSpec> terms;
  std::vector<RuleSpec> rules;
  bool empty() const { return terms.empty() && rules.empty(); }
};

// Applies the overrides addressed to base.name, validates and finalizes.
FuzzyController apply_flc_overrides(FuzzyController base, const FlcOverrides& overrides);

// Count of fuzzify calls that had to clamp an out-of-universe input.
std::uint64_t fuzzify_clamp_count();
void reset_fuzzify_clamp_count();

}  // namespace tceer
