#include "tceer/fuzzy.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

namespace tceer {

namespace {
std::atomic<std::uint64_t> g_clamp_count{0};
}

std::uint64_t fuzzify_clamp_count() { return g_clamp_count.load(); }
void reset_fuzzify_clamp_count() { g_clamp_count.store(0); }

double MembershipFunction::mu(double x) const {
  if (x < a || x > c) return 0.0;
  const double up = (b > a) ? (x - a) / (b - a) : 1.0;
  const double down = (c > b) ? (c - x) / (c - b) : 1.0;
  return std::max(0.0, std::min(up, down));
}

std::vector<double> FuzzyVariable::fuzzify(double x) const {
  if (x < 0.0 || x > 1.0) {
    ++g_clamp_count;
    x = std::clamp(x, 0.0, 1.0);
  }
  std::vector<double> degrees(terms.size());
  for (std::size_t t = 0; t < terms.size(); ++t) degrees[t] = terms[t].mu(x);
  return degrees;
}

int FuzzyVariable::term_index(std::string_view label) const {
  for (std::size_t t = 0; t < terms.size(); ++t)
    if (terms[t].label == label) return static_cast<int>(t);
  return -1;
}

double FuzzyController::infer(double x1, double x2) const {
  return infer_at_resolution(x1, x2, resolution);
}

double FuzzyController::infer_at_resolution(double x1, double x2, int res) const {
  const auto m1 = input1.fuzzify(x1);
  const auto m2 = input2.fuzzify(x2);
  const std::size_t nt = output.terms.size();

  // Clip level per output term: max over rules of min-activation.
  std::vector<double> clip(nt, 0.0);
  for (std::size_t t1 = 0; t1 < m1.size(); ++t1) {
    if (m1[t1] == 0.0) continue;
    for (std::size_t t2 = 0; t2 < m2.size(); ++t2) {
      const double act = std::min(m1[t1], m2[t2]);
      if (act == 0.0) continue;
      const int out = rule(static_cast<int>(t1), static_cast<int>(t2));
      if (act > clip[static_cast<std::size_t>(out)])
        clip[static_cast<std::size_t>(out)] = act;
    }
  }

  const bool cached = (res == resolution) && !term_samples_.empty();
  const double h = 1.0 / (res - 1);
  double num = 0.0, den = 0.0;
  for (int i = 0; i < res; ++i) {
    const double y = i * h;
    double m = 0.0;
    for (std::size_t t = 0; t < nt; ++t) {
      if (clip[t] == 0.0) continue;
      const double mu_t = cached ? term_samples_[t][static_cast<std::size_t>(i)]
                                 : output.terms[t].mu(y);
      m = std::max(m, std::min(clip[t], mu_t));
    }
    const double w = (i == 0 || i == res - 1) ? 0.5 : 1.0;
    den += w * m;
    num += w * m * y;
  }
  if (den <= 1e-300) return 0.5;  // unreachable with covering partitions
  return num / den;
}

void FuzzyController::finalize() {
  term_samples_.assign(output.terms.size(), {});
  const double h = 1.0 / (resolution - 1);
  for (std::size_t t = 0; t < output.terms.size(); ++t) {
    term_samples_[t].resize(static_cast<std::size_t>(resolution));
    for (int i = 0; i < resolution; ++i)
      term_samples_[t][static_cast<std::size_t>(i)] = output.terms[t].mu(i * h);
  }
}

namespace {

void validate_variable(const FuzzyVariable& v, const std::string& where) {
  if (v.terms.empty())
    throw std::invalid_argument(where + ": variable has no terms");
  for (const auto& t : v.terms) {
    if (!(t.a <= t.b && t.b <= t.c))
      throw std::invalid_argument(where + ": term " + t.label +
                                  " breakpoints must satisfy a <= b <= c");
    if (t.a < 0.0 || t.c > 1.0)
      throw std::invalid_argument(where + ": term " + t.label +
                                  " leaves the universe [0,1]");
  }
  // Coverage: some term must be active everywhere on the universe.
  const int probes = 2001;
  for (int i = 0; i < probes; ++i) {
    const double x = static_cast<double>(i) / (probes - 1);
    double s = 0.0;
    for (const auto& t : v.terms) s += t.mu(x);
    if (s <= 0.0)
      throw std::invalid_argument(where + ": terms do not cover the universe near x=" +
                                  std::to_string(x));
  }
}

}  // namespace

void FuzzyController::validate() const {
  validate_variable(input1, name + "." + input1.name);
  validate_variable(input2, name + "." + input2.name);
  validate_variable(output, name + "." + output.name);
  const std::size_t n1 = input1.terms.size(), n2 = input2.terms.size();
  if (rule_table.size() != n1 * n2)
    throw std::invalid_argument(name + ": rule table must cover every term pair");
  for (int out : rule_table)
    if (out < 0 || out >= static_cast<int>(output.terms.size()))
      throw std::invalid_argument(name + ": rule output term out of range");
  for (std::size_t t1 = 0; t1 < n1; ++t1) {
    for (std::size_t t2 = 0; t2 < n2; ++t2) {
      const int here = rule(static_cast<int>(t1), static_cast<int>(t2));
      if (t1 + 1 < n1 && rule(static_cast<int>(t1 + 1), static_cast<int>(t2)) < here)
        throw std::invalid_argument(name + ": rule table not monotone in input 1");
      if (t2 + 1 < n2 && rule(static_cast<int>(t1), static_cast<int>(t2 + 1)) < here)
        throw std::invalid_argument(name + ": rule table not monotone in input 2");
    }
  }
  if (resolution < 3)
    throw std::invalid_argument(name + ": defuzzifier resolution too small");
}

namespace {

FuzzyVariable three_term_input(std::string name) {
  FuzzyVariable v;
  v.name = std::move(name);
  v.terms = {{"Low", 0.0, 0.0, 0.5}, {"Medium", 0.0, 0.5, 1.0}, {"High", 0.5, 1.0, 1.0}};
  return v;
}

FuzzyVariable five_term_output(std::string name) {
  FuzzyVariable v;
  v.name = std::move(name);
  v.terms = {{"VeryLow", 0.0, 0.0, 0.25},
             {"Low", 0.0, 0.25, 0.5},
             {"Medium", 0.25, 0.5, 0.75},
             {"High", 0.5, 0.75, 1.0},
             {"VeryHigh", 0.75, 1.0, 1.0}};
  return v;
}

constexpr int VL = 0, LO = 1, MD = 2, HI = 3, VH = 4;

}  // namespace

FuzzyController make_tcm_controller() {
  FuzzyController c;
  c.name = "tcm";
  c.input1 = three_term_input("trust");
  c.input2 = three_term_input("cci");
  c.output = five_term_output("tcm");
  // Trust is safety-critical: the low-trust row never rises above Low;
  // congestion degrades but does not zero a high-trust node.
  c.rule_table = {
      VL, VL, LO,  // trust Low  x cci Low/Medium/High
      LO, MD, HI,  // trust Medium
      LO, HI, VH,  // trust High
  };
  c.validate();
  c.finalize();
  return c;
}

FuzzyController apply_flc_overrides(FuzzyController c, const FlcOverrides& overrides) {
  auto variable_of = [&c](const std::string& vname) -> FuzzyVariable& {
    if (vname == "input1") return c.input1;
    if (vname == "input2") return c.input2;
    if (vname == "output") return c.output;
    throw std::invalid_argument(c.name + ": unknown controller variable '" + vname + "'");
  };

  std::vector<std::string> cleared;
  for (const auto& ts : overrides.terms) {
    if (ts.controller != c.name) continue;
    FuzzyVariable& v = variable_of(ts.variable);
    if (std::find(cleared.begin(), cleared.end(), ts.variable) == cleared.end()) {
      cleared.push_back(ts.variable);
      v.terms.clear();
    }
    v.terms.push_back({ts.label, ts.a, ts.b, ts.c});
  }

  bool any_rule = false;
  for (const auto& rs : overrides.rules)
    if (rs.controller == c.name) any_rule = true;
  if (any_rule) {
    const std::size_t n1 = c.input1.terms.size(), n2 = c.input2.terms.size();
    std::vector<int> table(n1 * n2, -1);
    for (const auto& rs : overrides.rules) {
      if (rs.controller != c.name) continue;
      const int i1 = c.input1.term_index(rs.t1);
      const int i2 = c.input2.term_index(rs.t2);
      const int io = c.output.term_index(rs.out);
      if (i1 < 0) throw std::invalid_argument(c.name + ": unknown input1 term '" + rs.t1 + "'");
      if (i2 < 0) throw std::invalid_argument(c.name + ": unknown input2 term '" + rs.t2 + "'");
      if (io < 0) throw std::invalid_argument(c.name + ": unknown output term '" + rs.out + "'");
      const std::size_t k = static_cast<std::size_t>(i1) * n2 + static_cast<std::size_t>(i2);
      if (table[k] != -1)
        throw std::invalid_argument(c.name + ": duplicate rule for (" + rs.t1 + ", " + rs.t2 + ")");
      table[k] = io;
    }
    for (std::size_t t1 = 0; t1 < n1; ++t1)
      for (std::size_t t2 = 0; t2 < n2; ++t2)
        if (table[t1 * n2 + t2] == -1)
          throw std::invalid_argument(c.name + ": rule table incomplete, missing (" +
                                      c.input1.terms[t1].label + ", " +
                                      c.input2.terms[t2].label + ")");
    c.rule_table = std::move(table);
  }

  c.validate();
  c.finalize();
  return c;
}

FuzzyController make_edm_controller() {
  FuzzyController c;
  c.name = "edm";
  c.input1 = three_term_input("energy");
  c.input2 = three_term_input("distance");
  c.output = five_term_output("edm");
  // Symmetric: either factor can partially compensate the other.
  c.rule_table = {
      VL, LO, MD,  // energy Low  x distance Low/Medium/High
      LO, MD, HI,  // energy Medium
      MD, HI, VH,  // energy High
  };
  c.validate();
  c.finalize();
  return c;
}

}  // namespace tceer
