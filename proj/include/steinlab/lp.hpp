#pragma once

#include <vector>

namespace steinlab {

// Small dense linear program: minimize c.x subject to rows, x >= 0.
// Upper bounds are expressed as explicit '<' rows by the caller.
struct LinearProgram {
  int num_vars = 0;
  std::vector<double> c;
  struct Row {
    std::vector<double> a;
    double b = 0.0;
    char rel = '<';  // '<', '=', '>'
  };
  std::vector<Row> rows;

  void add_row(std::vector<double> a, char rel, double b) {
    rows.push_back(Row{std::move(a), b, rel});
  }
};

struct LpResult {
  enum class Status { optimal, infeasible, unbounded };
  Status status = Status::optimal;
  double objective = 0.0;
  std::vector<double> x;
  long pivots = 0;
};

// Two-phase tableau simplex with Bland's rule: entering column is the lowest
// index with negative reduced cost, leaving row breaks ratio ties by the lowest
// basic-variable index. Deterministic for fixed input.
LpResult solve_lp(const LinearProgram& lp);

// Same optimum, but the returned vertex is the lexicographically smallest
// optimal x over the first lex_vars coordinates (objective pinned, coordinates
// minimized in index order). Cost grows with lex_vars; meant for small programs.
LpResult solve_lp_lex_min(const LinearProgram& lp, int lex_vars);

}  // namespace steinlab
