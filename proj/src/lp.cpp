#include "steinlab/lp.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace steinlab {

namespace {

constexpr double kPivotEps = 1e-9;
constexpr double kCostEps = 1e-9;
constexpr long kMaxPivots = 2000000;

struct Tableau {
  // rows 0..m-1: constraints; implicit objective handled via cost vector.
  std::size_t m = 0, ncols = 0;
  std::vector<double> t;  // m x (ncols + 1), last column = rhs
  std::vector<int> basis;
  std::vector<bool> banned;  // columns barred from entering (artificials)

  double& at(std::size_t i, std::size_t j) { return t[i * (ncols + 1) + j]; }
  double at(std::size_t i, std::size_t j) const { return t[i * (ncols + 1) + j]; }
  double& rhs(std::size_t i) { return t[i * (ncols + 1) + ncols]; }
  double rhs(std::size_t i) const { return t[i * (ncols + 1) + ncols]; }

  void pivot(std::size_t pr, std::size_t pc) {
    double piv = at(pr, pc);
    double inv = 1.0 / piv;
    for (std::size_t j = 0; j <= ncols; ++j) at(pr, j) *= inv;
    at(pr, pc) = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == pr) continue;
      double f = at(i, pc);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= ncols; ++j) at(i, j) -= f * at(pr, j);
      at(i, pc) = 0.0;
    }
    basis[pr] = static_cast<int>(pc);
  }
};

// Runs simplex iterations minimizing cost over the current tableau.
// Returns false if unbounded. Bland's rule throughout.
bool run_simplex(Tableau& tb, const std::vector<double>& cost, long& pivots) {
  std::size_t m = tb.m, ncols = tb.ncols;
  std::vector<double> red(ncols + 1);
  while (true) {
    // Reduced costs: c_j - c_B . column_j, rebuilt each iteration for numerical
    // hygiene (problem sizes are small).
    for (std::size_t j = 0; j <= ncols; ++j) red[j] = (j < ncols) ? cost[j] : 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double cb = cost[static_cast<std::size_t>(tb.basis[i])];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= ncols; ++j) red[j] -= cb * tb.at(i, j);
    }
    // Bland entering rule: lowest index with negative reduced cost.
    std::size_t enter = ncols;
    for (std::size_t j = 0; j < ncols; ++j) {
      if (tb.banned[j]) continue;
      if (red[j] < -kCostEps) {
        enter = j;
        break;
      }
    }
    if (enter == ncols) return true;  // optimal
    // Ratio test; ties resolved by lowest basic-variable index.
    std::size_t leave = m;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      double a = tb.at(i, enter);
      if (a > kPivotEps) {
        double ratio = tb.rhs(i) / a;
        if (ratio < best - 1e-12 ||
            (ratio < best + 1e-12 && (leave == m || tb.basis[i] < tb.basis[leave]))) {
          best = ratio;
          leave = i;
        }
      }
    }
    if (leave == m) return false;  // unbounded direction
    tb.pivot(leave, enter);
    if (++pivots > kMaxPivots) throw std::runtime_error("simplex: pivot limit exceeded");
  }
}

}  // namespace

LpResult solve_lp(const LinearProgram& lp) {
  std::size_t n = static_cast<std::size_t>(lp.num_vars);
  std::size_t m = lp.rows.size();
  // Count auxiliary columns.
  std::size_t n_slack = 0, n_art = 0;
  for (const auto& row : lp.rows) {
    bool flip = row.b < 0.0;
    char rel = row.rel;
    if (flip) rel = (rel == '<') ? '>' : (rel == '>') ? '<' : '=';
    if (rel == '<') {
      n_slack += 1;  // slack enters the basis directly
    } else if (rel == '>') {
      n_slack += 1;
      n_art += 1;
    } else {
      n_art += 1;
    }
  }
  Tableau tb;
  tb.m = m;
  tb.ncols = n + n_slack + n_art;
  tb.t.assign(m * (tb.ncols + 1), 0.0);
  tb.basis.assign(m, -1);
  tb.banned.assign(tb.ncols, false);

  std::size_t slack_at = n;
  std::size_t art_at = n + n_slack;
  std::vector<std::size_t> art_cols;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& row = lp.rows[i];
    double sign = row.b < 0.0 ? -1.0 : 1.0;
    char rel = row.rel;
    if (sign < 0) rel = (rel == '<') ? '>' : (rel == '>') ? '<' : '=';
    for (std::size_t j = 0; j < n; ++j) tb.at(i, j) = sign * row.a[j];
    tb.rhs(i) = sign * row.b;
    if (rel == '<') {
      tb.at(i, slack_at) = 1.0;
      tb.basis[i] = static_cast<int>(slack_at);
      ++slack_at;
    } else if (rel == '>') {
      tb.at(i, slack_at) = -1.0;  // surplus
      ++slack_at;
      tb.at(i, art_at) = 1.0;
      tb.basis[i] = static_cast<int>(art_at);
      art_cols.push_back(art_at);
      ++art_at;
    } else {
      tb.at(i, art_at) = 1.0;
      tb.basis[i] = static_cast<int>(art_at);
      art_cols.push_back(art_at);
      ++art_at;
    }
  }

  LpResult res;
  res.pivots = 0;

  if (!art_cols.empty()) {
    std::vector<double> phase1(tb.ncols, 0.0);
    for (std::size_t j : art_cols) phase1[j] = 1.0;
    if (!run_simplex(tb, phase1, res.pivots))
      throw std::runtime_error("simplex: phase 1 unbounded");
    double infeas = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      if (phase1[static_cast<std::size_t>(tb.basis[i])] > 0.0) infeas += tb.rhs(i);
    if (infeas > 1e-7) {
      res.status = LpResult::Status::infeasible;
      return res;
    }
    // Drive artificials out of the basis where a real pivot exists.
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t b = static_cast<std::size_t>(tb.basis[i]);
      if (phase1[b] == 0.0) continue;
      for (std::size_t j = 0; j < n + n_slack; ++j) {
        if (std::abs(tb.at(i, j)) > kPivotEps) {
          tb.pivot(i, j);
          break;
        }
      }
    }
    for (std::size_t j : art_cols) tb.banned[j] = true;
  }

  std::vector<double> cost(tb.ncols, 0.0);
  for (std::size_t j = 0; j < n; ++j) cost[j] = lp.c[j];
  if (!run_simplex(tb, cost, res.pivots)) {
    res.status = LpResult::Status::unbounded;
    return res;
  }

  res.status = LpResult::Status::optimal;
  res.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t b = static_cast<std::size_t>(tb.basis[i]);
    if (b < n) res.x[b] = tb.rhs(i);
  }
  double obj = 0.0;
  for (std::size_t j = 0; j < n; ++j) obj += lp.c[j] * res.x[j];
  res.objective = obj;
  return res;
}

LpResult solve_lp_lex_min(const LinearProgram& lp, int lex_vars) {
  LpResult base = solve_lp(lp);
  if (base.status != LpResult::Status::optimal || lex_vars <= 0) return base;
  LinearProgram work = lp;
  // Pin the optimum, then minimize coordinates in index order.
  work.add_row(lp.c, '<', base.objective + 1e-10);
  LpResult last = base;
  for (int j = 0; j < lex_vars && j < lp.num_vars; ++j) {
    std::vector<double> obj(static_cast<std::size_t>(lp.num_vars), 0.0);
    obj[static_cast<std::size_t>(j)] = 1.0;
    LinearProgram step = work;
    step.c = obj;
    LpResult r = solve_lp(step);
    if (r.status != LpResult::Status::optimal) return last;  // numerically stuck; keep base
    std::vector<double> pin(static_cast<std::size_t>(lp.num_vars), 0.0);
    pin[static_cast<std::size_t>(j)] = 1.0;
    work.add_row(pin, '<', r.objective + 1e-10);
    last = r;
  }
  last.objective = 0.0;
  for (int j = 0; j < lp.num_vars; ++j)
    last.objective += lp.c[static_cast<std::size_t>(j)] * last.x[static_cast<std::size_t>(j)];
  last.pivots += base.pivots;
  return last;
}

}  // namespace steinlab
