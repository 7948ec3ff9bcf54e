#include "mgids/simplex_lp.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace mgids {

namespace {

constexpr double kEps = 1e-9;

class Tableau {
 public:
  Tableau(const std::vector<double>& objective, const std::vector<LpConstraint>& constraints) {
    num_vars_ = static_cast<int>(objective.size());
    m_ = static_cast<int>(constraints.size());

    // One slack and one artificial column per row; unused columns stay zero
    // and disallowed.
    n_ = num_vars_ + m_ + m_;
    art_begin_ = num_vars_ + m_;
    rows_.assign(m_, std::vector<double>(n_ + 1, 0.0));
    basis_.assign(m_, -1);
    allowed_.assign(n_, true);
    for (int j = art_begin_; j < n_; ++j) allowed_[j] = false;  // enabled per-row below

    for (int i = 0; i < m_; ++i) {
      const auto& c = constraints[i];
      if (static_cast<int>(c.coeffs.size()) != num_vars_)
        throw std::invalid_argument("constraint width mismatch");
      double sign = c.rhs < 0.0 ? -1.0 : 1.0;
      Relation rel = c.relation;
      if (sign < 0.0 && rel != Relation::Eq)
        rel = rel == Relation::LessEq ? Relation::GreaterEq : Relation::LessEq;
      for (int j = 0; j < num_vars_; ++j) rows_[i][j] = sign * c.coeffs[j];
      rows_[i][n_] = sign * c.rhs;
      int slack = num_vars_ + i;
      if (rel == Relation::LessEq) {
        rows_[i][slack] = 1.0;
        basis_[i] = slack;
      } else {
        if (rel == Relation::GreaterEq) rows_[i][slack] = -1.0;
        int art = art_begin_ + i;
        rows_[i][art] = 1.0;
        allowed_[art] = true;
        basis_[i] = art;
      }
    }
  }

  LpResult run(const std::vector<double>& objective) {
    LpResult result;
    // Phase 1: drive artificials to zero.
    std::vector<double> phase1(n_, 0.0);
    bool any_art = false;
    for (int j = art_begin_; j < n_; ++j)
      if (allowed_[j]) {
        phase1[j] = -1.0;
        any_art = true;
      }
    if (any_art) {
      load_objective(phase1);
      if (!optimize()) throw std::logic_error("phase-1 LP unbounded");
      if (value_ < -1e-7) {
        result.status = LpStatus::Infeasible;
        return result;
      }
      // Pivot leftover artificials out where possible, then retire them.
      for (int i = 0; i < m_; ++i) {
        if (basis_[i] < art_begin_) continue;
        for (int j = 0; j < art_begin_; ++j) {
          if (allowed_[j] && std::abs(rows_[i][j]) > kEps) {
            pivot(i, j);
            break;
          }
        }
      }
      for (int j = art_begin_; j < n_; ++j) allowed_[j] = false;
    }

    std::vector<double> obj(n_, 0.0);
    for (int j = 0; j < num_vars_; ++j) obj[j] = objective[j];
    load_objective(obj);
    if (!optimize()) {
      result.status = LpStatus::Unbounded;
      return result;
    }
    result.status = LpStatus::Optimal;
    result.objective = value_;
    result.x.assign(num_vars_, 0.0);
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < num_vars_) result.x[basis_[i]] = rows_[i][n_];
    return result;
  }

 private:
  void load_objective(const std::vector<double>& obj) {
    obj_ = obj;
    reduced_.assign(n_, 0.0);
    value_ = 0.0;
    for (int j = 0; j < n_; ++j) reduced_[j] = obj[j];
    for (int i = 0; i < m_; ++i) {
      double cb = obj[basis_[i]];
      if (cb == 0.0) continue;
      for (int j = 0; j < n_; ++j) reduced_[j] -= cb * rows_[i][j];
      value_ += cb * rows_[i][n_];
    }
  }

  void pivot(int r, int c) {
    double piv = rows_[r][c];
    for (int j = 0; j <= n_; ++j) rows_[r][j] /= piv;
    for (int i = 0; i < m_; ++i) {
      if (i == r) continue;
      double f = rows_[i][c];
      if (f == 0.0) continue;
      for (int j = 0; j <= n_; ++j) rows_[i][j] -= f * rows_[r][j];
    }
    double fz = reduced_[c];
    if (fz != 0.0) {
      for (int j = 0; j < n_; ++j) reduced_[j] -= fz * rows_[r][j];
      value_ += fz * rows_[r][n_];
    }
    basis_[r] = c;
  }

  // Bland's rule: entering = lowest index with positive reduced cost,
  // leaving = lowest basic index among the minimum ratios.
  bool optimize() {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < n_; ++j) {
        if (!allowed_[j]) continue;
        if (reduced_[j] > kEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m_; ++i) {
        if (rows_[i][enter] > kEps) {
          double ratio = rows_[i][n_] / rows_[i][enter];
          if (ratio < best_ratio - kEps ||
              (ratio < best_ratio + kEps && (leave < 0 || basis_[i] < basis_[leave]))) {
            best_ratio = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }

  int num_vars_ = 0, m_ = 0, n_ = 0, art_begin_ = 0;
  std::vector<std::vector<double>> rows_;
  std::vector<double> obj_, reduced_;
  std::vector<int> basis_;
  std::vector<bool> allowed_;
  double value_ = 0.0;
};

}  // namespace

LpResult solve_lp_max(const std::vector<double>& objective,
                      const std::vector<LpConstraint>& constraints) {
  if (objective.empty()) throw std::invalid_argument("LP needs at least one variable");
  Tableau tableau(objective, constraints);
  return tableau.run(objective);
}

}  // namespace mgids
