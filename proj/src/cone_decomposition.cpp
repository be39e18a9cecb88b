#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "orbis/error.hpp"
#include "orbis/psi.hpp"

namespace orbis {

namespace {

// Schnorr-Euchner enumeration of nonnegative bounded integer vectors c
// minimizing ||y - R c||^2 for upper triangular R, keeping the two best.
class IntegerSearch {
 public:
  IntegerSearch(const Eigen::MatrixXd& r, const Eigen::VectorXd& y, int max_count,
                std::size_t budget)
      : r_(r), y_(y), n_(static_cast<int>(y.size())), max_count_(max_count), budget_(budget),
        current_(n_, 0) {}

  void offer(const std::vector<int>& c, double cost) {
    if (c == best_) return;
    if (cost < best_cost_) {
      second_ = best_;
      second_cost_ = best_cost_;
      best_ = c;
      best_cost_ = cost;
    } else if (cost < second_cost_ && c != best_) {
      second_ = c;
      second_cost_ = cost;
    }
  }

  double cost_of(const std::vector<int>& c) const {
    Eigen::VectorXd v(n_);
    for (int i = 0; i < n_; ++i) v[i] = c[static_cast<std::size_t>(i)];
    return (y_ - r_.triangularView<Eigen::Upper>() * v).squaredNorm();
  }

  void run() { descend(n_ - 1, 0.0); }

  const std::vector<int>& best() const { return best_; }
  double best_cost() const { return best_cost_; }
  double second_cost() const { return second_cost_; }

 private:
  void descend(int k, double partial) {
    if (++nodes_ > budget_) {
      throw Error(ErrorCode::BudgetExceeded, "cone decomposition search exceeded its node budget");
    }
    if (k < 0) {
      offer(current_, partial);
      return;
    }
    double rhs = y_[k];
    for (int j = k + 1; j < n_; ++j) rhs -= r_(k, j) * current_[static_cast<std::size_t>(j)];
    const double diag = r_(k, k);
    const double center = rhs / diag;

    // Candidates in order of distance from the centre.
    std::vector<int> order(static_cast<std::size_t>(max_count_) + 1);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [center](int u, int v) {
      return std::abs(u - center) < std::abs(v - center);
    });
    for (int pick : order) {
      const double delta = diag * (center - pick);
      const double cost = partial + delta * delta;
      if (cost >= second_cost_) break;  // later candidates are farther still
      current_[static_cast<std::size_t>(k)] = pick;
      descend(k - 1, cost);
    }
    current_[static_cast<std::size_t>(k)] = 0;
  }

  const Eigen::MatrixXd& r_;
  const Eigen::VectorXd& y_;
  int n_;
  int max_count_;
  std::size_t budget_;
  std::size_t nodes_ = 0;
  std::vector<int> current_;
  std::vector<int> best_;
  std::vector<int> second_;
  double best_cost_ = std::numeric_limits<double>::infinity();
  double second_cost_ = std::numeric_limits<double>::infinity();
};

// Peels coefficients from the slowest-decaying order down, each estimated on
// the tail of the grid where that order dominates what remains.
std::vector<int> greedy_peel(const Eigen::MatrixXd& basis, const Eigen::VectorXd& s,
                             int max_count) {
  const auto n = static_cast<int>(basis.cols());
  const auto rows = static_cast<int>(basis.rows());
  std::vector<int> c(static_cast<std::size_t>(n), 0);
  Eigen::VectorXd rest = s;
  const int tail_start = rows / 2;
  for (int j = n - 1; j >= 0; --j) {
    const auto col = basis.col(j).tail(rows - tail_start);
    const auto res = rest.tail(rows - tail_start);
    const double denom = col.squaredNorm();
    if (denom <= 0.0) continue;
    const double est = col.dot(res) / denom;
    const int k = std::clamp(static_cast<int>(std::lround(est)), 0, max_count);
    c[static_cast<std::size_t>(j)] = k;
    rest -= k * basis.col(j);
  }
  return c;
}

}  // namespace

ConeFit fit_cone_sum(const SampledFunction& S, int max_order, FitMode mode,
                     const DecomposeOptions& opts) {
  S.validate();
  if (S.variable != "r") throw Error(ErrorCode::InvalidInput, "cone sums are fitted in r");
  if (max_order < 2) throw Error(ErrorCode::InvalidInput, "max_order must be >= 2");
  if (S.start < -1e-12 || S.end() < 15.0 - 1e-9 || S.step > 0.1 + 1e-12) {
    throw Error(ErrorCode::InvalidInput, "cone sum must be sampled on [0, R], R >= 15, step <= 0.1");
  }
  if (opts.max_count < 1) throw Error(ErrorCode::InvalidInput, "max_count must be >= 1");

  const auto rows = static_cast<Eigen::Index>(S.size());
  const int n = max_order - 1;
  Eigen::MatrixXd basis(rows, n);
  Eigen::VectorXd s(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double r = S.x(static_cast<std::size_t>(i));
    s[i] = S.values[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) basis(i, j) = psi_value(j + 2, r);
  }

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  const Eigen::VectorXd qs = (qr.householderQ().transpose() * s).eval();
  const Eigen::VectorXd y = qs.head(n);
  const double perp = qs.tail(rows - n).squaredNorm();

  IntegerSearch search(r, y, opts.max_count, opts.node_budget);
  const std::vector<int> seed = greedy_peel(basis, s, opts.max_count);
  search.offer(seed, search.cost_of(seed));
  search.run();

  ConeFit fit;
  fit.residual = std::sqrt(search.best_cost() + perp);
  fit.runner_up = std::sqrt(search.second_cost() + perp);
  const double threshold = (mode == FitMode::Exact ? opts.exact_threshold : opts.noisy_threshold) *
                           std::max(s.norm(), 1.0);
  if (fit.residual > threshold) {
    throw Error(ErrorCode::NonIntegerFit, "no integer combination of psi_m fits within " +
                                              std::to_string(threshold) + " (best residual " +
                                              std::to_string(fit.residual) + ")");
  }
  if (fit.runner_up <= 2.0 * fit.residual) {
    throw Error(ErrorCode::AmbiguousFit, "two integer combinations fit within a factor of 2");
  }
  const auto& c = search.best();
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < c[static_cast<std::size_t>(j)]; ++k) fit.orders.push_back(j + 2);
  }
  return fit;
}

std::vector<int> decompose_cone_sum(const SampledFunction& S, int max_order, FitMode mode,
                                    const DecomposeOptions& opts) {
  return fit_cone_sum(S, max_order, mode, opts).orders;
}

}  // namespace orbis
