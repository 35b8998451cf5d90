#include "wpcn/ptap.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <string>

namespace wpcn::ptap {

namespace {

// Work is done in SNR-scaled energies x_i = k_i e_i so that every user's
// per-slot objective is tau * ln(1 + x / tau) regardless of its link budget.
// Constraints, all strictly positive in the interior:
//   energy_i : a_i + c_i * sum_{j<=i} tau_j - x_i     (a = kB, c = kC)
//   power_i  : p_i * tau_i - x_i                      (p = k P_max)
//   frame    : 1 - sum tau
//   x_i      : x_i
class BarrierProblem {
public:
  BarrierProblem(std::vector<double> a, std::vector<double> c, std::vector<double> p)
      : a_(std::move(a)), c_(std::move(c)), p_(std::move(p)), n_(a_.size()) {}

  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] std::size_t constraint_count() const { return 3 * n_ + 1; }

  template <typename Vec>
  [[nodiscard]] Vec initial_point() const {
    Vec z(static_cast<Eigen::Index>(2 * n_));
    const double tau0 = 1.0 / static_cast<double>(n_ + 1);
    double elapsed = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      elapsed += tau0;
      z[i] = tau0;
      z[n_ + i] = 0.5 * std::min(a_[i] + c_[i] * elapsed, p_[i] * tau0);
    }
    return z;
  }

  /// Sum of tau ln(1 + x/tau), nats per hertz.
  template <typename Vec>
  [[nodiscard]] double objective(const Vec& z) const {
    double total = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double tau = z[i];
      const double x = z[n_ + i];
      total += tau * std::log1p(x / tau);
    }
    return total;
  }

  /// Fills `slack`; returns false if any slack is non-positive.
  template <typename Vec, typename SlackVec>
  bool slacks(const Vec& z, SlackVec& slack) const {
    slack.resize(static_cast<Eigen::Index>(constraint_count()));
    double elapsed = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      elapsed += z[i];
      const double x = z[n_ + i];
      slack[i] = a_[i] + c_[i] * elapsed - x;
      slack[n_ + i] = p_[i] * z[i] - x;
      slack[2 * n_ + i] = x;
    }
    slack[3 * n_] = 1.0 - elapsed;
    return (slack.array() > 0.0).all();
  }

  /// Change in slack along direction dz (slack is affine in z).
  template <typename Vec, typename SlackVec>
  void slack_direction(const Vec& dz, SlackVec& dslack) const {
    dslack.resize(static_cast<Eigen::Index>(constraint_count()));
    double delapsed = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      delapsed += dz[i];
      const double dx = dz[n_ + i];
      dslack[i] = c_[i] * delapsed - dx;
      dslack[n_ + i] = p_[i] * dz[i] - dx;
      dslack[2 * n_ + i] = dx;
    }
    dslack[3 * n_] = -delapsed;
  }

  /// Barrier function t * (-f) - sum log(slack); +inf outside the domain.
  template <typename Vec, typename SlackVec>
  [[nodiscard]] double barrier_value(double t, const Vec& z, SlackVec& slack) const {
    if (!slacks(z, slack)) return std::numeric_limits<double>::infinity();
    return -t * objective(z) - slack.array().log().sum();
  }

  template <typename Vec, typename SlackVec, typename Mat>
  void gradient_hessian(double t, const Vec& z, const SlackVec& slack, Vec& grad, Mat& hess) const {
    const auto dim = static_cast<Eigen::Index>(2 * n_);
    grad.setZero(dim);
    hess.setZero(dim, dim);

    for (std::size_t i = 0; i < n_; ++i) {
      const double tau = z[i];
      const double x = z[n_ + i];
      const double s = tau + x;
      // d/dtau, d/dx of tau ln(1 + x/tau), negated and scaled by t.
      grad[i] -= t * (std::log1p(x / tau) - x / s);
      grad[n_ + i] -= t * (tau / s);
      const double inv_s2 = 1.0 / (s * s);
      hess(i, i) += t * x * x / tau * inv_s2;
      hess(n_ + i, n_ + i) += t * tau * inv_s2;
      hess(i, n_ + i) -= t * x * inv_s2;
      hess(n_ + i, i) -= t * x * inv_s2;
    }

    // Barrier terms: for slack = b - a.z, gradient a / s and Hessian a a^T / s^2.
    for (std::size_t i = 0; i < n_; ++i) {
      // energy_i: a = -c_i on tau_0..tau_i, +1 on x_i
      const double inv_se = 1.0 / slack[i];
      const double w = c_[i] * inv_se;
      const auto prefix = static_cast<Eigen::Index>(i + 1);
      grad.head(prefix).array() -= w;
      grad[n_ + i] += inv_se;
      hess.topLeftCorner(prefix, prefix).array() += w * w;
      hess.col(n_ + i).head(prefix).array() -= w * inv_se;
      hess.row(n_ + i).head(prefix).array() -= w * inv_se;
      hess(n_ + i, n_ + i) += inv_se * inv_se;

      // power_i: a = -p_i on tau_i, +1 on x_i (sparse, done by hand)
      const double sp = slack[n_ + i];
      const double inv_sp = 1.0 / sp;
      const double inv_sp2 = inv_sp * inv_sp;
      grad[i] += -p_[i] * inv_sp;
      grad[n_ + i] += inv_sp;
      hess(i, i) += p_[i] * p_[i] * inv_sp2;
      hess(n_ + i, n_ + i) += inv_sp2;
      hess(i, n_ + i) -= p_[i] * inv_sp2;
      hess(n_ + i, i) -= p_[i] * inv_sp2;

      // x_i >= 0: a = -1 on x_i
      const double sx = slack[2 * n_ + i];
      grad[n_ + i] -= 1.0 / sx;
      hess(n_ + i, n_ + i) += 1.0 / (sx * sx);
    }
    // frame: a = +1 on every tau
    const double sf = slack[3 * n_];
    const auto n = static_cast<Eigen::Index>(n_);
    grad.head(n).array() += 1.0 / sf;
    hess.topLeftCorner(n, n).array() += 1.0 / (sf * sf);
  }

private:
  std::vector<double> a_, c_, p_;
  std::size_t n_;
};

struct BarrierResult {
  Eigen::VectorXd z;
  double objective_nats = 0.0;
  double gap_nats = 0.0;
  std::size_t newton_steps = 0;
};

template <typename Vec, typename SlackVec, typename Mat>
BarrierResult run_barrier(const BarrierProblem& problem, const Options& options) {
  const auto m = static_cast<double>(problem.constraint_count());
  const auto dim = static_cast<Eigen::Index>(2 * problem.size());

  Vec z = problem.initial_point<Vec>();
  Vec grad(dim), step(dim), trial(dim);
  SlackVec slack, trial_slack, dslack;
  Mat hess(dim, dim);
  Eigen::LDLT<Mat> ldlt(dim);

  double f0 = problem.objective(z);
  double t = m / std::max(f0, 1e-6);
  std::size_t steps = 0;

  constexpr double kArmijo = 0.25;
  constexpr double kBacktrack = 0.5;
  constexpr double kCenteringTol = 1e-9;

  while (true) {
    // Centering: Newton's method on t*(-f) - sum log s.
    double value = problem.barrier_value(t, z, slack);
    while (true) {
      if (steps >= options.max_newton_steps) {
        throw SolverError("ptap: barrier method did not converge within " +
                          std::to_string(options.max_newton_steps) + " Newton steps");
      }
      problem.gradient_hessian(t, z, slack, grad, hess);
      ldlt.compute(hess);
      step = ldlt.solve(-grad);
      const double decrement2 = -grad.dot(step);
      ++steps;
      if (!(decrement2 >= 0.0) || !std::isfinite(decrement2)) {
        throw SolverError("ptap: Newton system is not positive definite");
      }
      if (decrement2 / 2.0 <= kCenteringTol) break;

      // Largest step keeping every slack strictly positive.
      problem.slack_direction(step, dslack);
      double alpha = 1.0;
      for (Eigen::Index c = 0; c < dslack.size(); ++c) {
        if (dslack[c] < 0.0) alpha = std::min(alpha, -0.99 * slack[c] / dslack[c]);
      }
      const double slope = grad.dot(step);
      double trial_value = 0.0;
      while (true) {
        trial = z + alpha * step;
        trial_value = problem.barrier_value(t, trial, trial_slack);
        if (trial_value <= value + kArmijo * alpha * slope) break;
        alpha *= kBacktrack;
        if (alpha < 1e-16) break;
      }
      // No representable decrease left: centred to working precision.
      if (alpha < 1e-16 || !(trial_value < value)) break;
      z.swap(trial);
      slack.swap(trial_slack);
      value = trial_value;
    }

    const double f = problem.objective(z);
    if (m / t <= std::max(options.tol * f, 1e-15)) {
      return {Eigen::VectorXd(z), f, m / t, steps};
    }
    t *= options.barrier_growth;
  }
}

// Stack storage for the sizes exhaustive search uses; heap beyond that.
constexpr int kSmallUsers = 12;

BarrierResult run_small_or_large(const BarrierProblem& problem, const Options& options) {
  if (problem.size() <= static_cast<std::size_t>(kSmallUsers)) {
    using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 2 * kSmallUsers, 1>;
    using SlackVec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 3 * kSmallUsers + 1, 1>;
    using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 2 * kSmallUsers,
                              2 * kSmallUsers>;
    return run_barrier<Vec, SlackVec, Mat>(problem, options);
  }
  return run_barrier<Eigen::VectorXd, Eigen::VectorXd, Eigen::MatrixXd>(problem, options);
}

}  // namespace

void Instance::validate() const {
  if (ordered_users.empty()) throw ModelError("ptap: ordered_users must be nonempty");
  sys.validate();
  std::set<std::size_t> ids;
  for (const auto& user : ordered_users) {
    user.validate();
    if (!ids.insert(user.id).second) {
      throw ModelError("ptap: user " + std::to_string(user.id) + " appears twice in the order");
    }
  }
}

Solution solve(const Instance& instance, double tol) {
  Options options;
  options.tol = tol;
  return solve(instance, options);
}

Solution solve(const Instance& instance, const Options& options) {
  if (!(options.tol > 0.0)) throw ModelError("ptap: tol must be > 0");
  instance.validate();

  const auto& users = instance.ordered_users;
  const auto& sys = instance.sys;
  const std::size_t n = users.size();

  std::vector<double> k(n), harvest(n);
  bool any_link = false;
  for (std::size_t i = 0; i < n; ++i) {
    k[i] = snr_coefficient(users[i], sys);
    harvest[i] = harvest_rate(users[i], sys);
    any_link = any_link || k[i] > 0.0;
  }
  if (!any_link) throw SolverError("ptap: every user has k_i = 0");

  // Users that can never hold energy (B = C = 0) or never convert it to rate
  // (k = 0) are pinned at tau = 0 and left out of the barrier problem.
  std::vector<std::size_t> active;
  std::vector<double> a, c, p;
  for (std::size_t i = 0; i < n; ++i) {
    if (k[i] > 0.0 && (users[i].battery > 0.0 || harvest[i] > 0.0)) {
      active.push_back(i);
      a.push_back(k[i] * users[i].battery);
      c.push_back(k[i] * harvest[i]);
      p.push_back(k[i] * sys.max_power);
    }
  }

  Solution solution;
  solution.taus.assign(n, 0.0);
  solution.energies.assign(n, 0.0);
  solution.powers.assign(n, 0.0);

  double upper_bound_nats = 0.0;
  if (!active.empty()) {
    const BarrierProblem problem(std::move(a), std::move(c), std::move(p));
    const BarrierResult result = run_small_or_large(problem, options);
    for (std::size_t j = 0; j < active.size(); ++j) {
      solution.taus[active[j]] = result.z[static_cast<Eigen::Index>(j)];
    }
    upper_bound_nats = result.objective_nats + result.gap_nats;
    solution.iterations = result.newton_steps;
  }

  // Snap negligible slots, fold unused frame time into the first slot (which
  // only lengthens every later user's harvesting window) and raise each
  // energy to its binding bound. Each step keeps feasibility and cannot lower
  // the objective.
  double used = 0.0;
  for (auto& tau : solution.taus) {
    if (tau < options.snap_threshold) tau = 0.0;
    used += tau;
  }
  if (used < sys.frame_length) {
    const auto first = std::find_if(solution.taus.begin(), solution.taus.end(),
                                    [](double tau) { return tau > 0.0; });
    const std::size_t index =
        first != solution.taus.end() ? static_cast<std::size_t>(first - solution.taus.begin())
                                     : (active.empty() ? 0 : active.front());
    solution.taus[index] += sys.frame_length - used;
  } else if (used > sys.frame_length) {
    for (auto& tau : solution.taus) tau *= sys.frame_length / used;
  }

  double elapsed = 0.0;
  double objective = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    elapsed += solution.taus[i];
    const double tau = solution.taus[i];
    if (tau <= 0.0) continue;
    const double available = users[i].battery + harvest[i] * elapsed;
    const double energy = std::min(sys.max_power * tau, available);
    solution.energies[i] = energy;
    solution.powers[i] = std::min(energy / tau, sys.max_power);
    objective += rate(tau, solution.powers[i], k[i], sys.bandwidth);
  }
  solution.objective = objective;
  const double upper_bound_bits = sys.bandwidth * upper_bound_nats / std::numbers::ln2;
  solution.gap_certificate = std::max(0.0, upper_bound_bits - objective);
  return solution;
}

Schedule to_schedule(const Instance& instance, const Solution& solution) {
  Schedule schedule;
  for (std::size_t i = 0; i < instance.ordered_users.size(); ++i) {
    if (solution.taus[i] > 0.0) {
      schedule.slots.push_back({instance.ordered_users[i].id, solution.taus[i], solution.powers[i]});
    }
  }
  return schedule;
}

double perspective_objective(const Instance& instance, std::span<const double> taus,
                             std::span<const double> energies) {
  double total = 0.0;
  for (std::size_t i = 0; i < instance.ordered_users.size(); ++i) {
    if (taus[i] <= 0.0) continue;
    const double k = snr_coefficient(instance.ordered_users[i], instance.sys);
    total += instance.sys.bandwidth * taus[i] * std::log2(1.0 + k * energies[i] / taus[i]);
  }
  return total;
}

}  // namespace wpcn::ptap
