#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "wpcn/model.hpp"

namespace wpcn {

class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace ptap {

/// Users in their fixed transmission order (front transmits first).
struct Instance {
  std::vector<UserParams> ordered_users;
  SystemParams sys;

  void validate() const;
};

struct Options {
  double tol = 1e-9;                    // relative objective gap
  std::size_t max_newton_steps = 500;
  double barrier_growth = 50.0;         // t <- growth * t between centerings
  double snap_threshold = 1e-9;         // slots shorter than this are zeroed
};

/// Optimal allocation for one order. Vectors are indexed like
/// Instance::ordered_users.
struct Solution {
  std::vector<double> taus;
  std::vector<double> energies;  // e_i = P_i * tau_i
  std::vector<double> powers;
  double objective = 0.0;        // bits per frame
  double gap_certificate = 0.0;  // certified upper bound minus objective
  std::size_t iterations = 0;    // Newton steps
};

/// Maximises sum throughput for the given order. The problem is solved in the
/// variables (tau_i, e_i), where the objective is a sum of perspective
/// functions and every constraint is linear, with a log-barrier method.
/// The returned point uses the full frame and gives every active user either
/// P_max or all of the energy it has available at the end of its slot.
///
/// Throws SolverError when the Newton budget is exhausted and ModelError when
/// the instance is malformed.
[[nodiscard]] Solution solve(const Instance& instance, const Options& options = {});
[[nodiscard]] Solution solve(const Instance& instance, double tol);

/// Time-ordered schedule with zero-length slots removed.
[[nodiscard]] Schedule to_schedule(const Instance& instance, const Solution& solution);

/// Sum throughput of an allocation in (tau, e) form, bits per frame. Useful
/// for checking concavity of the perspective objective.
[[nodiscard]] double perspective_objective(const Instance& instance, std::span<const double> taus,
                                           std::span<const double> energies);

}  // namespace ptap
}  // namespace wpcn
