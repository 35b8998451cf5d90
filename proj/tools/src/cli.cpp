#include "wpcn/cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdarg>
#include <cstdio>
#include <optional>
#include <ostream>
#include <set>

#include "wpcn/channel.hpp"
#include "wpcn/config.hpp"
#include "wpcn/exhaustive.hpp"
#include "wpcn/harness.hpp"
#include "wpcn/ptap.hpp"
#include "wpcn/schedulers.hpp"
#include "wpcn/serialization.hpp"
#include "wpcn/verifier.hpp"

namespace wpcn::cli {

namespace {

// Raised for bad command-line input that CLI11 itself cannot catch.
class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

std::string printf_string(const char* format, ...) __attribute__((format(printf, 1, 2)));

std::string printf_string(const char* format, ...) {
  va_list args;
  va_start(args, format);
  va_list copy;
  va_copy(copy, args);
  const int size = std::vsnprintf(nullptr, 0, format, copy);
  va_end(copy);
  std::string text(static_cast<std::size_t>(std::max(size, 0)), '\0');
  std::vsnprintf(text.data(), text.size() + 1, format, args);
  va_end(args);
  return text;
}

struct Flags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::string out;
  std::string algorithm = "mfsa";
  std::vector<std::size_t> order;
  std::size_t jobs = 1;
  std::string instance_path;
  std::string schedule_path;
};

ExperimentConfig config_with_overrides(const Flags& flags) {
  ExperimentConfig config = flags.config_path.empty() ? ExperimentConfig{} : load_config(flags.config_path);
  if (flags.seed) {
    config.seed = *flags.seed;
    if (config.sweep) config.sweep->master_seed = *flags.seed;
  }
  if (flags.tol) {
    if (!(*flags.tol > 0.0)) throw ConfigError("--tol: must be > 0");
    config.tol = *flags.tol;
  }
  return config;
}

void print_report(std::ostream& out, const Schedule& schedule, const ThroughputReport& report,
                  std::span<const UserParams> users, const SystemParams& sys) {
  out << printf_string("%-6s %-12s %-12s %-12s %s\n", "user", "start", "tau", "power_W", "bits");
  if (schedule.idle_prefix > 0.0) {
    out << printf_string("%-6s %-12.6g %-12.6g %-12s %s\n", "idle", 0.0, schedule.idle_prefix, "-", "-");
  }
  for (std::size_t i = 0; i < schedule.slots.size(); ++i) {
    const Slot& slot = schedule.slots[i];
    const double bits =
        rate(slot.tau, slot.power, snr_coefficient(find_user(users, slot.user_id), sys), sys.bandwidth);
    out << printf_string("%-6zu %-12.6g %-12.6g %-12.6g %.8g\n", slot.user_id, schedule.slot_start(i),
                         slot.tau, slot.power, bits);
  }
  out << printf_string("sum_throughput_bits_per_frame %.10g\n", report.sum_throughput);
  out << "feasible " << (report.feasible ? "yes" : "no") << "\n";
  for (const auto& v : report.violations) {
    out << printf_string("violation %s user=%zu magnitude=%.6g\n", std::string(to_string(v.kind)).c_str(),
                         v.user_id, v.magnitude);
  }
}

int cmd_generate(const Flags& flags, std::ostream& out, std::ostream& err) {
  const ExperimentConfig config = config_with_overrides(flags);
  const NetworkInstance instance =
      generate(config.base.topology, config.base.sys, config.base.path_loss, config.seed);
  const std::string text = instance_to_json(instance);

  // Without --out the instance itself is the output and the summary moves to stderr.
  std::ostream& summary = flags.out.empty() ? err : out;
  summary << "N " << instance.users.size() << "  seed " << instance.seed << "\n";
  summary << printf_string("%-6s %-14s %-14s %s\n", "user", "harvest_W", "snr_coeff", "max_rate_bps");
  for (const auto& user : instance.users) {
    summary << printf_string("%-6zu %-14.6g %-14.6g %.6g\n", user.id, harvest_rate(user, instance.sys),
                             snr_coefficient(user, instance.sys), max_rate(user, instance.sys));
  }
  if (flags.out.empty()) {
    out << text;
  } else {
    write_text_file(flags.out, text);
  }
  return kOk;
}

std::vector<UserParams> users_in_order(const NetworkInstance& instance, std::span<const std::size_t> order) {
  if (order.size() != instance.users.size()) {
    throw UsageError("--order: expected " + std::to_string(instance.users.size()) + " user ids, got " +
                     std::to_string(order.size()));
  }
  std::set<std::size_t> seen;
  std::vector<UserParams> ordered;
  for (std::size_t id : order) {
    if (!seen.insert(id).second) throw UsageError("--order: user " + std::to_string(id) + " repeated");
    const auto it = std::find_if(instance.users.begin(), instance.users.end(),
                                 [id](const UserParams& u) { return u.id == id; });
    if (it == instance.users.end()) throw UsageError("--order: no user " + std::to_string(id) + " in the instance");
    ordered.push_back(*it);
  }
  return ordered;
}

int cmd_solve(const Flags& flags, std::ostream& out) {
  const ExperimentConfig config = config_with_overrides(flags);
  const NetworkInstance instance = instance_from_json(read_text_file(flags.instance_path));

  std::string algorithm = flags.algorithm;
  std::transform(algorithm.begin(), algorithm.end(), algorithm.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (algorithm == "ptap") algorithm = "ptap-with-order";
  if (!flags.order.empty() && algorithm != "ptap-with-order") {
    throw UsageError("--order: only valid with --algorithm ptap-with-order");
  }

  ScheduleDocument doc;
  doc.algorithm = algorithm;
  doc.instance_seed = instance.seed;
  if (algorithm == "mfsa") {
    auto result = schedulers::mfsa(instance.users, instance.sys);
    doc.schedule = std::move(result.schedule);
    doc.report = std::move(result.report);
  } else if (algorithm == "eta") {
    auto result = schedulers::eta(instance.users, instance.sys);
    doc.schedule = std::move(result.schedule);
    doc.report = std::move(result.report);
  } else if (algorithm == "opt") {
    exhaustive::Options options;
    options.tol = config.tol;
    options.max_users = config.opt_max_users;
    auto result = exhaustive::solve_opt(instance.users, instance.sys, options);
    doc.schedule = std::move(result.schedule);
    doc.report = std::move(result.report);
  } else if (algorithm == "ptap-with-order") {
    if (flags.order.empty()) throw UsageError("--order: required by ptap-with-order");
    const ptap::Instance problem{users_in_order(instance, flags.order), instance.sys};
    const ptap::Solution solution = ptap::solve(problem, config.tol);
    doc.schedule = ptap::to_schedule(problem, solution);
    doc.report = evaluate(doc.schedule, instance.users, instance.sys);
  } else {
    throw UsageError("--algorithm: unknown algorithm \"" + flags.algorithm +
                     "\" (expected mfsa, eta, opt or ptap-with-order)");
  }

  out << "algorithm " << doc.algorithm << "\n";
  print_report(out, doc.schedule, doc.report, instance.users, instance.sys);
  if (!flags.out.empty()) write_text_file(flags.out, schedule_to_json(doc));
  return doc.report.feasible ? kOk : kRuntime;
}

int cmd_verify(const Flags& flags, std::ostream& out) {
  const NetworkInstance instance = instance_from_json(read_text_file(flags.instance_path));
  const ScheduleDocument doc = schedule_from_json(read_text_file(flags.schedule_path));
  const double tol = flags.tol.value_or(kFeasibilityTolerance);
  if (!(tol > 0.0)) throw ConfigError("--tol: must be > 0");

  const auto violations = verifier::check_feasible(doc.schedule, instance.users, instance.sys, tol);
  ThroughputReport report = evaluate(doc.schedule, instance.users, instance.sys, tol);
  print_report(out, doc.schedule, report, instance.users, instance.sys);

  const auto conditions = verifier::check_optimality_conditions(doc.schedule, instance.users, instance.sys);
  out << "optimality_conditions " << (conditions.all_passed() ? "pass" : "fail") << "\n";
  for (const auto& finding : conditions.findings) out << "finding " << finding << "\n";
  return violations.empty() ? kOk : kRuntime;
}

int cmd_sweep(const Flags& flags, std::ostream& out, std::ostream& err) {
  ExperimentConfig config = config_with_overrides(flags);
  if (!config.sweep) throw ConfigError("sweep: section missing from config");
  if (flags.jobs < 1) throw UsageError("--jobs: must be >= 1");
  const SweepSpec spec = config.sweep_spec(flags.jobs);
  // Rejected here, before any instance is drawn.
  spec.validate();

  const std::string prefix = flags.out.empty() ? "sweep" : flags.out;
  const SweepResult result = run_sweep(spec, [&](std::size_t g, const SweepResult& partial) {
    err << printf_string("[%zu/%zu] %s = %g", g + 1, spec.grid.size(), std::string(to_string(spec.parameter)).c_str(),
                         spec.grid[g]);
    for (std::size_t a = 0; a < spec.algorithms.size(); ++a) {
      err << printf_string("  %s %.6g", std::string(to_string(spec.algorithms[a])).c_str(),
                           partial.stats[g][a].mean);
    }
    err << "\n";
  });
  write_text_file(prefix + ".csv", sweep_to_csv(result));
  write_text_file(prefix + ".json", sweep_to_json(result, config));
  out << "wrote " << prefix << ".csv and " << prefix << ".json\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Throughput-maximizing schedules for full-duplex wireless powered networks"};
  app.require_subcommand(1);
  Flags flags;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config_path, "Experiment config (JSON)")->check(CLI::ExistingFile);
    sub->add_option("--tol", flags.tol, "Solver tolerance");
  };

  CLI::App* generate_cmd = app.add_subcommand("generate", "Draw a random network instance");
  add_common(generate_cmd);
  generate_cmd->add_option("--seed", flags.seed, "Instance seed");
  generate_cmd->add_option("--out", flags.out, "Instance file to write (default: stdout)");

  CLI::App* solve_cmd = app.add_subcommand("solve", "Schedule one instance");
  solve_cmd->add_option("instance", flags.instance_path, "Instance file")->required()->check(CLI::ExistingFile);
  add_common(solve_cmd);
  solve_cmd->add_option("--algorithm", flags.algorithm, "mfsa | eta | opt | ptap-with-order");
  solve_cmd->add_option("--order", flags.order, "Transmission order for ptap-with-order, e.g. 3,1,2")
      ->delimiter(',');
  solve_cmd->add_option("--out", flags.out, "Schedule file to write");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo parameter sweep");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--seed", flags.seed, "Master seed");
  sweep_cmd->add_option("--out", flags.out, "Output prefix for <prefix>.csv and <prefix>.json");
  sweep_cmd->add_option("--jobs", flags.jobs, "Worker threads");

  CLI::App* verify_cmd = app.add_subcommand("verify", "Audit a schedule against its instance");
  verify_cmd->add_option("instance", flags.instance_path, "Instance file")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("schedule", flags.schedule_path, "Schedule file")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--tol", flags.tol, "Feasibility tolerance");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (generate_cmd->parsed()) return cmd_generate(flags, out, err);
    if (solve_cmd->parsed()) return cmd_solve(flags, out);
    if (sweep_cmd->parsed()) return cmd_sweep(flags, out, err);
    if (verify_cmd->parsed()) return cmd_verify(flags, out);
  } catch (const std::invalid_argument& e) {
    // ConfigError, ModelError, InstanceTooLarge and UsageError.
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kValidation;
}

}  // namespace wpcn::cli
