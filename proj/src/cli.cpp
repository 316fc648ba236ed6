#include "toda_crystal/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "toda_crystal/models.hpp"
#include "toda_crystal/symmetries.hpp"
#include "toda_crystal/toda.hpp"

namespace toda_crystal {

namespace {

struct RunConfig {
  std::string p_text = "1/2";
  Scalar p = Scalar(1, 2);
  std::vector<int> s{0};
  std::vector<int> l{0};
  int K = 2;
  int D = 2;
  int NQ = 3;
  std::optional<int> N;
  std::string out;
  std::string form = "left";

  SeriesContext context() const { return {K, D, NQ}; }
  int operator_cutoff() const { return N.value_or(ModelParams::required_cutoff(context())); }
  ModelParams model(int charge, int level) const {
    return ModelParams::make(charge, level, p, context(), N);
  }
  SectorConfig sector(int charge) const { return {charge, operator_cutoff(), p, 0}; }
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Everything the computations will assume, checked before any of them run.
void validate(RunConfig& c) {
  try {
    c.p = parse_scalar(c.p_text);
    require_valid_p(c.p);
    c.context().validate();
    if (c.N && *c.N < 0) throw std::invalid_argument("N must be >= 0");
    for (int s : c.s)
      for (int l : c.l) c.model(s, l);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  if (c.s.empty() || c.l.empty()) throw UsageError("--s and --l need at least one value");
}

using Task = std::function<CheckReport()>;

int thread_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("TODA_CRYSTAL_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
  }
  return static_cast<int>(n);
}

// Runs the tasks on a small pool. A check that throws becomes a failed
// report carrying the message.
std::vector<CheckReport> run_tasks(const std::vector<std::pair<std::string, Task>>& tasks) {
  std::vector<CheckReport> out(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        out[i] = tasks[i].second();
      } catch (const std::exception& e) {
        CheckReport r;
        r.check = tasks[i].first;
        r.status = CheckStatus::kFail;
        r.evidence["error"] = e.what();
        out[i] = r;
      }
    }
  };
  const int n = std::min<int>(thread_count(), static_cast<int>(tasks.size()));
  std::vector<std::jthread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  return out;
}

void add_commutators(const RunConfig& c, std::vector<std::pair<std::string, Task>>& tasks) {
  for (int s : c.s)
    for (int k = -2; k <= 2; ++k)
      for (int l = -2; l <= 2; ++l)
        for (int m = -3; m <= 3; ++m)
          for (int n = -3; n <= 3; ++n)
            tasks.emplace_back("commutator", [=, config = c.sector(s)] {
              return commutator_check(k, m, l, n, config);
            });
}

void add_shift(const RunConfig& c, std::vector<std::pair<std::string, Task>>& tasks) {
  for (int s : c.s) {
    const SectorConfig config = c.sector(s);
    for (int k = 1; k <= 2; ++k)
      for (int m = -2; m <= 2; ++m) {
        tasks.emplace_back("first_shift_G", [=] {
          return first_shift_check(ShiftVariant::kG, k, m, config);
        });
        tasks.emplace_back("first_shift_Gprime", [=] {
          return first_shift_check(ShiftVariant::kGPrime, k, m, config);
        });
      }
    for (int k = -2; k <= 2; ++k)
      for (int m = -2; m <= 2; ++m)
        tasks.emplace_back("second_shift", [=] { return second_shift_check(k, m, config); });
  }
}

void add_main(const RunConfig& c, std::vector<std::pair<std::string, Task>>& tasks) {
  for (int s : c.s) {
    for (int l : c.l)
      tasks.emplace_back("main_identity",
                         [=, m = c.model(s, l)] { return verify_main_identity(m); });
    tasks.emplace_back("ground_constants", [=, p = c.p, config = c.sector(s)] {
      return ground_action_constants(s, p, config);
    });
  }
}

void add_prev(const RunConfig& c, std::vector<std::pair<std::string, Task>>& tasks) {
  for (int s : c.s)
    for (int l : c.l) {
      const ModelParams m = c.model(s, l);
      tasks.emplace_back("prev_identity", [=] { return verify_prev_identity(m); });
      tasks.emplace_back("tau_forms", [=] { return tau_forms_check(m); });
      tasks.emplace_back("reduction_1d", [=] { return reduction_check(m); });
      for (int k = 1; k <= std::min(c.K, 2); ++k)
        tasks.emplace_back("intertwining_g", [=] {
          return intertwining_residual(Intertwiner::kGTrue, k, m);
        });
    }
}

void add_toeplitz(const RunConfig& c, std::vector<std::pair<std::string, Task>>& tasks) {
  for (int s : c.s)
    for (int l : c.l) {
      const ModelParams m = c.model(s, l);
      tasks.emplace_back("toeplitz_gprime", [=] {
        return intertwining_residual(Intertwiner::kGPrimeFake, 1, m);
      });
      tasks.emplace_back("trivial_tau", [=] { return trivial_tau_compare(m); });
    }
}

void add_bilinear(const RunConfig& c, std::vector<std::pair<std::string, Task>>& tasks) {
  const auto [lo, hi] = std::minmax_element(c.s.begin(), c.s.end());
  const std::set<int> centres(c.s.begin(), c.s.end());
  for (int l : c.l)
    for (bool partition_side : {false, true}) {
      const std::string name = partition_side ? "zprime" : "tau_prime";
      tasks.emplace_back("toda_bilinear", [=, lo = *lo, hi = *hi] {
        std::map<int, TauSeries> family;
        for (int s = lo - 1; s <= hi + 1; ++s) {
          const ModelParams m = c.model(s, l);
          family.insert_or_assign(s, partition_side ? TauSeries{s, zprime_series(m)}
                                                    : tau_prime_series(m));
        }
        // Charges outside the requested list only serve as neighbours.
        for (auto it = family.begin(); it != family.end();) {
          const int s = it->first;
          const bool needed = centres.count(s) || centres.count(s - 1) || centres.count(s + 1);
          it = needed ? std::next(it) : family.erase(it);
        }
        CheckReport r = toda_bilinear_residual(family);
        r.params["family"] = name;
        r.params["l"] = l;
        r.params["p"] = to_string(c.p);
        r.params["NQ"] = c.NQ;
        return r;
      });
    }
}

std::string sort_key(const CheckReport& r) {
  return r.check + '\n' + r.params.dump();
}

std::ostream& open_output(const std::string& path, std::ofstream& file, std::ostream& fallback) {
  if (path.empty()) return fallback;
  file.open(path, std::ios::binary);
  if (!file) throw UsageError("cannot open " + path);
  return file;
}

int cmd_verify(RunConfig& c, const std::string& suite, std::ostream& out, std::ostream& err) {
  validate(c);
  std::vector<std::pair<std::string, Task>> tasks;
  const bool all = suite == "all";
  if (all || suite == "commutators") add_commutators(c, tasks);
  if (all || suite == "shift") add_shift(c, tasks);
  if (all || suite == "main-identity") add_main(c, tasks);
  if (all || suite == "prev-identity") add_prev(c, tasks);
  if (all || suite == "toda-bilinear") add_bilinear(c, tasks);
  if (all || suite == "toeplitz") add_toeplitz(c, tasks);

  auto reports = run_tasks(tasks);
  std::stable_sort(reports.begin(), reports.end(), [](const auto& a, const auto& b) {
    return sort_key(a) < sort_key(b);
  });
  std::ofstream file;
  std::ostream& sink = open_output(c.out, file, out);
  std::size_t failed = 0;
  for (const auto& r : reports) {
    sink << r.to_json().dump() << '\n';
    if (!r.passed()) ++failed;
  }
  err << suite << ": " << reports.size() << " checks, " << failed << " not passed\n";
  return failed == 0 ? 0 : 1;
}

int cmd_compute(RunConfig& c, const std::string& target, std::ostream& out) {
  validate(c);
  if (c.s.size() != 1 || c.l.size() != 1)
    throw UsageError("compute takes a single --s and --l");
  const int s = c.s.front(), l = c.l.front();
  TruncatedSeries series(c.context());
  if (target == "zprime-special") {
    series = zprime_special(l, c.p, c.NQ);
  } else {
    const ModelParams m = c.model(s, l);
    if (target == "zprime") {
      series = zprime_series(m);
    } else if (target == "z") {
      series = z_series(m);
    } else if (target == "tau-prime") {
      series = tau_prime_series(m).series;
    } else {
      static const std::map<std::string, TauForm> forms{{"left", TauForm::kLeft},
                                                        {"symmetric", TauForm::kSymmetric},
                                                        {"right", TauForm::kRight},
                                                        {"reduced-2d", TauForm::kReduced2D}};
      series = tau_prev_series(m, forms.at(c.form)).series;
    }
  }
  std::ofstream file;
  std::ostream& sink = open_output(c.out, file, out);
  sink << to_json(series).dump(2) << '\n';
  return 0;
}

void add_common(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--p", c.p_text, "q^{1/2} as num/den")->capture_default_str();
  cmd->add_option("--s", c.s, "charges, comma separated")->delimiter(',');
  cmd->add_option("--l", c.l, "levels, comma separated")->delimiter(',');
  cmd->add_option("--K", c.K, "number of time pairs")->capture_default_str();
  cmd->add_option("--D", c.D, "total time degree cap")->capture_default_str();
  cmd->add_option("--NQ", c.NQ, "Q orders above the ground energy")->capture_default_str();
  cmd->add_option("--N", c.N, "energy cutoff (default max(NQ, K*D))");
  cmd->add_option("--out", c.out, "output file (default stdout)");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact checks for the modified melting crystal model", "toda_crystal"};
  app.require_subcommand(1);
  RunConfig config;
  std::string suite, target;

  auto* verify = app.add_subcommand("verify", "run verification suites");
  verify->add_option("suite", suite)
      ->required()
      ->check(CLI::IsMember({"commutators", "shift", "main-identity", "prev-identity",
                             "toda-bilinear", "toeplitz", "all"}));
  add_common(verify, config);

  auto* compute = app.add_subcommand("compute", "export a series as JSON");
  compute->add_option("target", target)
      ->required()
      ->check(CLI::IsMember({"zprime", "z", "tau-prime", "tau-prev", "zprime-special"}));
  add_common(compute, config);
  compute->add_option("--form", config.form, "tau-prev form")
      ->check(CLI::IsMember({"left", "symmetric", "right", "reduced-2d"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*verify) return cmd_verify(config, suite, out, err);
    return cmd_compute(config, target, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace toda_crystal
