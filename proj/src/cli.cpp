#include "ppir/cli.hpp"

#include "ppir/audit.hpp"
#include "ppir/exchange.hpp"
#include "ppir/io.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace ppir::cli {

namespace {

struct Options {
  std::string scenario;
  std::string mode;
  std::vector<std::size_t> demands;
  std::optional<std::uint64_t> seed;
  std::size_t runs = 1000;
  bool force = false;
  std::string out;
};

Mode pick_mode(const Options& o, const Scenario& s) {
  if (o.mode.empty()) return s.user_count() == 1 ? Mode::single : Mode::multi;
  return o.mode == "single" ? Mode::single : Mode::multi;
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty())
    out << text;
  else
    write_text(o.out, text);
}

int cmd_run(const Options& o, std::ostream& out, std::ostream& err) {
  const Scenario s = load_scenario(o.scenario);
  const Mode mode = pick_mode(o, s);
  const std::uint64_t seed = o.seed.value_or(s.seed());
  if (!o.force) {
    const ValidationReport report = validate_scenario(s, mode);
    if (!report.ok()) {
      err << "error: scenario refused for " << to_string(mode) << "-user mode\n";
      for (const Check& c : report.checks)
        if (c.tier == CheckTier::guarantee && !c.passed) err << "  " << c.name << ": " << c.detail << "\n";
      return kValidation;
    }
  }
  const SessionTrace trace = run_session(s, mode, o.demands, seed, o.force);
  emit(o, to_text(trace_json(s, trace, o.demands, seed)), out);
  return kOk;
}

int cmd_audit(const Options& o, std::ostream& out) {
  const Scenario s = load_scenario(o.scenario);
  const Mode mode = pick_mode(o, s);
  const std::uint64_t seed = o.seed.value_or(s.seed());
  Json doc = rates_json(s);
  doc["privacy"] = privacy_json(privacy_report(s, mode, o.runs, seed), seed);
  emit(o, to_text(doc), out);
  return kOk;
}

int cmd_rates(const Options& o, std::ostream& out) {
  emit(o, to_text(rates_json(load_scenario(o.scenario))), out);
  return kOk;
}

int cmd_selftest(std::ostream& out) {
  const auto results = run_selftest(reference_generator());
  std::size_t failed = 0;
  for (const auto& r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name;
    if (!r.passed) {
      out << ": " << r.detail;
      ++failed;
    }
    out << "\n";
  }
  out << results.size() - failed << "/" << results.size() << " fixtures passed\n";
  return failed == 0 ? kOk : kValidation;
}

}  // namespace

int exit_code_for(Errc code) noexcept {
  switch (code) {
    case Errc::ParseError: return kParse;
    case Errc::RecoveryFailed: return kRecovery;
    default: return kValidation;
  }
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pliable private information retrieval with identifiable side information: simulator and audits"};
  app.require_subcommand(1);
  Options o;

  auto add_mode = [&](CLI::App* cmd) {
    cmd->add_option("--mode", o.mode, "single or multi (default: single for one user, else multi)")
        ->check(CLI::IsMember({"single", "multi"}));
  };
  auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", o.seed, "protocol seed (default: the scenario's seed)");
  };
  auto add_out = [&](CLI::App* cmd) { cmd->add_option("--out", o.out, "write JSON here instead of stdout"); };

  CLI::App* run_cmd = app.add_subcommand("run", "generate a plan, answer it, decode it, write a trace");
  run_cmd->add_option("scenario", o.scenario, "scenario JSON file")->required();
  add_mode(run_cmd);
  run_cmd->add_option("--demand", o.demands, "desired class; repeat once per user in multi mode")->required();
  add_seed(run_cmd);
  run_cmd->add_flag("--force", o.force, "run even when scenario checks fail");
  add_out(run_cmd);

  CLI::App* audit_cmd = app.add_subcommand("audit", "rates, theorem flags, non-repetition census, distribution distances");
  audit_cmd->add_option("scenario", o.scenario, "scenario JSON file")->required();
  add_mode(audit_cmd);
  audit_cmd->add_option("--runs", o.runs, "seeds per demand choice")->capture_default_str();
  add_seed(audit_cmd);
  add_out(audit_cmd);

  CLI::App* rates_cmd = app.add_subcommand("rates", "closed-form rates and theorem flags");
  rates_cmd->add_option("scenario", o.scenario, "scenario JSON file")->required();
  add_out(rates_cmd);

  CLI::App* selftest_cmd = app.add_subcommand("selftest", "golden checks on the embedded fixtures");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run_cmd) return cmd_run(o, out, err);
    if (*audit_cmd) return cmd_audit(o, out);
    if (*rates_cmd) return cmd_rates(o, out);
    if (*selftest_cmd) return cmd_selftest(out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  return kUsage;
}

}  // namespace ppir::cli
