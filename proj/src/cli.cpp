#include "radpi/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "radpi/enactor.hpp"
#include "radpi/pi_print.hpp"
#include "radpi/rad_parser.hpp"
#include "radpi/soa_manifest.hpp"
#include "radpi/translator.hpp"

namespace radpi::cli {

namespace {

struct Failure {
  int code;
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct Config {
  std::string input;
  std::string output;
  std::string format = "text";
  std::uint64_t seed = 0;
  std::string script;
  std::vector<std::string> injections;
  int max_steps = 1000;
  std::size_t state_bound = 100000;
  std::size_t depth_bound = 10000;
  bool fail_on_deadlock = false;
  std::vector<std::string> env;
  std::vector<std::string> only;
  unsigned workers = 0;
};

class Runner {
 public:
  Runner(const Config& cfg, std::ostream& out, std::ostream& err) : cfg_(cfg), out_(out), err_(err) {}

  int check() {
    auto model = load(true);
    auto diags = rad::validate(model);
    std::size_t warnings = count(diags, Severity::warning);
    if (machine()) {
      out_ << "roles=" << model.roles.size() << "\ninteractions=" << model.interactions.size()
           << "\nwarnings=" << warnings << "\nerrors=0\n";
    } else {
      out_ << "ok: " << model.roles.size() << " roles, " << model.interactions.size() << " interactions, "
           << warnings << " warnings\n";
    }
    return kOk;
  }

  int translate() {
    auto t = compile(true);
    for (const auto& w : t.warnings) err_ << format(w) << '\n';
    std::string text = pi::pretty_pi(t.system);
    if (cfg_.output.empty()) {
      out_ << text;
    } else {
      std::ofstream f(cfg_.output, std::ios::binary);
      if (!f || !(f << text)) {
        err_ << "error: cannot write '" << cfg_.output << "'\n";
        return kUsage;
      }
    }
    return kOk;
  }

  int simulate() {
    auto t = compile(false);
    enact::SimulationOptions opts;
    opts.seed = cfg_.seed;
    opts.max_steps = cfg_.max_steps;
    try {
      for (const auto& s : cfg_.injections) opts.injections.push_back(enact::parse_injection(s));
      if (!cfg_.script.empty()) opts.script = enact::parse_script(read_file(cfg_.script));
    } catch (const std::exception& e) {
      err_ << "error: " << e.what() << '\n';
      return kUsage;
    }
    try {
      auto trace = enact::simulate(t.system, opts);
      out_ << enact::format_trace(trace);
      if (machine()) out_ << "end=" << enact::to_string(trace.end) << '\n';
      else err_ << "end: " << enact::to_string(trace.end) << '\n';
      return kOk;
    } catch (const enact::ScriptMismatch& e) {
      err_ << "error: " << e.what() << '\n';
      return kScriptMismatch;
    }
  }

  int explore() {
    auto model = load(false);
    auto t = translate::translate_model(model);
    enact::ExploreOptions opts;
    opts.state_bound = cfg_.state_bound;
    opts.depth_bound = cfg_.depth_bound;
    opts.workers = cfg_.workers ? cfg_.workers : std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
    opts.env_offers = declared_events(model);
    pi::PiSystem system = t.system;
    try {
      for (const auto& e : cfg_.env) opts.env_offers.push_back(enact::parse_env_message(e));
      if (!cfg_.only.empty()) system = enact::restrict_main(system, cfg_.only);
    } catch (const std::exception& e) {
      err_ << "error: " << e.what() << '\n';
      return kUsage;
    }
    auto result = enact::explore(system, opts);
    out_ << enact::format_report(result, machine());
    if (cfg_.fail_on_deadlock && !result.deadlocks.empty()) {
      err_ << "error: " << result.deadlocks.size() << " deadlock state(s) found\n";
      return kDeadlock;
    }
    return kOk;
  }

  int manifest() {
    auto model = load(false);
    auto manifests = soa::emit_manifest(model);
    try {
      for (const auto& p : soa::write_manifests(manifests, cfg_.output)) out_ << p.string() << '\n';
    } catch (const std::exception& e) {
      err_ << "error: " << e.what() << '\n';
      return kUsage;
    }
    return kOk;
  }

 private:
  bool machine() const { return cfg_.format == "machine"; }

  rad::RadModel load(bool show_warnings) {
    std::string text;
    try {
      text = read_file(cfg_.input);
    } catch (const std::exception& e) {
      err_ << "error: " << e.what() << '\n';
      throw Failure{kUsage};
    }
    auto parsed = rad::parse_rad(text, cfg_.input);
    for (const auto& d : parsed.diagnostics) err_ << format(d) << '\n';
    if (!parsed.ok()) throw Failure{kParseError};
    auto diags = rad::validate(*parsed.model);
    for (const auto& d : diags)
      if (show_warnings || d.severity == Severity::error) err_ << format(d) << '\n';
    if (has_errors(diags)) throw Failure{kValidationError};
    return std::move(*parsed.model);
  }

  translate::Translation compile(bool show_warnings) { return translate::translate_model(load(show_warnings)); }

  static std::vector<pi::EnvMessage> declared_events(const rad::RadModel& model) {
    std::vector<pi::EnvMessage> out;
    std::function<void(const rad::Role&, const rad::NodeList&)> walk = [&](const rad::Role& role,
                                                                           const rad::NodeList& nodes) {
      for (const auto& n : nodes) {
        if (const auto* e = n.as<rad::ExternalEvent>()) {
          pi::EnvMessage m{pi::Channel::plain(translate::env_channel(role.name)), {e->name}};
          if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(std::move(m));
        } else if (const auto* ip = n.as<rad::InteractionPoint>()) {
          walk(role, ip->before_reply);
        } else if (const auto* c = n.as<rad::Case>()) {
          for (const auto& b : c->branches) walk(role, b.body);
          if (c->otherwise) walk(role, *c->otherwise);
        } else if (const auto* p = n.as<rad::Part>()) {
          for (const auto& th : p->threads) walk(role, th);
        }
      }
    };
    for (const auto& r : model.roles) walk(r, r.body);
    return out;
  }

  const Config& cfg_;
  std::ostream& out_;
  std::ostream& err_;
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"RAD to Pi-Calculus compiler and enactment engine", "radpi"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "machine"}));

  auto* check = app.add_subcommand("check", "Parse and validate a model");
  check->add_option("input", cfg.input, "Model file (.rad)")->required();

  auto* translate = app.add_subcommand("translate", "Print the Pi-Calculus system");
  translate->add_option("input", cfg.input, "Model file (.rad)")->required();
  translate->add_option("-o,--output", cfg.output, "Write to a file instead of standard output");

  auto* simulate = app.add_subcommand("simulate", "Run one execution and print its trace");
  simulate->add_option("input", cfg.input, "Model file (.rad)")->required();
  auto* seed = simulate->add_option("--seed", cfg.seed, "Random scheduler seed");
  simulate->add_option("--script", cfg.script, "Script of event labels to follow")->excludes(seed);
  simulate->add_option("--inject", cfg.injections, "Environment message step:chan:v1,v2");
  simulate->add_option("--max-steps", cfg.max_steps, "Step limit")->check(CLI::PositiveNumber);

  auto* explore = app.add_subcommand("explore", "Explore the reachable state space");
  explore->add_option("input", cfg.input, "Model file (.rad)")->required();
  explore->add_option("--state-bound", cfg.state_bound, "Maximum number of states")->check(CLI::PositiveNumber);
  explore->add_option("--depth-bound", cfg.depth_bound, "Maximum depth")->check(CLI::PositiveNumber);
  explore->add_flag("--fail-on-deadlock", cfg.fail_on_deadlock, "Exit with code 3 when a deadlock is found");
  explore->add_option("--env", cfg.env, "Extra environment message chan:v1,v2");
  explore->add_option("--workers", cfg.workers, "Worker threads (default: hardware threads, at most 8)")
      ->check(CLI::PositiveNumber);
  explore->add_option("--only", cfg.only, "Keep only these processes of the main composition")->delimiter(',');

  auto* manifest = app.add_subcommand("manifest", "Write one service manifest per role");
  manifest->add_option("input", cfg.input, "Model file (.rad)")->required();
  manifest->add_option("-o,--output", cfg.output, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  Runner runner(cfg, out, err);
  try {
    if (check->parsed()) return runner.check();
    if (translate->parsed()) return runner.translate();
    if (simulate->parsed()) return runner.simulate();
    if (explore->parsed()) return runner.explore();
    if (manifest->parsed()) return runner.manifest();
  } catch (const Failure& f) {
    return f.code;
  } catch (const pi::UnfoldBudgetExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }
  return kUsage;
}

}  // namespace radpi::cli
