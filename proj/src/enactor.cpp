#include "radpi/enactor.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <deque>
#include <exception>
#include <random>
#include <thread>
#include <unordered_set>

namespace radpi::enact {

std::string_view to_string(EndReason reason) {
  switch (reason) {
    case EndReason::terminated: return "terminated";
    case EndReason::deadlock: return "deadlock";
    case EndReason::blocked: return "blocked";
    case EndReason::truncated: return "truncated";
    case EndReason::script_end: return "script-end";
  }
  return "?";
}

std::string format_trace(const Trace& trace) {
  std::string out;
  for (const auto& e : trace.events) {
    out += std::to_string(e.step);
    out += '\t';
    out += pi::to_string(e.kind);
    out += '\t';
    out += e.label;
    out += '\n';
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_values(std::string_view text) {
  std::vector<std::string> out;
  text = trim(text);
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    auto comma = text.find(',', start);
    auto v = trim(text.substr(start, comma == std::string_view::npos ? comma : comma - start));
    if (v.empty()) throw std::invalid_argument("empty value in '" + std::string(text) + "'");
    out.emplace_back(v);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

int parse_positive(std::string_view s, const char* what) {
  int v = 0;
  if (s.empty()) throw std::invalid_argument(std::string("missing ") + what);
  for (char c : s) {
    if (c < '0' || c > '9') throw std::invalid_argument(std::string("bad ") + what + " '" + std::string(s) + "'");
    v = v * 10 + (c - '0');
    if (v > 100000000) throw std::invalid_argument(std::string(what) + " too large");
  }
  if (v < 1) throw std::invalid_argument(std::string(what) + " must be at least 1");
  return v;
}

}  // namespace

pi::EnvMessage parse_env_message(std::string_view text) {
  text = trim(text);
  auto colon = text.find(':');
  pi::EnvMessage m;
  m.chan = pi::Channel::parse(trim(text.substr(0, colon)));
  if (colon != std::string_view::npos) m.values = split_values(text.substr(colon + 1));
  return m;
}

Injection parse_injection(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw std::invalid_argument("injection must look like step:chan:v1,v2");
  Injection inj;
  inj.step = parse_positive(trim(text.substr(0, colon)), "injection step");
  inj.message = parse_env_message(text.substr(colon + 1));
  return inj;
}

std::vector<ScriptEntry> parse_script(std::string_view text) {
  std::vector<ScriptEntry> out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    auto line = trim(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    ++line_no;
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    if (line.empty() || line.front() == '#') continue;
    ScriptEntry e;
    e.line = line_no;
    if (line.substr(0, 7) == "inject " || line.substr(0, 7) == "inject\t") {
      auto rest = trim(line.substr(7));
      auto space = rest.find_first_of(" \t");
      pi::EnvMessage m;
      try {
        m.chan = pi::Channel::parse(rest.substr(0, space));
        if (space != std::string_view::npos) m.values = split_values(rest.substr(space + 1));
      } catch (const std::invalid_argument& ex) {
        throw std::invalid_argument("script line " + std::to_string(line_no) + ": " + ex.what());
      }
      e.inject = std::move(m);
      e.label = pi::label_of(e.inject->chan, e.inject->values);
    } else {
      e.label = std::string(line);
    }
    out.push_back(std::move(e));
  }
  return out;
}

namespace {

std::string mismatch_message(const ScriptEntry& entry, int step, const std::vector<std::string>& enabled) {
  std::string msg = "script line " + std::to_string(entry.line) + ": '" + entry.label +
                    "' is not enabled at step " + std::to_string(step) + "; enabled:";
  if (enabled.empty()) msg += " (none)";
  for (std::size_t i = 0; i < enabled.size(); ++i) msg += (i ? ", " : " ") + enabled[i];
  return msg;
}

}  // namespace

ScriptMismatch::ScriptMismatch(const ScriptEntry& entry, int step_, std::vector<std::string> enabled_)
    : std::runtime_error(mismatch_message(entry, step_, enabled_)),
      line(entry.line),
      step(step_),
      enabled(std::move(enabled_)) {}

Trace simulate(const pi::PiSystem& system, const SimulationOptions& options) {
  if (options.max_steps < 1) throw std::invalid_argument("max_steps must be at least 1");
  pi::ReductionOptions ropts;
  ropts.unfold_budget = options.unfold_budget;

  Trace trace;
  pi::ExecState state = pi::initial_state(system, ropts);
  std::mt19937_64 rng(options.seed);
  std::deque<Injection> injections(options.injections.begin(), options.injections.end());
  std::stable_sort(injections.begin(), injections.end(),
                   [](const Injection& a, const Injection& b) { return a.step < b.step; });
  std::size_t script_pos = 0;
  int step = 0;

  auto record = [&](pi::EventKind kind, std::string label) {
    trace.events.push_back({++step, kind, std::move(label)});
  };
  auto apply_injection = [&] {
    const auto& m = injections.front().message;
    record(pi::EventKind::inject, pi::label_of(m.chan, m.values));
    state = pi::inject(state, m);
    injections.pop_front();
  };
  auto stuck_reason = [&] {
    switch (pi::classify_stuck(system, state)) {
      case pi::Quiescence::terminated: return EndReason::terminated;
      case pi::Quiescence::blocked_on_environment: return EndReason::blocked;
      case pi::Quiescence::deadlock: return EndReason::deadlock;
    }
    return EndReason::deadlock;
  };

  while (true) {
    if (step >= options.max_steps) {
      trace.end = EndReason::truncated;
      break;
    }
    if (!injections.empty() && injections.front().step <= step + 1) {
      apply_injection();
      continue;
    }
    if (options.script) {
      const auto& script = *options.script;
      if (script_pos == script.size()) {
        trace.end = pi::successors(system, state, ropts).empty() ? stuck_reason() : EndReason::script_end;
        break;
      }
      const ScriptEntry& entry = script[script_pos];
      if (entry.inject) {
        record(pi::EventKind::inject, entry.label);
        state = pi::inject(state, *entry.inject);
        ++script_pos;
        continue;
      }
      auto succ = pi::successors(system, state, ropts);
      auto it = std::find_if(succ.begin(), succ.end(), [&](const pi::Step& s) { return s.event.label == entry.label; });
      if (it == succ.end()) {
        if (succ.empty() && !injections.empty()) {
          apply_injection();
          continue;
        }
        std::vector<std::string> enabled;
        for (const auto& s : succ) enabled.push_back(s.event.label);
        throw ScriptMismatch(entry, step + 1, std::move(enabled));
      }
      record(it->event.kind, it->event.label);
      state = std::move(it->target);
      ++script_pos;
      continue;
    }
    auto succ = pi::successors(system, state, ropts);
    if (succ.empty()) {
      if (!injections.empty()) {
        apply_injection();
        continue;
      }
      trace.end = stuck_reason();
      break;
    }
    auto& chosen = succ[rng() % succ.size()];
    record(chosen.event.kind, chosen.event.label);
    state = std::move(chosen.target);
  }
  trace.final_state = pi::pretty_state(state);
  return trace;
}

ExplorationResult explore(const pi::PiSystem& system, const ExploreOptions& options) {
  if (options.state_bound < 1 || options.depth_bound < 1) throw std::invalid_argument("bounds must be at least 1");
  pi::ReductionOptions ropts;
  ropts.env_offers = options.env_offers;
  ropts.unfold_budget = options.unfold_budget;

  ExplorationResult result;
  pi::ExecState init = pi::initial_state(system, ropts);
  std::unordered_set<std::string> visited{init.key()};
  std::vector<pi::ExecState> frontier{std::move(init)};
  result.states_visited = 1;
  const unsigned workers = std::max(1u, options.workers);

  for (std::size_t depth = 0; !frontier.empty(); ++depth) {
    result.max_depth = depth;
    if (depth >= options.depth_bound) {
      result.bound_hit = true;
      break;
    }

    std::vector<std::vector<pi::Step>> succ(frontier.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto work = [&] {
      try {
        for (std::size_t i = next++; i < frontier.size() && !failed; i = next++)
          succ[i] = pi::successors(system, frontier[i], ropts);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    };
    const unsigned n = static_cast<unsigned>(std::min<std::size_t>(workers, frontier.size()));
    if (n <= 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < n; ++w) pool.emplace_back(work);
      for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<pi::ExecState> next_frontier;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      auto& steps = succ[i];
      result.transitions += steps.size();
      if (steps.empty()) {
        switch (pi::classify_stuck(system, frontier[i])) {
          case pi::Quiescence::terminated: ++result.terminated_states; break;
          case pi::Quiescence::blocked_on_environment: ++result.environment_waits; break;
          case pi::Quiescence::deadlock: result.deadlocks.push_back(pi::pretty_state(frontier[i])); break;
        }
      }
      for (auto& s : steps) {
        if (s.event.kind == pi::EventKind::done) result.done_reachable = true;
        auto k = s.target.key();
        if (visited.count(k)) continue;
        if (visited.size() >= options.state_bound) {
          result.bound_hit = true;
          continue;
        }
        visited.insert(std::move(k));
        next_frontier.push_back(std::move(s.target));
      }
    }
    result.states_visited = visited.size();
    frontier = std::move(next_frontier);
  }
  return result;
}

std::string format_report(const ExplorationResult& r, bool machine) {
  std::string out;
  auto line = [&](const std::string& key, const std::string& value) {
    out += key;
    out += machine ? "=" : ": ";
    out += value;
    out += '\n';
  };
  auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
  line("states", std::to_string(r.states_visited));
  line("transitions", std::to_string(r.transitions));
  line("deadlocks", std::to_string(r.deadlocks.size()));
  line("environment_waits", std::to_string(r.environment_waits));
  line("terminated", std::to_string(r.terminated_states));
  line("max_depth", std::to_string(r.max_depth));
  line("done_reachable", flag(r.done_reachable));
  line("bound_hit", flag(r.bound_hit));
  for (std::size_t i = 0; i < r.deadlocks.size(); ++i)
    line(machine ? "deadlock." + std::to_string(i + 1) : "deadlock", r.deadlocks[i]);
  return out;
}

pi::PiSystem restrict_main(const pi::PiSystem& system, const std::vector<std::string>& constants) {
  std::vector<pi::Term> calls;
  if (const auto* p = system.main.as<pi::Par>()) calls = p->terms;
  else calls = {system.main};
  for (const auto& c : constants) {
    bool found = std::any_of(calls.begin(), calls.end(), [&](const pi::Term& t) {
      const auto* call = t.as<pi::Call>();
      return call && call->constant == c;
    });
    if (!found) throw std::invalid_argument("'" + c + "' is not a process of the main composition");
  }
  std::vector<pi::Term> kept;
  for (const auto& t : calls) {
    const auto* call = t.as<pi::Call>();
    if (call && std::find(constants.begin(), constants.end(), call->constant) != constants.end())
      kept.push_back(t);
  }
  pi::PiSystem out = system;
  out.main = pi::par(std::move(kept));
  return out;
}

}  // namespace radpi::enact
