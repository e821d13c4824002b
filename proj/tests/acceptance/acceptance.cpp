// Acceptance harness. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails or exceeds its time limit.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles/lts_oracle.hpp"
#include "oracles/model_gen.hpp"
#include "oracles/term_oracle.hpp"
#include "radpi/cli.hpp"
#include "radpi/enactor.hpp"
#include "radpi/pi_core.hpp"
#include "radpi/pi_print.hpp"
#include "radpi/rad_parser.hpp"
#include "radpi/translator.hpp"

using namespace radpi;

namespace {

std::string source_path(const std::string& rel) { return std::string(RADPI_SOURCE_DIR) + "/" + rel; }

std::string slurp(const std::string& rel) {
  std::ifstream f(source_path(rel), std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + rel);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

rad::RadModel load(const std::string& rel) {
  auto r = rad::parse_rad(slurp(rel), rel);
  if (!r.ok()) throw std::runtime_error("cannot parse " + rel);
  return *r.model;
}

// Collects failures for one criterion.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

struct CliResult {
  int code;
  std::string out, err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "radpi");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// ---------------------------------------------------------------------------

void golden(Check& c) {
  auto golden = pi::read_pi(slurp("tests/golden/fig5.pi"));
  c.expect(std::filesystem::exists(source_path("tests/golden/fig5.NOTES.md")), "NOTES file missing");
  auto tr = translate::translate_model(load("corpus/spp.rad"));
  std::set<std::string> names;
  for (const auto& d : golden.defs) {
    names.insert(d.name);
    const auto* mine = tr.system.find(d.name);
    if (!mine) {
      c.expect(false, "no translated def " + d.name);
      continue;
    }
    c.expect(mine->params == d.params, d.name + ": parameters differ");
    c.expect(pi::struct_congruent(mine->body, d.body),
             d.name + ": not congruent\n  golden:     " + pi::pretty(d.body) + "\n  translated: " + pi::pretty(mine->body));
  }
  c.expect(names.count("Resr") && names.count("Colres"), "golden lacks Resr or Colres");
  c.expect(pi::struct_congruent(tr.system.main, golden.main), "system line differs");
}

// ---------------------------------------------------------------------------

void conformance(Check& c) {
  struct Expect {
    const char* file;
    std::map<std::string, std::string> defs;  // constant -> exact pretty body
    std::string main;
    std::vector<std::string> ports;
  };
  const std::vector<Expect> rules = {
      // 1: names from overrides or mangling, ports from the prefixes.
      {"rule01.rad",
       {{"Backupse", "backupse/res<m>.stop()"}, {"Resr", "backupse/res(m).stop()"}},
       "Backupse || Resr",
       {"backupse/res"}},
      // 2: one process per role, stubs included.
      {"rule02.rad",
       {{"Alpha", "work().stop()"}, {"Beta", "rest().stop()"}, {"Gamma", "stop()"}},
       "Alpha || Beta || Gamma",
       {}},
      // 3: sync is a direct output, async goes through a one-shot buffer.
      {"rule03.rad",
       {{"A", "a/b<m>.(Buf_q(n) || stop())"}, {"Buf_q", "a/c<n>.stop()"}, {"B", "a/b(m).stop()"},
        {"C", "a/c(n).stop()"}},
       "A || B || C",
       {"a/b", "a/c"}},
      // 4: initiator first in the port.
      {"rule04.rad", {{"A", "b/a(m).stop()"}, {"B", "b/a<m>.stop()"}}, "A || B", {"b/a"}},
      // 5: one starred port, output then input on the initiator side.
      {"rule05.rad", {{"A", "a/b*<q>.a/b*(r).stop()"}, {"B", "a/b*(q).a/b*<r>.stop()"}}, "A || B", {"a/b*"}},
      // 6: multi-party port.
      {"rule06.rad",
       {{"A", "a/b/c<m>.a/b/c<m>.stop()"}, {"B", "a/b/c(m).stop()"}, {"C", "a/b/c(m).stop()"}},
       "A || B || C",
       {"a/b/c"}},
      // 7: an encapsulated activity is one atomic step.
      {"rule07.rad", {{"A", "audit().stop()"}}, "A", {}},
      // 8: an external event is an input on the role's environment channel.
      {"rule08.rad", {{"A", "env_a(arrival).handle().stop()"}}, "A", {}},
      // 9: states and goals are upper-case constants.
      {"rule09.rad", {{"A", "begin().Ready"}, {"Ready", "tick().Ready"}, {"B", "done()"}}, "A || B", {}},
      // 10: activities are lower-case labels.
      {"rule10.rad", {{"A", "lower_case().manual:sign().stop()"}}, "A", {}},
      // 11: instances.
      {"rule11.rad",
       {{"A", "stop()"}, {"B", "stop()"}, {"B_spawn", "spawn_b?().(B || B_spawn)"}},
       "A(1) || A(2) || A(3) || B_spawn",
       {}},
  };
  for (const auto& r : rules) {
    std::string file = std::string("tests/acceptance/rules/") + r.file;
    auto tr = translate::translate_model(load(file));
    const auto& sys = tr.system;
    c.expect(pi::pretty(sys.main) == r.main, std::string(r.file) + ": main is " + pi::pretty(sys.main));
    for (const auto& [name, body] : r.defs) {
      const auto* d = sys.find(name);
      if (!d) {
        c.expect(false, std::string(r.file) + ": missing " + name);
        continue;
      }
      c.expect(pi::pretty(d->body) == body, std::string(r.file) + ": " + name + " = " + pi::pretty(d->body));
    }
    std::vector<std::string> ports;
    for (const auto& p : sys.ports) ports.push_back(p.str());
    c.expect(ports == r.ports, std::string(r.file) + ": ports differ");
    c.expect(pi::check_system(sys).empty(), std::string(r.file) + ": system invariants");
  }
  // Rule 5 structure, checked on the term rather than its text.
  {
    auto sys = translate::translate_model(load("tests/acceptance/rules/rule05.rad")).system;
    const auto* out = sys.find("A")->body.as<pi::Output>();
    c.expect(out && out->chan.two_way && out->cont.as<pi::Input>() && out->cont.as<pi::Input>()->chan == out->chan,
             "rule05: initiator is not output-then-input on one starred port");
  }
  // Rule 10 casing is enforced: an upper-case activity is rejected.
  {
    auto diags = rad::validate(load("corpus/bad_case.rad"));
    bool tagged = false;
    for (const auto& d : diags) tagged |= d.code == "rule-10";
    c.expect(tagged, "bad_case: no rule-10 error");
    bool threw = false;
    try {
      translate::translate_model(load("corpus/bad_case.rad"));
    } catch (const translate::TranslationError&) {
      threw = true;
    }
    c.expect(threw, "bad_case: translated without error");
  }
  // Rule 9: a lower-case state is rejected.
  {
    auto r = rad::parse_rad("model \"M\" { role a { state ready stop } }");
    bool rejected = !r.ok();
    if (r.ok()) rejected = count(rad::validate(*r.model), Severity::error) > 0;
    c.expect(rejected, "lower-case state accepted");
  }
}

// ---------------------------------------------------------------------------

constexpr int kTerms = 600;

void semantics(Check& c) {
  oracle::TermGen gen(20260101);
  oracle::Perturber perturb(99);
  int idem = 0, laws = 0, subst = 0;
  for (int i = 0; i < kTerms; ++i) {
    auto t = gen.term(4);
    if (pi::depth(t) > 4) {
      c.expect(false, "generator exceeded depth 4");
      continue;
    }
    // Idempotence.
    auto n = pi::normalize(t);
    c.expect(pi::normalize(n) == n, "normalize not idempotent on " + pi::key(t));
    ++idem;

    // Equivalence laws. u and w are congruent to t by construction; s is an
    // unrelated term and must be handled symmetrically.
    auto u = perturb.run(t);
    auto w = perturb.run(u);
    auto s = gen.term(4);
    c.expect(pi::struct_congruent(t, t), "not reflexive on " + pi::key(t));
    c.expect(pi::struct_congruent(t, u) && pi::struct_congruent(u, t),
             "perturbation not congruent: " + pi::key(t) + " vs " + pi::key(u));
    c.expect(pi::struct_congruent(u, w) && pi::struct_congruent(t, w), "not transitive on " + pi::key(t));
    c.expect(pi::struct_congruent(t, s) == pi::struct_congruent(s, t), "not symmetric on " + pi::key(t));
    if (pi::struct_congruent(t, s) && pi::struct_congruent(s, u))
      c.expect(pi::struct_congruent(t, u), "not transitive through " + pi::key(s));
    // Congruent terms have the same free names.
    c.expect(oracle::free_set(t) == oracle::free_set(u), "free names changed by perturbation");
    ++laws;

    // Substitution against the reference implementation.
    std::map<std::string, std::string> m;
    for (int k = 0; k < 3; ++k) m[gen.name()] = gen.name();
    auto got = pi::substitute(t, m);
    auto want = oracle::reference_substitute(t, m);
    c.expect(oracle::alpha_eq(got, want), "substitute differs on " + pi::key(t) + ": " + pi::key(got) +
                                              " vs " + pi::key(want));
    std::set<std::string> expect_free;
    for (const auto& f : oracle::free_set(t)) expect_free.insert(m.count(f) ? m.at(f) : f);
    c.expect(oracle::free_set(got) == expect_free, "substitute free names wrong on " + pi::key(t));
    c.expect(pi::struct_congruent(pi::substitute(u, m), got), "substitute does not respect congruence");
    ++subst;
  }
  c.expect(idem >= 500 && laws >= 500 && subst >= 500, "fewer than 500 terms per property");
}

// ---------------------------------------------------------------------------

using oracle::Action;

void exploration(Check& c) {
  auto compare = [&](const std::string& what, const pi::PiSystem& sys, const std::vector<oracle::Process>& procs,
                     const std::vector<std::string>& offers) {
    enact::ExploreOptions o;
    std::set<std::string> oracle_offers;
    for (const auto& s : offers) {
      o.env_offers.push_back(enact::parse_env_message(s));
      oracle_offers.insert(o.env_offers.back().chan.str());
    }
    auto got = enact::explore(sys, o);
    auto want = oracle::brute_force_bfs(procs, oracle_offers);
    std::ostringstream msg;
    msg << what << ": engine (" << got.states_visited << ", " << got.transitions << ", " << got.deadlocks.size()
        << ") oracle (" << want.states << ", " << want.transitions << ", " << want.deadlocks << ")";
    c.expect(got.states_visited == want.states && got.transitions == want.transitions, msg.str());
    c.expect(got.deadlocks.empty() && want.deadlocks == 0, msg.str() + " deadlocks");
    c.expect(got.done_reachable == want.done_reachable, what + ": done reachability differs");
    c.expect(!got.bound_hit, what + ": bound hit");
  };

  {
    auto sys = translate::translate_model(load("corpus/ping.rad")).system;
    const std::string p = "pinger/ponger*";
    compare("ping", sys,
            {{{Action::tau, ""}, {Action::send, p}, {Action::recv, p}, {Action::tau, ""}, {Action::done, ""}},
             {{Action::recv, p}, {Action::send, p}}},
            {});
  }
  {
    auto full = translate::translate_model(load("corpus/spp.rad")).system;
    auto sys = enact::restrict_main(full, {"Resr", "Colres"});
    const std::string dr = "res/colres*";
    oracle::Process resr = {{Action::env_recv, "env_researcher"},
                            {Action::tau, ""},  // crord
                            {Action::tau, ""},  // cer
                            {Action::tau, ""},  // rd
                            {Action::tau, ""},  // p
                            {Action::tau, ""},  // fid
                            {Action::send, dr},
                            {Action::recv, dr},
                            {Action::tau, ""},  // cpc
                            {Action::tau, ""},  // ija
                            {Action::tau, ""},  // pmpb
                            {Action::env_send, "res/pubprac"},
                            {Action::env_recv, "pubprac/res"}};
    oracle::Process colres = {{Action::tau, ""},
                              {Action::recv, dr},
                              {Action::tau, ""},  // irope
                              {Action::send, dr},
                              {Action::tau, ""}};
    compare("spp Resr||Colres", sys, {resr, colres}, {"env_researcher:risd"});
  }
}

// ---------------------------------------------------------------------------

void scenarios(Check& c) {
  struct Scenario {
    const char* script;
    const char* last;
  };
  const std::vector<Scenario> all = {{"spp_accept", "done"},
                                     {"spp_revise_submit", "done"},
                                     {"spp_late", "taj"},
                                     {"spp_review_reject", "raj"},
                                     {"spp_evaluation_reject", "taj"}};
  for (const auto& s : all) {
    auto r = cli({"--format", "machine", "simulate", source_path("corpus/spp.rad"), "--script",
                  source_path(std::string("tests/scenarios/") + s.script + ".script")});
    if (r.code != 0) {
      c.expect(false, std::string(s.script) + ": exit " + std::to_string(r.code) + " " + r.err);
      continue;
    }
    // Last trace line before the "end=" line.
    std::vector<std::string> lines;
    std::istringstream in(r.out);
    for (std::string l; std::getline(in, l);) lines.push_back(l);
    c.expect(!lines.empty() && lines.back() == "end=terminated", std::string(s.script) + ": did not terminate");
    std::string last = lines.size() >= 2 ? lines[lines.size() - 2] : "";
    auto tab = last.rfind('\t');
    std::string label = tab == std::string::npos ? "" : last.substr(tab + 1);
    c.expect(label == s.last, std::string(s.script) + ": last event " + label + ", expected " + s.last);
    bool has_done = r.out.find("\tdone\tdone\n") != std::string::npos;
    c.expect(has_done == (std::string(s.last) == "done"), std::string(s.script) + ": done reachability");
  }
  auto dl = cli({"explore", source_path("corpus/circular_wait.rad"), "--fail-on-deadlock"});
  c.expect(dl.code == cli::kDeadlock, "circular wait exit " + std::to_string(dl.code));
  auto ok = cli({"explore", source_path("corpus/ping.rad"), "--fail-on-deadlock"});
  c.expect(ok.code == cli::kOk, "ping exit " + std::to_string(ok.code));
}

// ---------------------------------------------------------------------------

void round_trip(Check& c) {
  auto one = [&](const rad::RadModel& m, const std::string& what) {
    auto first = rad::emit_rad(m);
    auto r = rad::parse_rad(first, what);
    if (!r.ok()) {
      c.expect(false, what + ": emitted text does not parse");
      return;
    }
    c.expect(*r.model == m, what + ": reparsed model differs");
    c.expect(rad::emit_rad(*r.model) == first, what + ": second emission differs");
  };
  int corpus = 0;
  for (const auto& e : std::filesystem::directory_iterator(source_path("corpus"))) {
    if (e.path().extension() != ".rad") continue;
    one(load("corpus/" + e.path().filename().string()), e.path().filename().string());
    ++corpus;
  }
  c.expect(corpus >= 5, "corpus incomplete");
  oracle::ModelGen gen(4242);
  for (int i = 0; i < 100; ++i) {
    auto m = gen.model();
    c.expect(count(rad::validate(m), Severity::error) == 0, "generated model " + std::to_string(i) + " invalid");
    one(m, "generated " + std::to_string(i));
  }
}

// ---------------------------------------------------------------------------

void determinism(Check& c) {
  auto sim = [&](const std::vector<std::string>& args) {
    auto a = cli(args);
    auto b = cli(args);
    c.expect(a.code == 0, args[2] + ": simulate exit " + std::to_string(a.code));
    c.expect(a.out == b.out && !a.out.empty(), args[2] + ": traces differ");
  };
  sim({"--format", "machine", "simulate", source_path("corpus/order_fulfilment.rad"), "--seed", "42", "--inject",
       "1:env_customer:need", "--inject", "2:env_customer:need", "--inject", "5:spawn_courier"});
  sim({"--format", "machine", "simulate", source_path("corpus/spp.rad"), "--seed", "42", "--inject",
       "1:env_researcher:risd"});
  sim({"simulate", source_path("corpus/ping.rad"), "--seed", "42"});

  for (const char* f : {"corpus/order_fulfilment.rad", "corpus/spp.rad", "corpus/circular_wait.rad"}) {
    auto base = cli({"--format", "machine", "explore", source_path(f), "--workers", "1"});
    c.expect(base.code == 0, std::string(f) + ": explore exit " + std::to_string(base.code));
    for (const char* n : {"2", "4", "8"}) {
      auto other = cli({"--format", "machine", "explore", source_path(f), "--workers", n});
      c.expect(other.out == base.out, std::string(f) + ": report differs with " + n + " workers");
    }
  }
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<void(Check&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "golden system transcription", 1.0, golden},
      {2, "rule conformance", 1.0, conformance},
      {3, "semantics properties", 30.0, semantics},
      {4, "exploration oracle", 5.0, exploration},
      {5, "scenario traces", 5.0, scenarios},
      {6, "round-trip", 5.0, round_trip},
      {7, "determinism", 60.0, determinism},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Check c;
    auto t0 = std::chrono::steady_clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > cr.limit_s) {
      std::ostringstream m;
      m << "took " << secs << " s, limit " << cr.limit_s << " s";
      c.failures.push_back(m.str());
    }
    bool ok = c.failures.empty();
    failed += !ok;
    std::printf("%s criterion %d (%s) %.3f s\n", ok ? "PASS" : "FAIL", cr.id, cr.name, secs);
    for (std::size_t i = 0; i < c.failures.size() && i < 10; ++i) std::printf("  %s\n", c.failures[i].c_str());
    if (c.failures.size() > 10) std::printf("  ... %zu more\n", c.failures.size() - 10);
  }
  return failed == 0 ? 0 : 1;
}
