#include "radpi/reduction.hpp"

#include <algorithm>

#include "radpi/pi_print.hpp"

namespace radpi::pi {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::comm: return "comm";
    case EventKind::internal: return "internal";
    case EventKind::done: return "done";
    case EventKind::inject: return "inject";
  }
  return "?";
}

std::string label_of(const Channel& chan, const std::vector<std::string>& values) {
  std::string out = chan.str() + '<';
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += values[i];
  }
  return out + '>';
}

std::string ExecState::key() const {
  std::string out;
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (i) out += " | ";
    out += pi::key(components[i]);
  }
  if (!pending_events.empty()) {
    out += " ;;";
    for (const auto& m : pending_events) out += ' ' + label_of(m.chan, m.values);
  }
  return out;
}

namespace {

class HeadNormalizer {
 public:
  HeadNormalizer(const PiSystem& system, std::uint64_t& fresh, int budget)
      : system_(system), fresh_(fresh), budget_(budget) {}

  void component(const Term& t, std::vector<Term>& out) { head(t, budget_, out); }

 private:
  Term unfold(const Call& c, int budget) {
    const Definition* def = system_.find(c.constant);
    if (!def) throw std::runtime_error("call to undefined constant '" + c.constant + "'");
    if (def->params.size() != c.args.size())
      throw std::runtime_error("call to '" + c.constant + "' with wrong arity");
    if (budget <= 0)
      throw UnfoldBudgetExceeded("unfold budget exceeded at '" + c.constant +
                                 "': unguarded recursion without an observable step");
    NameMap m;
    for (std::size_t i = 0; i < c.args.size(); ++i) m[def->params[i]] = c.args[i];
    return substitute(def->body, m);
  }

  static bool is_prefix(const Term& t) {
    return t.is<Internal>() || t.is<Output>() || t.is<Input>() || t.is<Done>();
  }

  void head(const Term& t, int budget, std::vector<Term>& out) {
    if (t.is<Stop>()) return;
    if (const auto* p = t.as<Par>()) {
      for (const auto& c : p->terms) head(c, budget, out);
    } else if (const auto* n = t.as<New>()) {
      NameMap m;
      for (const auto& name : n->names) m[name] = "#" + std::to_string(fresh_++);
      head(substitute(n->body, m), budget, out);
    } else if (const auto* mt = t.as<Match>()) {
      head(mt->left == mt->right ? mt->then : mt->otherwise, budget, out);
    } else if (const auto* c = t.as<Call>()) {
      head(unfold(*c, budget), budget - 1, out);
    } else if (const auto* s = t.as<Sum>()) {
      std::vector<Term> branches;
      for (const auto& b : s->branches) summand(b, budget, branches);
      if (branches.empty()) return;
      if (branches.size() == 1) {
        if (is_prefix(branches.front())) out.push_back(branches.front());
        else head(branches.front(), budget, out);
        return;
      }
      out.push_back(sum(std::move(branches)));
    } else {
      out.push_back(t);
    }
  }

  // Only prefixes can fire from inside a choice; a parallel or restricted
  // summand stays inert.
  void summand(const Term& t, int budget, std::vector<Term>& out) {
    if (t.is<Stop>()) return;
    if (const auto* mt = t.as<Match>()) {
      summand(mt->left == mt->right ? mt->then : mt->otherwise, budget, out);
    } else if (const auto* c = t.as<Call>()) {
      summand(unfold(*c, budget), budget - 1, out);
    } else if (const auto* s = t.as<Sum>()) {
      for (const auto& b : s->branches) summand(b, budget, out);
    } else if (t.is<Par>() || t.is<New>()) {
      Term n = normalize(t);
      if (n.is<Par>() || n.is<New>()) out.push_back(n);
      else summand(n, budget, out);
    } else {
      out.push_back(t);
    }
  }

  const PiSystem& system_;
  std::uint64_t& fresh_;
  int budget_;
};

bool is_fresh(const std::string& name) { return !name.empty() && name[0] == '#'; }

// Renames fresh names canonically and sorts components.
ExecState canonical(std::vector<Term> components, std::uint64_t counter, std::vector<EnvMessage> pending) {
  std::set<std::string> fresh;
  for (const auto& c : components)
    for (const auto& n : free_names(c))
      if (is_fresh(n)) fresh.insert(n);

  ExecState st;
  st.pending_events = std::move(pending);
  std::sort(st.pending_events.begin(), st.pending_events.end());
  std::vector<std::string> names(fresh.begin(), fresh.end());
  Term whole = normalize(restrict(names, par(std::move(components))));
  if (const auto* n = whole.as<New>()) {
    NameMap open;
    for (std::size_t i = 0; i < n->names.size(); ++i) open[n->names[i]] = "#" + std::to_string(i);
    whole = substitute(n->body, open);
  }
  if (const auto* p = whole.as<Par>()) st.components = p->terms;
  else if (!whole.is<Stop>()) st.components = {whole};
  st.fresh_counter = std::max<std::uint64_t>(counter, names.size());
  return st;
}

struct Offer {
  std::size_t component;
  Term prefix;
};

std::vector<Offer> offers(const ExecState& state) {
  std::vector<Offer> out;
  for (std::size_t i = 0; i < state.components.size(); ++i) {
    const Term& c = state.components[i];
    if (const auto* s = c.as<Sum>()) {
      for (const auto& b : s->branches)
        if (!b.is<Par>() && !b.is<New>()) out.push_back({i, b});
    } else {
      out.push_back({i, c});
    }
  }
  return out;
}

}  // namespace

ExecState make_state(const PiSystem& system, std::vector<Term> terms, const ReductionOptions& options) {
  std::uint64_t fresh = 0;
  HeadNormalizer hn(system, fresh, options.unfold_budget);
  std::vector<Term> components;
  for (const auto& t : terms) hn.component(t, components);
  return canonical(std::move(components), fresh, {});
}

ExecState initial_state(const PiSystem& system, const ReductionOptions& options) {
  return make_state(system, {system.main}, options);
}

std::vector<Step> enabled_steps(const PiSystem& system, const ExecState& state,
                                const ReductionOptions& options) {
  std::vector<Step> steps;
  const auto all = offers(state);

  // Replaces the components in `consumed` by the head-normal forms of `added`.
  auto build = [&](std::initializer_list<std::size_t> consumed, std::initializer_list<Term> added,
                   std::vector<EnvMessage> pending) {
    std::uint64_t fresh = state.fresh_counter;
    std::vector<Term> comps;
    for (std::size_t i = 0; i < state.components.size(); ++i)
      if (std::find(consumed.begin(), consumed.end(), i) == consumed.end())
        comps.push_back(state.components[i]);
    HeadNormalizer hn(system, fresh, options.unfold_budget);
    for (const auto& t : added) hn.component(t, comps);
    return canonical(std::move(comps), fresh, std::move(pending));
  };

  auto received = [](const Input& in, const std::vector<std::string>& values) {
    NameMap m;
    for (std::size_t k = 0; k < values.size(); ++k) m[in.binders[k]] = values[k];
    return substitute(in.cont, m);
  };

  for (const auto& offer : all) {
    const Term& p = offer.prefix;
    if (const auto* in = p.as<Internal>()) {
      steps.push_back({{EventKind::internal, in->label}, build({offer.component}, {in->cont}, state.pending_events)});
    } else if (p.is<Done>()) {
      steps.push_back({{EventKind::done, "done"}, build({offer.component}, {}, state.pending_events)});
    } else if (const auto* out = p.as<Output>()) {
      for (const auto& other : all) {
        if (other.component == offer.component) continue;
        const auto* in = other.prefix.as<Input>();
        if (!in || in->chan != out->chan || in->binders.size() != out->payload.size()) continue;
        steps.push_back({{EventKind::comm, label_of(out->chan, out->payload)},
                         build({offer.component, other.component}, {out->cont, received(*in, out->payload)},
                               state.pending_events)});
      }
      if (system.open_channels.count(out->chan))
        steps.push_back({{EventKind::comm, label_of(out->chan, out->payload) + "@env"},
                         build({offer.component}, {out->cont}, state.pending_events)});
    } else if (const auto* in = p.as<Input>()) {
      for (std::size_t m = 0; m < state.pending_events.size(); ++m) {
        const auto& msg = state.pending_events[m];
        if (msg.chan != in->chan || msg.values.size() != in->binders.size()) continue;
        if (m > 0 && state.pending_events[m - 1] == msg) continue;
        auto rest = state.pending_events;
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(m));
        steps.push_back({{EventKind::comm, label_of(msg.chan, msg.values)},
                         build({offer.component}, {received(*in, msg.values)}, std::move(rest))});
      }
      for (const auto& msg : options.env_offers) {
        if (msg.chan != in->chan || msg.values.size() != in->binders.size()) continue;
        steps.push_back({{EventKind::inject, label_of(msg.chan, msg.values)},
                         build({offer.component}, {received(*in, msg.values)}, state.pending_events)});
      }
    }
  }
  return steps;
}

std::vector<Step> successors(const PiSystem& system, const ExecState& state, const ReductionOptions& options) {
  auto steps = enabled_steps(system, state, options);
  std::vector<std::pair<std::string, Step>> keyed;
  keyed.reserve(steps.size());
  for (auto& s : steps) keyed.emplace_back(s.target.key(), std::move(s));
  std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.second.event.label != b.second.event.label) return a.second.event.label < b.second.event.label;
    if (a.second.event.kind != b.second.event.kind) return a.second.event.kind < b.second.event.kind;
    return a.first < b.first;
  });
  std::set<std::string> seen;
  std::vector<Step> out;
  for (auto& [k, s] : keyed)
    if (seen.insert(k).second) out.push_back(std::move(s));
  return out;
}

Quiescence classify_stuck(const PiSystem& system, const ExecState& state) {
  if (state.terminated()) return Quiescence::terminated;
  for (const auto& offer : offers(state))
    if (const auto* in = offer.prefix.as<Input>())
      if (system.open_channels.count(in->chan)) return Quiescence::blocked_on_environment;
  return Quiescence::deadlock;
}

ExecState inject(const ExecState& state, EnvMessage message) {
  ExecState out = state;
  out.pending_events.push_back(std::move(message));
  std::sort(out.pending_events.begin(), out.pending_events.end());
  return out;
}

std::string pretty_state(const ExecState& state) {
  std::string out;
  for (std::size_t i = 0; i < state.components.size(); ++i) {
    if (i) out += " || ";
    out += pretty(state.components[i]);
  }
  if (state.components.empty()) out = "stop()";
  if (!state.pending_events.empty()) {
    out += "  [pending:";
    for (const auto& m : state.pending_events) out += ' ' + label_of(m.chan, m.values);
    out += ']';
  }
  return out;
}

}  // namespace radpi::pi
