#include "radpi/translator.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>
#include <tuple>

namespace radpi::translate {

namespace {

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string with_suffix(const std::string& base, const std::set<std::string>& taken) {
  if (!taken.count(base)) return base;
  for (int k = 1; k < 1000000; ++k) {
    std::string candidate = base + std::to_string(k);
    if (!taken.count(candidate)) return candidate;
  }
  throw std::runtime_error("no free identifier for '" + base + "'");
}

std::string summarize(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags)
    if (d.severity == Severity::error) return "model has validation errors: " + format(d);
  return "model has validation errors";
}

}  // namespace

TranslationError::TranslationError(std::vector<Diagnostic> diags)
    : std::runtime_error(summarize(diags)), diagnostics(std::move(diags)) {}

std::string env_channel(const std::string& role_name) { return "env_" + role_name; }
std::string spawn_channel(const std::string& role_name) { return "spawn_" + role_name; }

std::string mangle_identifier(const std::string& role_name, const std::optional<std::string>& override_symbol,
                              const std::set<std::string>& taken) {
  if (override_symbol) return *override_symbol;
  if (role_name.empty()) throw std::invalid_argument("empty role name");
  std::string base;
  for (char c : role_name)
    if (c != '_') base += c;
  if (base.empty()) base = "R";
  base[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(base[0])));
  if (base.size() > 8) base.resize(8);
  return with_suffix(base, taken);
}

pi::Channel port_name(const rad::InteractionDecl& decl, const SymbolTable& table) {
  std::vector<std::string> parts{table.role_port_prefix.at(decl.initiator)};
  for (const auto& r : decl.responders) parts.push_back(table.role_port_prefix.at(r));
  return pi::Channel::port(std::move(parts), decl.two_way);
}

SymbolTable build_symbols(const rad::RadModel& model) {
  SymbolTable table;
  std::set<std::string> taken;
  for (const auto& r : model.roles)
    if (r.symbol) taken.insert(*r.symbol);
  std::function<void(const rad::NodeList&)> states = [&](const rad::NodeList& nodes) {
    for (const auto& n : nodes) {
      if (const auto* s = n.as<rad::StateMark>()) taken.insert(s->name);
      if (const auto* c = n.as<rad::Case>()) {
        for (const auto& b : c->branches) states(b.body);
        if (c->otherwise) states(*c->otherwise);
      }
    }
  };
  for (const auto& r : model.roles) states(r.body);

  for (const auto& r : model.roles) {
    if (r.symbol) {
      table.role_constant[r.name] = *r.symbol;
      continue;
    }
    std::string sym = mangle_identifier(r.name, std::nullopt, taken);
    taken.insert(sym);
    table.role_constant[r.name] = sym;
  }

  std::set<std::string> prefixes;
  for (const auto& r : model.roles)
    if (r.port_prefix) prefixes.insert(*r.port_prefix);
  for (const auto& r : model.roles) {
    if (r.port_prefix) {
      table.role_port_prefix[r.name] = *r.port_prefix;
      continue;
    }
    std::string p = with_suffix(lower(table.role_constant[r.name]), prefixes);
    prefixes.insert(p);
    table.role_port_prefix[r.name] = p;
  }

  // Interactions between the same roles would share a port; later ones get
  // their id appended to the last participant.
  std::set<pi::Channel> used;
  for (const auto& d : model.interactions) {
    pi::Channel port = port_name(d, table);
    if (used.count(port)) port.parts.back() += ":" + d.id;
    used.insert(port);
    table.interaction_port.emplace(d.id, port);
  }
  for (const auto& r : model.roles) table.environment_channel[r.name] = env_channel(r.name);
  return table;
}

namespace {

using pi::Term;

class RoleCompiler {
 public:
  RoleCompiler(const rad::RadModel& model, const SymbolTable& symbols, pi::PiSystem& system,
               std::vector<Diagnostic>& warnings, std::set<std::string>& used_env)
      : model_(model), symbols_(symbols), system_(system), warnings_(warnings), used_env_(used_env) {}

  // Adds the role definition, then its state definitions in source order.
  void compile(const rad::Role& role, const std::string& constant, std::vector<std::string> params) {
    role_ = &role;
    Term body = role.stub ? pi::stop() : seq(role.body, 0, pi::stop());
    system_.add({constant, std::move(params), body});
    std::vector<std::string> order;
    state_order(role.body, order);
    for (const auto& name : order) system_.add({name, {}, states_.at(name)});
    for (auto& def : buffers_) system_.add(std::move(def));
  }

 private:
  // Translation of nodes[i..] followed by `tail` when control falls off the end.
  Term seq(const rad::NodeList& nodes, std::size_t i, const Term& tail) {
    if (i == nodes.size()) return tail;
    const rad::Node& n = nodes[i];

    if (const auto* s = n.as<rad::StateMark>()) {
      if (!states_.count(s->name)) states_[s->name] = seq(nodes, i + 1, tail);
      return pi::call(s->name);
    }
    if (const auto* c = n.as<rad::Case>()) return compile_case(n, *c, seq(nodes, i + 1, tail));
    if (const auto* p = n.as<rad::Part>()) return compile_part(*p, seq(nodes, i + 1, tail));
    if (const auto* l = n.as<rad::LoopBack>()) return pi::call(l->target);
    if (n.as<rad::Stop>()) return pi::stop();
    if (n.as<rad::Goal>()) return pi::done();

    Term rest = seq(nodes, i + 1, tail);
    if (const auto* a = n.as<rad::Activity>()) {
      std::string label = a->kind == rad::ActivityKind::manual ? "manual:" + a->name : a->name;
      return pi::internal(std::move(label), rest);
    }
    if (const auto* e = n.as<rad::ExternalEvent>()) {
      std::string chan = symbols_.environment_channel.at(role_->name);
      used_env_.insert(chan);
      return pi::input(pi::Channel::plain(chan), {e->name}, rest);
    }
    if (const auto* ip = n.as<rad::InteractionPoint>()) return compile_interaction(*ip, rest);
    throw std::logic_error("unhandled node");
  }

  Term compile_interaction(const rad::InteractionPoint& ip, const Term& rest) {
    const rad::InteractionDecl& d = *model_.find_interaction(ip.interaction);
    const pi::Channel& port = symbols_.interaction_port.at(d.id);

    if (ip.side == rad::Side::responder) {
      if (!d.two_way) return pi::input(port, d.payload, rest);
      Term reply = pi::output(port, d.reply_payload, rest);
      return pi::input(port, d.payload, seq(ip.before_reply, 0, reply));
    }
    if (d.two_way) return pi::output(port, d.payload, pi::input(port, d.reply_payload, rest));

    if (d.mode == rad::Mode::async) {
      std::string buf = "Buf_" + d.id;
      bool known = system_.find(buf) ||
                   std::any_of(buffers_.begin(), buffers_.end(), [&](const pi::Definition& b) { return b.name == buf; });
      if (!known) {
        Term out = pi::stop();
        for (std::size_t k = 0; k < d.responders.size(); ++k) out = pi::output(port, d.payload, out);
        buffers_.push_back({buf, d.payload, out});
      }
      return pi::par({pi::call(buf, d.payload), rest});
    }
    // One message per responder on the shared multi-party port.
    Term out = rest;
    for (std::size_t k = 0; k < d.responders.size(); ++k) out = pi::output(port, d.payload, out);
    return out;
  }

  Term compile_case(const rad::Node& node, const rad::Case& c, const Term& after) {
    Term chain;
    if (c.otherwise) {
      chain = seq(*c.otherwise, 0, after);
    } else {
      chain = pi::stop();
      warnings_.push_back(make_warning(codes::case_default,
                                       "case on '" + c.scrutinee + "' in role '" + role_->name +
                                           "' has no else branch; unmatched values stop the role",
                                       node.span));
    }
    for (auto it = c.branches.rbegin(); it != c.branches.rend(); ++it)
      chain = pi::match(c.scrutinee, it->value, seq(it->body, 0, after), chain);
    return chain;
  }

  // Threads are built against reserved placeholders; the final join names
  // avoid every free name of the result and every earlier part of the role.
  Term compile_part(const rad::Part& p, const Term& after) {
    std::vector<std::string> placeholders;
    for (std::size_t k = 0; k < p.threads.size(); ++k) placeholders.push_back("%join" + std::to_string(next_placeholder_++));
    Term cont = after;
    for (auto it = placeholders.rbegin(); it != placeholders.rend(); ++it)
      cont = pi::input(pi::Channel::plain(*it), {}, cont);
    std::vector<Term> threads;
    for (std::size_t k = 0; k < p.threads.size(); ++k)
      threads.push_back(seq(p.threads[k], 0, pi::output(pi::Channel::plain(placeholders[k]), {}, pi::stop())));
    threads.push_back(cont);
    Term body = pi::par(std::move(threads));
    auto used = pi::free_names(body);
    pi::NameMap rename;
    std::vector<std::string> joins;
    for (const auto& ph : placeholders) {
      std::string name;
      do name = "join" + std::to_string(next_join_++);
      while (used.count(name));
      rename[ph] = name;
      joins.push_back(name);
    }
    return pi::restrict(joins, pi::substitute(body, rename));
  }

  static void state_order(const rad::NodeList& nodes, std::vector<std::string>& out) {
    for (const auto& n : nodes) {
      if (const auto* s = n.as<rad::StateMark>()) out.push_back(s->name);
      if (const auto* c = n.as<rad::Case>()) {
        for (const auto& b : c->branches) state_order(b.body, out);
        if (c->otherwise) state_order(*c->otherwise, out);
      }
    }
  }

  const rad::RadModel& model_;
  const SymbolTable& symbols_;
  pi::PiSystem& system_;
  std::vector<Diagnostic>& warnings_;
  std::set<std::string>& used_env_;
  const rad::Role* role_ = nullptr;
  std::map<std::string, Term> states_;
  std::size_t next_join_ = 1;
  std::size_t next_placeholder_ = 0;
  std::vector<pi::Definition> buffers_;
};

void collect_literals(const rad::NodeList& nodes, std::set<std::string>& out) {
  for (const auto& n : nodes) {
    if (const auto* c = n.as<rad::Case>()) {
      for (const auto& b : c->branches) {
        out.insert(b.value);
        collect_literals(b.body, out);
      }
      if (c->otherwise) collect_literals(*c->otherwise, out);
    } else if (const auto* p = n.as<rad::Part>()) {
      for (const auto& t : p->threads) collect_literals(t, out);
    }
  }
}

}  // namespace

Translation translate_model(const rad::RadModel& model) {
  auto diags = validate(model);
  if (has_errors(diags)) throw TranslationError(std::move(diags));

  Translation t;
  t.symbols = build_symbols(model);
  pi::PiSystem& sys = t.system;
  sys.name = model.name;

  std::set<std::string> stub_roles;
  for (const auto& r : model.roles)
    if (r.stub) stub_roles.insert(r.name);

  for (const auto& d : model.interactions) {
    const pi::Channel& port = t.symbols.interaction_port.at(d.id);
    sys.ports.push_back(port);
    bool touches_stub = stub_roles.count(d.initiator) > 0;
    for (const auto& r : d.responders) touches_stub = touches_stub || stub_roles.count(r) > 0;
    if (touches_stub) sys.open_channels.insert(port);
    sys.globals.insert(d.payload.begin(), d.payload.end());
    sys.globals.insert(d.reply_payload.begin(), d.reply_payload.end());
  }

  std::set<std::string> used_env;
  std::vector<Term> main;
  for (const auto& role : model.roles) {
    const std::string& constant = t.symbols.role_constant.at(role.name);
    collect_literals(role.body, sys.globals);

    RoleCompiler rc(model, t.symbols, sys, t.warnings, used_env);
    bool indexed = role.cardinality.kind == rad::CardinalityKind::fixed;
    rc.compile(role, constant, indexed ? std::vector<std::string>{"inst"} : std::vector<std::string>{});

    switch (role.cardinality.kind) {
      case rad::CardinalityKind::one:
        main.push_back(pi::call(constant));
        break;
      case rad::CardinalityKind::fixed:
        for (int k = 1; k <= role.cardinality.count; ++k) {
          sys.globals.insert(std::to_string(k));
          main.push_back(pi::call(constant, {std::to_string(k)}));
        }
        break;
      case rad::CardinalityKind::unbounded: {
        std::string spawner = constant + "_spawn";
        pi::Channel chan = pi::Channel::plain(spawn_channel(role.name));
        sys.open_channels.insert(chan);
        sys.globals.insert(chan.name());
        sys.add({spawner, {}, pi::input(chan, {}, pi::par({pi::call(constant), pi::call(spawner)}))});
        main.push_back(pi::call(spawner));
        break;
      }
    }
  }
  for (const auto& e : used_env) {
    sys.open_channels.insert(pi::Channel::plain(e));
    sys.globals.insert(e);
  }
  sys.main = pi::par(std::move(main));
  std::stable_sort(t.warnings.begin(), t.warnings.end(), [](const Diagnostic& a, const Diagnostic& b) {
    return std::tie(a.span.line, a.span.column) < std::tie(b.span.line, b.span.column);
  });

  auto problems = pi::check_system(sys);
  if (!problems.empty()) throw std::logic_error("translation produced an ill-formed system: " + problems.front());
  return t;
}

}  // namespace radpi::translate
