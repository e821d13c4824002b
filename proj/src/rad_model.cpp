#include "radpi/rad_model.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <iterator>
#include <optional>
#include <set>

namespace radpi::rad {

const Role* RadModel::find_role(std::string_view name) const {
  for (const auto& r : roles)
    if (r.name == name) return &r;
  return nullptr;
}

const InteractionDecl* RadModel::find_interaction(std::string_view id) const {
  for (const auto& i : interactions)
    if (i.id == id) return &i;
  return nullptr;
}

bool starts_lower(std::string_view s) {
  return !s.empty() && (std::islower(static_cast<unsigned char>(s[0])) || s[0] == '_');
}

bool starts_upper(std::string_view s) {
  return !s.empty() && std::isupper(static_cast<unsigned char>(s[0]));
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto c0 = static_cast<unsigned char>(s[0]);
  if (!std::isalpha(c0) && c0 != '_') return false;
  return std::all_of(s.begin() + 1, s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

bool is_value_literal(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

std::vector<std::string> received_fields(const InteractionDecl& decl, Side side) {
  if (side == Side::responder) return decl.payload;
  if (decl.two_way) return decl.reply_payload;
  return {};
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_terminal(const Node& n) {
  return n.as<Stop>() || n.as<LoopBack>() || n.as<Goal>();
}

class Validator {
 public:
  explicit Validator(const RadModel& model) : model_(model) {}

  std::vector<Diagnostic> run() {
    if (model_.roles.empty()) error(codes::empty_model, "model has no roles", model_.span);
    check_roles();
    check_interactions();
    collect_state_names();
    for (const auto& role : model_.roles) check_body(role);
    return std::move(diags_);
  }

 private:
  struct Walk {
    const Role* role = nullptr;
    std::set<std::string> scope;
    std::set<std::string> unguarded;  // states reachable without an observable step since
    bool in_part = false;
  };

  void error(std::string_view code, std::string msg, const SourceSpan& span) {
    diags_.push_back(make_error(code, std::move(msg), span));
  }
  void warning(std::string_view code, std::string msg, const SourceSpan& span) {
    diags_.push_back(make_warning(code, std::move(msg), span));
  }

  void check_roles() {
    std::set<std::string> names, symbols, ports;
    for (const auto& role : model_.roles) {
      if (!names.insert(lower(role.name)).second)
        error(codes::duplicate, "duplicate role '" + role.name + "' (role names are case-insensitive)",
              role.span);
      if (!starts_lower(role.name))
        error(codes::rule10, "role name '" + role.name + "' must start with a lower-case letter",
              role.span);
      if (role.symbol) {
        if (!starts_upper(*role.symbol) || !is_identifier(*role.symbol))
          error(codes::rule9, "role symbol '" + *role.symbol + "' must start with an upper-case letter",
                role.span);
        if (!symbols.insert(*role.symbol).second)
          error(codes::rule1, "role symbol '" + *role.symbol + "' is used by more than one role",
                role.span);
      }
      if (role.port_prefix) {
        if (!starts_lower(*role.port_prefix) || !is_identifier(*role.port_prefix))
          error(codes::rule4, "port prefix '" + *role.port_prefix + "' must start with a lower-case letter",
                role.span);
        if (!ports.insert(*role.port_prefix).second)
          error(codes::rule4, "port prefix '" + *role.port_prefix + "' is used by more than one role",
                role.span);
      }
      if (role.cardinality.kind == CardinalityKind::fixed && role.cardinality.count < 1)
        error(codes::rule11, "role '" + role.name + "' must have at least one instance", role.span);
      if (role.stub) {
        if (!role.body.empty())
          error(codes::stub, "stub role '" + role.name + "' must have an empty body", role.span);
        warning(codes::stub, "role '" + role.name + "' is a stub and translates to stop()", role.span);
      } else if (role.body.empty()) {
        error(codes::empty_role, "role '" + role.name + "' has an empty body (declare it 'stub')",
              role.span);
      }
    }
  }

  void check_interactions() {
    std::set<std::string> ids;
    for (const auto& decl : model_.interactions) {
      if (!ids.insert(decl.id).second)
        error(codes::duplicate, "duplicate interaction '" + decl.id + "'", decl.span);
      if (!model_.find_role(decl.initiator))
        error(codes::unknown_ref, "interaction '" + decl.id + "' names unknown initiator '" +
                                      decl.initiator + "'",
              decl.span);
      if (decl.responders.empty())
        error(codes::interaction, "interaction '" + decl.id + "' has no responders", decl.span);
      std::set<std::string> seen;
      for (const auto& r : decl.responders) {
        if (!model_.find_role(r))
          error(codes::unknown_ref, "interaction '" + decl.id + "' names unknown responder '" + r + "'",
                decl.span);
        if (r == decl.initiator)
          error(codes::interaction, "interaction '" + decl.id + "': initiator cannot also respond",
                decl.span);
        if (!seen.insert(r).second)
          error(codes::interaction, "interaction '" + decl.id + "' lists responder '" + r + "' twice",
                decl.span);
      }
      if (!decl.two_way && !decl.reply_payload.empty())
        error(codes::interaction, "interaction '" + decl.id + "' has a reply but is not two_way",
              decl.span);
      if (decl.mode == Mode::async && decl.two_way)
        error(codes::rule3, "interaction '" + decl.id + "' cannot be both async and two_way", decl.span);
      if (decl.two_way && decl.responders.size() != 1)
        error(codes::rule5, "two-way interaction '" + decl.id + "' must have exactly one responder",
              decl.span);
      check_fields(decl, decl.payload, "payload");
      check_fields(decl, decl.reply_payload, "reply");
    }
  }

  void check_fields(const InteractionDecl& decl, const std::vector<std::string>& fields,
                    const char* what) {
    std::set<std::string> seen;
    for (const auto& f : fields) {
      if (!starts_lower(f) || !is_identifier(f))
        error(codes::interaction, std::string(what) + " field '" + f + "' of '" + decl.id +
                                      "' must be a lower-case identifier",
              decl.span);
      if (!seen.insert(f).second)
        error(codes::interaction, std::string(what) + " of '" + decl.id + "' repeats field '" + f + "'",
              decl.span);
    }
  }

  void collect_state_names() {
    std::set<std::string> symbols;
    for (const auto& role : model_.roles)
      if (role.symbol) symbols.insert(*role.symbol);
    for (const auto& role : model_.roles) collect_states(role.body, symbols);
  }

  void collect_states(const NodeList& nodes, const std::set<std::string>& symbols) {
    for (const auto& n : nodes) {
      if (const auto* s = n.as<StateMark>()) {
        if (!state_names_.insert(s->name).second)
          error(codes::duplicate, "state '" + s->name + "' is declared more than once", n.span);
        if (symbols.count(s->name))
          error(codes::rule1, "state '" + s->name + "' clashes with a role symbol", n.span);
      } else if (const auto* c = n.as<Case>()) {
        for (const auto& b : c->branches) collect_states(b.body, symbols);
        if (c->otherwise) collect_states(*c->otherwise, symbols);
      } else if (const auto* p = n.as<Part>()) {
        for (const auto& t : p->threads) collect_states(t, symbols);
      }
    }
  }

  void check_body(const Role& role) {
    seen_states_.clear();
    Walk w;
    w.role = &role;
    check_list(role.body, w);
  }

  // Returns false when control cannot fall off the end of the list.
  bool check_list(const NodeList& nodes, Walk& w) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const Node& n = nodes[i];
      bool falls_through = check_node(n, w);
      if (!falls_through) {
        if (i + 1 < nodes.size())
          error(codes::unreachable, "nodes after a terminal node are unreachable", nodes[i + 1].span);
        return false;
      }
    }
    return true;
  }

  bool check_node(const Node& n, Walk& w) {
    if (is_terminal(n)) {
      check_leaf(n, w);
      return false;
    }
    if (const auto* c = n.as<Case>()) return check_case(n, *c, w);
    check_leaf(n, w);
    return true;
  }

  void check_leaf(const Node& n, Walk& w) {
    if (n.as<Activity>() || n.as<InteractionPoint>() || n.as<ExternalEvent>() || n.as<Part>()) w.unguarded.clear();
    if (const auto* a = n.as<Activity>()) {
      if (!starts_lower(a->name))
        error(codes::rule10, "activity '" + a->name + "' must start with a lower-case letter", n.span);
      if (a->kind == ActivityKind::manual)
        warning(codes::manual, "activity '" + a->name + "' is manual and is excluded from services",
                n.span);
    } else if (const auto* ip = n.as<InteractionPoint>()) {
      check_interaction_point(n, *ip, w);
    } else if (const auto* s = n.as<StateMark>()) {
      if (!starts_upper(s->name))
        error(codes::rule9, "state '" + s->name + "' must start with an upper-case letter", n.span);
      if (w.in_part) error(codes::part, "state marks are not allowed inside part threads", n.span);
      seen_states_.insert(s->name);
      w.scope.clear();
      w.unguarded.insert(s->name);
    } else if (const auto* e = n.as<ExternalEvent>()) {
      if (!starts_lower(e->name))
        error(codes::rule10, "external event '" + e->name + "' must start with a lower-case letter",
              n.span);
      w.scope.insert(e->name);
    } else if (const auto* p = n.as<Part>()) {
      if (p->threads.size() < 2) error(codes::part, "part needs at least two threads", n.span);
      for (const auto& t : p->threads) {
        Walk inner = w;
        inner.in_part = true;
        check_list(t, inner);
      }
    } else if (const auto* l = n.as<LoopBack>()) {
      if (w.in_part) error(codes::part, "goto is not allowed inside part threads", n.span);
      else if (!seen_states_.count(l->target))
        error(codes::loop, "goto '" + l->target + "' must target a state declared earlier in role '" +
                               w.role->name + "'",
              n.span);
      else if (w.unguarded.count(l->target))
        error(codes::loop, "goto '" + l->target + "' loops without any step since the state", n.span);
    } else if (const auto* g = n.as<Goal>()) {
      if (!starts_upper(g->name))
        error(codes::rule9, "goal '" + g->name + "' must start with an upper-case letter", n.span);
    }
  }

  void check_interaction_point(const Node& n, const InteractionPoint& ip, Walk& w) {
    const auto* decl = model_.find_interaction(ip.interaction);
    if (!decl) {
      error(codes::unknown_ref, "unknown interaction '" + ip.interaction + "'", n.span);
      return;
    }
    const auto& role = w.role->name;
    if (ip.side == Side::initiator && decl->initiator != role)
      error(codes::interact_side, "role '" + role + "' is not the initiator of '" + decl->id + "'",
            n.span);
    if (ip.side == Side::responder &&
        std::find(decl->responders.begin(), decl->responders.end(), role) == decl->responders.end())
      error(codes::interact_side, "role '" + role + "' is not a responder of '" + decl->id + "'",
            n.span);
    if (!ip.before_reply.empty()) {
      if (ip.side != Side::responder || !decl->two_way)
        error(codes::interact_side,
              "only the responder of a two-way interaction may run steps before replying", n.span);
      for (const auto& inner : ip.before_reply) {
        if (!inner.as<Activity>() && !inner.as<ExternalEvent>()) {
          error(codes::interact_side, "only activities and events may run before a reply", inner.span);
          continue;
        }
      }
    }
    for (const auto& f : received_fields(*decl, ip.side)) w.scope.insert(f);
    for (const auto& inner : ip.before_reply) check_node(inner, w);
  }

  // Scope after the case is what every falling-through branch has bound.
  bool check_case(const Node& n, const Case& c, Walk& w) {
    std::size_t outcomes = c.branches.size() + (c.otherwise ? 1 : 0);
    if (outcomes < 2) error(codes::case_shape, "case needs at least two outcomes", n.span);
    if (!w.scope.count(c.scrutinee))
      error(codes::scope, "case on '" + c.scrutinee + "' which is not received earlier in this state",
            n.span);
    std::set<std::string> values;
    std::optional<std::set<std::string>> exit_scope;
    std::set<std::string> exit_unguarded;
    auto merge = [&](const Walk& inner) {
      exit_unguarded.insert(inner.unguarded.begin(), inner.unguarded.end());
      if (!exit_scope) {
        exit_scope = inner.scope;
        return;
      }
      std::set<std::string> both;
      std::set_intersection(exit_scope->begin(), exit_scope->end(), inner.scope.begin(),
                            inner.scope.end(), std::inserter(both, both.begin()));
      exit_scope = std::move(both);
    };
    for (const auto& b : c.branches) {
      if (!is_value_literal(b.value))
        error(codes::case_shape, "case value \"" + b.value + "\" is not a valid name", n.span);
      if (!values.insert(b.value).second)
        error(codes::case_shape, "case value \"" + b.value + "\" repeated", n.span);
      Walk inner = w;
      if (check_list(b.body, inner)) merge(inner);
    }
    if (c.otherwise) {
      Walk inner = w;
      if (check_list(*c.otherwise, inner)) merge(inner);
    }
    if (!exit_scope) return false;
    w.scope = std::move(*exit_scope);
    w.unguarded = std::move(exit_unguarded);
    return true;
  }

  const RadModel& model_;
  std::vector<Diagnostic> diags_;
  std::set<std::string> state_names_;
  std::set<std::string> seen_states_;
};

}  // namespace

std::vector<Diagnostic> validate(const RadModel& model) { return Validator(model).run(); }

}  // namespace radpi::rad
