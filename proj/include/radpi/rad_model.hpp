#pragma once

// In-memory Role Activity Diagram model. Built by the parser, consumed by
// the translator and the manifest emitter. All types are plain values.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "radpi/diagnostic.hpp"

namespace radpi::rad {

enum class ActivityKind { internal, encapsulated, manual };
enum class Side { initiator, responder };
enum class Mode { sync, async };

struct Node;
using NodeList = std::vector<Node>;

struct Activity {
  std::string name;
  ActivityKind kind = ActivityKind::internal;
  bool operator==(const Activity&) const = default;
};

struct InteractionPoint {
  std::string interaction;
  Side side = Side::initiator;
  // Responder side of a two-way interaction only: work done between
  // receiving the request and sending the reply (activities and events).
  NodeList before_reply;
  bool operator==(const InteractionPoint&) const = default;
};

struct StateMark {
  std::string name;
  bool operator==(const StateMark&) const = default;
};

struct ExternalEvent {
  std::string name;
  bool operator==(const ExternalEvent&) const = default;
};

struct CaseBranch {
  std::string value;
  NodeList body;
  bool operator==(const CaseBranch&) const = default;
};

struct Case {
  std::string scrutinee;
  std::vector<CaseBranch> branches;
  std::optional<NodeList> otherwise;
  bool operator==(const Case&) const = default;
};

struct Part {
  std::vector<NodeList> threads;
  bool operator==(const Part&) const = default;
};

struct LoopBack {
  std::string target;
  bool operator==(const LoopBack&) const = default;
};

struct Stop {
  bool operator==(const Stop&) const = default;
};

struct Goal {
  std::string name;
  bool operator==(const Goal&) const = default;
};

struct Node {
  using Value =
      std::variant<Activity, InteractionPoint, StateMark, ExternalEvent, Case, Part, LoopBack, Stop, Goal>;

  Value value;
  SourceSpan span;

  Node() = default;
  template <class T>
  Node(T v, SourceSpan s = {}) : value(std::move(v)), span(std::move(s)) {}

  template <class T>
  const T* as() const {
    return std::get_if<T>(&value);
  }

  // Spans do not take part in structural equality.
  bool operator==(const Node& other) const { return value == other.value; }
};

enum class CardinalityKind { one, fixed, unbounded };

struct Cardinality {
  CardinalityKind kind = CardinalityKind::one;
  int count = 1;
  bool operator==(const Cardinality&) const = default;
};

struct Role {
  std::string name;
  std::optional<std::string> symbol;       // process constant override ("as Resr")
  std::optional<std::string> port_prefix;  // port participant override ("port res")
  Cardinality cardinality;
  bool stub = false;
  NodeList body;
  SourceSpan span;

  bool operator==(const Role& o) const {
    return name == o.name && symbol == o.symbol && port_prefix == o.port_prefix &&
           cardinality == o.cardinality && stub == o.stub && body == o.body;
  }
};

struct InteractionDecl {
  std::string id;
  std::string initiator;
  std::vector<std::string> responders;
  Mode mode = Mode::sync;
  bool two_way = false;
  std::vector<std::string> payload;
  std::vector<std::string> reply_payload;
  SourceSpan span;

  bool operator==(const InteractionDecl& o) const {
    return id == o.id && initiator == o.initiator && responders == o.responders && mode == o.mode &&
           two_way == o.two_way && payload == o.payload && reply_payload == o.reply_payload;
  }
};

struct RadModel {
  std::string name;
  std::vector<Role> roles;
  std::vector<InteractionDecl> interactions;
  SourceSpan span;

  const Role* find_role(std::string_view name) const;
  const InteractionDecl* find_interaction(std::string_view id) const;

  bool operator==(const RadModel& o) const {
    return name == o.name && roles == o.roles && interactions == o.interactions;
  }
};

/// Checks every well-formedness rule of the model. Never throws; an empty
/// result means the model is translatable. Warnings are emitted for stub
/// roles and manual activities.
std::vector<Diagnostic> validate(const RadModel& model);

// Naming predicates shared with the parser and translator.
bool starts_lower(std::string_view s);
bool starts_upper(std::string_view s);
bool is_identifier(std::string_view s);
bool is_value_literal(std::string_view s);

// Names received by an interaction point: payload for a responder, reply
// payload for the initiator of a two-way interaction.
std::vector<std::string> received_fields(const InteractionDecl& decl, Side side);

}  // namespace radpi::rad
