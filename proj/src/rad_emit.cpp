#include <sstream>

#include "radpi/rad_parser.hpp"

namespace radpi::rad {

namespace {

class Emitter {
 public:
  std::string run(const RadModel& model) {
    out_ << "model \"" << model.name << "\" {\n";
    bool first = true;
    for (const auto& decl : model.interactions) {
      if (!first) out_ << '\n';
      first = false;
      interaction(decl);
    }
    for (const auto& role : model.roles) {
      if (!first) out_ << '\n';
      first = false;
      emit_role(role);
    }
    out_ << "}\n";
    return out_.str();
  }

 private:
  void indent(int depth) {
    for (int i = 0; i < depth; ++i) out_ << "  ";
  }

  void names(const std::vector<std::string>& list) {
    out_ << '[';
    for (std::size_t i = 0; i < list.size(); ++i) out_ << (i ? ", " : "") << list[i];
    out_ << ']';
  }

  void interaction(const InteractionDecl& d) {
    out_ << "  interaction " << d.id << " {\n";
    out_ << "    initiator: " << d.initiator << '\n';
    out_ << "    responders: ";
    names(d.responders);
    out_ << "\n    mode: " << (d.mode == Mode::sync ? "sync" : "async") << (d.two_way ? " two_way" : "")
         << '\n';
    if (!d.payload.empty()) {
      out_ << "    payload: ";
      names(d.payload);
      out_ << '\n';
    }
    if (!d.reply_payload.empty()) {
      out_ << "    reply: ";
      names(d.reply_payload);
      out_ << '\n';
    }
    out_ << "  }\n";
  }

  void emit_role(const Role& r) {
    out_ << "  role " << r.name;
    if (r.symbol) out_ << " as " << *r.symbol;
    if (r.port_prefix) out_ << " port " << *r.port_prefix;
    switch (r.cardinality.kind) {
      case CardinalityKind::one: break;
      case CardinalityKind::fixed: out_ << " instances: " << r.cardinality.count; break;
      case CardinalityKind::unbounded: out_ << " instances: many"; break;
    }
    if (r.stub) out_ << " stub";
    out_ << ' ';
    block(r.body, 1);
    out_ << '\n';
  }

  // Writes "{...}" starting at the current column; the closing brace is
  // indented to `depth`.
  void block(const NodeList& nodes, int depth) {
    if (nodes.empty()) {
      out_ << "{}";
      return;
    }
    out_ << "{\n";
    for (const auto& n : nodes) node(n, depth + 1);
    indent(depth);
    out_ << '}';
  }

  void node(const Node& n, int depth) {
    indent(depth);
    if (const auto* a = n.as<Activity>()) {
      out_ << "activity " << a->name;
      if (a->kind == ActivityKind::encapsulated) out_ << " encapsulated";
      if (a->kind == ActivityKind::manual) out_ << " manual";
    } else if (const auto* ip = n.as<InteractionPoint>()) {
      out_ << "interact " << ip->interaction << (ip->side == Side::initiator ? " initiate" : " respond");
      if (!ip->before_reply.empty()) {
        out_ << ' ';
        block(ip->before_reply, depth);
      }
    } else if (const auto* s = n.as<StateMark>()) {
      out_ << "state " << s->name;
    } else if (const auto* e = n.as<ExternalEvent>()) {
      out_ << "event " << e->name;
    } else if (const auto* c = n.as<Case>()) {
      out_ << "case " << c->scrutinee << " {\n";
      for (const auto& b : c->branches) {
        indent(depth + 1);
        out_ << "when \"" << b.value << "\" ";
        block(b.body, depth + 1);
        out_ << '\n';
      }
      if (c->otherwise) {
        indent(depth + 1);
        out_ << "else ";
        block(*c->otherwise, depth + 1);
        out_ << '\n';
      }
      indent(depth);
      out_ << '}';
    } else if (const auto* p = n.as<Part>()) {
      out_ << "part {\n";
      for (const auto& t : p->threads) {
        indent(depth + 1);
        out_ << "thread ";
        block(t, depth + 1);
        out_ << '\n';
      }
      indent(depth);
      out_ << '}';
    } else if (const auto* l = n.as<LoopBack>()) {
      out_ << "goto " << l->target;
    } else if (n.as<Stop>()) {
      out_ << "stop";
    } else if (const auto* g = n.as<Goal>()) {
      out_ << "goal " << g->name;
    }
    out_ << '\n';
  }

  std::ostringstream out_;
};

}  // namespace

std::string emit_rad(const RadModel& model) { return Emitter().run(model); }

}  // namespace radpi::rad
