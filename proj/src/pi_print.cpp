#include "radpi/pi_print.hpp"

namespace radpi::pi {

namespace {

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ", ";
    out += names[i];
  }
  return out;
}

void print(std::string& out, const Term& t);

// Continuation after a prefix: a bare Par would bind looser than '.'.
void print_cont(std::string& out, const Term& t) {
  out += '.';
  if (t.is<Par>()) {
    out += '(';
    print(out, t);
    out += ')';
  } else {
    print(out, t);
  }
}

void print_block(std::string& out, const Term& t) {
  out += " {";
  print(out, t);
  out += '}';
}

void print(std::string& out, const Term& t) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Stop>) {
          out += "stop()";
        } else if constexpr (std::is_same_v<T, Done>) {
          out += "done()";
        } else if constexpr (std::is_same_v<T, Internal>) {
          out += n.label + "()";
          print_cont(out, n.cont);
        } else if constexpr (std::is_same_v<T, Output>) {
          out += n.chan.str() + '<' + join(n.payload) + '>';
          print_cont(out, n.cont);
        } else if constexpr (std::is_same_v<T, Input>) {
          if (n.binders.empty()) out += n.chan.str() + "?()";
          else out += n.chan.str() + '(' + join(n.binders) + ')';
          print_cont(out, n.cont);
        } else if constexpr (std::is_same_v<T, Par>) {
          for (std::size_t i = 0; i < n.terms.size(); ++i) {
            if (i) out += " || ";
            print(out, n.terms[i]);
          }
        } else if constexpr (std::is_same_v<T, Sum>) {
          for (std::size_t i = 0; i < n.branches.size(); ++i) {
            if (i) out += " + ";
            out += '{';
            print(out, n.branches[i]);
            out += '}';
          }
        } else if constexpr (std::is_same_v<T, Match>) {
          out += "if (" + n.left + " = " + n.right + ")";
          print_block(out, n.then);
          const Term* rest = &n.otherwise;
          while (const auto* m = rest->as<Match>()) {
            out += " elseif (" + m->left + " = " + m->right + ")";
            print_block(out, m->then);
            rest = &m->otherwise;
          }
          out += " else";
          print_block(out, *rest);
        } else if constexpr (std::is_same_v<T, New>) {
          out += "(new " + join(n.names) + ")(";
          print(out, n.body);
          out += ')';
        } else if constexpr (std::is_same_v<T, Call>) {
          out += n.constant;
          if (!n.args.empty()) out += '(' + join(n.args) + ')';
        }
      },
      t.data().value);
}

}  // namespace

std::string pretty(const Term& t) {
  std::string out;
  print(out, t);
  return out;
}

std::string pretty_pi(const PiSystem& system) {
  std::string out = system.name + " = " + pretty(system.main) + "\n";
  if (!system.ports.empty()) {
    out += "# ports: ";
    for (std::size_t i = 0; i < system.ports.size(); ++i) {
      if (i) out += ", ";
      out += system.ports[i].str();
    }
    out += '\n';
  }
  for (const auto& def : system.defs()) {
    out += '\n' + def.name;
    if (!def.params.empty()) out += '(' + join(def.params) + ')';
    out += " = " + pretty(def.body) + "\n";
  }
  return out;
}

}  // namespace radpi::pi
