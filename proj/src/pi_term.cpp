#include "radpi/pi_term.hpp"

#include <algorithm>
#include <stdexcept>

namespace radpi::pi {

Channel Channel::port(std::vector<std::string> participants, bool two_way) {
  return Channel{Kind::port, std::move(participants), two_way};
}

Channel Channel::plain(std::string name) { return Channel{Kind::plain, {std::move(name)}, false}; }

std::string Channel::str() const {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += '/';
    out += parts[i];
  }
  if (two_way) out += '*';
  return out;
}

Channel Channel::parse(std::string_view text) {
  bool two_way = !text.empty() && text.back() == '*';
  if (two_way) text.remove_suffix(1);
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto slash = text.find('/', start);
    parts.emplace_back(text.substr(start, slash - start));
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }
  for (const auto& p : parts)
    if (p.empty()) throw std::invalid_argument("malformed channel '" + std::string(text) + "'");
  if (parts.size() == 1 && !two_way) return plain(std::move(parts.front()));
  if (parts.size() == 1) throw std::invalid_argument("a two-way channel needs two participants");
  return port(std::move(parts), two_way);
}

namespace {
const std::shared_ptr<const TermData>& stop_node() {
  static const auto node = std::make_shared<const TermData>(TermData{Stop{}});
  return node;
}
}  // namespace

Term::Term() : data_(stop_node()) {}

Term::Term(TermData data) : data_(std::make_shared<const TermData>(std::move(data))) {}

bool Term::operator==(const Term& other) const {
  return data_ == other.data_ || data_->value == other.data_->value;
}

Term stop() { return Term(); }
Term done() { return Term(TermData{Done{}}); }

Term internal(std::string label, Term cont) {
  return Term(TermData{Internal{std::move(label), std::move(cont)}});
}

Term output(Channel chan, std::vector<std::string> payload, Term cont) {
  return Term(TermData{Output{std::move(chan), std::move(payload), std::move(cont)}});
}

Term input(Channel chan, std::vector<std::string> binders, Term cont) {
  return Term(TermData{Input{std::move(chan), std::move(binders), std::move(cont)}});
}

Term par(std::vector<Term> terms) {
  std::vector<Term> flat;
  for (auto& t : terms) {
    if (const auto* p = t.as<Par>()) flat.insert(flat.end(), p->terms.begin(), p->terms.end());
    else flat.push_back(std::move(t));
  }
  if (flat.empty()) return stop();
  if (flat.size() == 1) return flat.front();
  return Term(TermData{Par{std::move(flat)}});
}

Term sum(std::vector<Term> branches) {
  std::vector<Term> flat;
  for (auto& t : branches) {
    if (const auto* s = t.as<Sum>()) flat.insert(flat.end(), s->branches.begin(), s->branches.end());
    else flat.push_back(std::move(t));
  }
  if (flat.empty()) return stop();
  if (flat.size() == 1) return flat.front();
  return Term(TermData{Sum{std::move(flat)}});
}

Term match(std::string left, std::string right, Term then, Term otherwise) {
  return Term(TermData{Match{std::move(left), std::move(right), std::move(then), std::move(otherwise)}});
}

Term restrict(std::vector<std::string> names, Term body) {
  if (names.empty()) return body;
  return Term(TermData{New{std::move(names), std::move(body)}});
}

Term call(std::string constant, std::vector<std::string> args) {
  return Term(TermData{Call{std::move(constant), std::move(args)}});
}

namespace {

void names_key(std::string& out, const std::vector<std::string>& names) {
  out += '[';
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ' ';
    out += names[i];
  }
  out += ']';
}

void key_into(std::string& out, const Term& t) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Stop>) {
          out += "0";
        } else if constexpr (std::is_same_v<T, Done>) {
          out += "D";
        } else if constexpr (std::is_same_v<T, Internal>) {
          out += "(t " + n.label + ' ';
          key_into(out, n.cont);
          out += ')';
        } else if constexpr (std::is_same_v<T, Output>) {
          out += "(o " + n.chan.str() + ' ';
          names_key(out, n.payload);
          out += ' ';
          key_into(out, n.cont);
          out += ')';
        } else if constexpr (std::is_same_v<T, Input>) {
          out += "(i " + n.chan.str() + ' ';
          names_key(out, n.binders);
          out += ' ';
          key_into(out, n.cont);
          out += ')';
        } else if constexpr (std::is_same_v<T, Par>) {
          out += "(|";
          for (const auto& c : n.terms) {
            out += ' ';
            key_into(out, c);
          }
          out += ')';
        } else if constexpr (std::is_same_v<T, Sum>) {
          out += "(+";
          for (const auto& c : n.branches) {
            out += ' ';
            key_into(out, c);
          }
          out += ')';
        } else if constexpr (std::is_same_v<T, Match>) {
          out += "(m " + n.left + ' ' + n.right + ' ';
          key_into(out, n.then);
          out += ' ';
          key_into(out, n.otherwise);
          out += ')';
        } else if constexpr (std::is_same_v<T, New>) {
          out += "(n ";
          names_key(out, n.names);
          out += ' ';
          key_into(out, n.body);
          out += ')';
        } else if constexpr (std::is_same_v<T, Call>) {
          out += "(c " + n.constant + ' ';
          names_key(out, n.args);
          out += ')';
        }
      },
      t.data().value);
}

template <class F>
std::size_t fold_children(const Term& t, F&& f) {
  return std::visit(
      [&](const auto& n) -> std::size_t {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Internal> || std::is_same_v<T, Output> ||
                      std::is_same_v<T, Input>) {
          return f(n.cont);
        } else if constexpr (std::is_same_v<T, Par>) {
          std::size_t acc = 0;
          for (const auto& c : n.terms) acc = std::max(acc, f(c));
          return acc;
        } else if constexpr (std::is_same_v<T, Sum>) {
          std::size_t acc = 0;
          for (const auto& c : n.branches) acc = std::max(acc, f(c));
          return acc;
        } else if constexpr (std::is_same_v<T, Match>) {
          return std::max(f(n.then), f(n.otherwise));
        } else if constexpr (std::is_same_v<T, New>) {
          return f(n.body);
        } else {
          return 0;
        }
      },
      t.data().value);
}

}  // namespace

std::string key(const Term& t) {
  std::string out;
  key_into(out, t);
  return out;
}

std::size_t depth(const Term& t) {
  return 1 + fold_children(t, [](const Term& c) { return depth(c); });
}

std::size_t size(const Term& t) {
  std::size_t total = 1;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Internal> || std::is_same_v<T, Output> ||
                      std::is_same_v<T, Input>) {
          total += size(n.cont);
        } else if constexpr (std::is_same_v<T, Par>) {
          for (const auto& c : n.terms) total += size(c);
        } else if constexpr (std::is_same_v<T, Sum>) {
          for (const auto& c : n.branches) total += size(c);
        } else if constexpr (std::is_same_v<T, Match>) {
          total += size(n.then) + size(n.otherwise);
        } else if constexpr (std::is_same_v<T, New>) {
          total += size(n.body);
        }
      },
      t.data().value);
  return total;
}

}  // namespace radpi::pi
