#pragma once

// Immutable Pi-Calculus terms. A Term is a cheap handle to shared,
// never-mutated node data, so terms can be passed by value and shared
// between exploration workers.

#include <compare>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace radpi::pi {

/// A channel is either an interaction port ("a/b", "a/b*", "a/b/c") or a
/// plain name. Ports are global constants and are never substituted.
struct Channel {
  enum class Kind { port, plain };

  Kind kind = Kind::plain;
  std::vector<std::string> parts;  // port participants (initiator first) or the single plain name
  bool two_way = false;

  static Channel port(std::vector<std::string> participants, bool two_way = false);
  static Channel plain(std::string name);
  /// Inverse of str(): "a/b*" is a two-way port, a name without '/' is plain.
  static Channel parse(std::string_view text);

  bool is_port() const { return kind == Kind::port; }
  const std::string& name() const { return parts.front(); }
  std::string str() const;

  auto operator<=>(const Channel&) const = default;
  bool operator==(const Channel&) const = default;
};

struct TermData;

class Term {
 public:
  Term();  // stop()
  explicit Term(TermData data);

  const TermData& data() const { return *data_; }

  template <class T>
  const T* as() const;

  template <class T>
  bool is() const {
    return as<T>() != nullptr;
  }

  bool operator==(const Term& other) const;

 private:
  std::shared_ptr<const TermData> data_;
};

struct Stop {
  bool operator==(const Stop&) const = default;
};
struct Done {
  bool operator==(const Done&) const = default;
};
struct Internal {
  std::string label;
  Term cont;
  bool operator==(const Internal&) const = default;
};
struct Output {
  Channel chan;
  std::vector<std::string> payload;
  Term cont;
  bool operator==(const Output&) const = default;
};
struct Input {
  Channel chan;
  std::vector<std::string> binders;
  Term cont;
  bool operator==(const Input&) const = default;
};
struct Par {
  std::vector<Term> terms;
  bool operator==(const Par&) const = default;
};
struct Sum {
  std::vector<Term> branches;
  bool operator==(const Sum&) const = default;
};
struct Match {
  std::string left;
  std::string right;
  Term then;
  Term otherwise;
  bool operator==(const Match&) const = default;
};
struct New {
  std::vector<std::string> names;
  Term body;
  bool operator==(const New&) const = default;
};
struct Call {
  std::string constant;
  std::vector<std::string> args;
  bool operator==(const Call&) const = default;
};

struct TermData {
  std::variant<Stop, Done, Internal, Output, Input, Par, Sum, Match, New, Call> value;
};

template <class T>
const T* Term::as() const {
  return std::get_if<T>(&data_->value);
}

// Smart constructors. par/sum flatten nested Par/Sum children and collapse
// zero or one operand; they do not drop stop() (that is normalize's job).
Term stop();
Term done();
Term internal(std::string label, Term cont = stop());
Term output(Channel chan, std::vector<std::string> payload, Term cont = stop());
Term input(Channel chan, std::vector<std::string> binders, Term cont = stop());
Term par(std::vector<Term> terms);
Term sum(std::vector<Term> branches);
Term match(std::string left, std::string right, Term then, Term otherwise);
Term restrict(std::vector<std::string> names, Term body);
Term call(std::string constant, std::vector<std::string> args = {});

/// Unambiguous one-line S-expression. Equal keys iff equal terms; the key
/// order is the total structural order used by normalize.
std::string key(const Term& t);

std::size_t size(const Term& t);
std::size_t depth(const Term& t);

}  // namespace radpi::pi
