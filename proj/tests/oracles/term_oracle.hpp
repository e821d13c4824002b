#pragma once

// Test-side oracles for term meta-operations. They share only the term data
// types with the library; every algorithm here is written independently.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "radpi/pi_term.hpp"

namespace oracle {

using namespace radpi::pi;

// ---------------------------------------------------------------------------
// Alpha-equivalence by simultaneous binder environments. Two bound names
// correspond iff they were introduced by binders at the same position; free
// names must be literally equal. No reordering of Par/Sum children.

struct AlphaEnv {
  std::map<std::string, int> left, right;
  int next = 0;
};

inline bool same_name(const std::string& a, const std::string& b, const AlphaEnv& env) {
  auto la = env.left.find(a);
  auto rb = env.right.find(b);
  if (la == env.left.end() && rb == env.right.end()) return a == b;
  if (la == env.left.end() || rb == env.right.end()) return false;
  return la->second == rb->second;
}

inline bool same_names(const std::vector<std::string>& a, const std::vector<std::string>& b, const AlphaEnv& env) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_name(a[i], b[i], env)) return false;
  return true;
}

inline bool same_chan(const Channel& a, const Channel& b, const AlphaEnv& env) {
  if (a.is_port() || b.is_port()) return a == b;
  return same_name(a.name(), b.name(), env);
}

inline AlphaEnv bind(AlphaEnv env, const std::vector<std::string>& a, const std::vector<std::string>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    env.left[a[i]] = env.next;
    env.right[b[i]] = env.next;
    ++env.next;
  }
  return env;
}

inline bool alpha_eq(const Term& p, const Term& q, const AlphaEnv& env = {}) {
  if (p.data().value.index() != q.data().value.index()) return false;
  if (p.is<Stop>() || p.is<Done>()) return true;
  if (const auto* a = p.as<Internal>()) {
    const auto* b = q.as<Internal>();
    return a->label == b->label && alpha_eq(a->cont, b->cont, env);
  }
  if (const auto* a = p.as<Output>()) {
    const auto* b = q.as<Output>();
    return same_chan(a->chan, b->chan, env) && same_names(a->payload, b->payload, env) &&
           alpha_eq(a->cont, b->cont, env);
  }
  if (const auto* a = p.as<Input>()) {
    const auto* b = q.as<Input>();
    if (!same_chan(a->chan, b->chan, env) || a->binders.size() != b->binders.size()) return false;
    return alpha_eq(a->cont, b->cont, bind(env, a->binders, b->binders));
  }
  if (const auto* a = p.as<Par>()) {
    const auto* b = q.as<Par>();
    if (a->terms.size() != b->terms.size()) return false;
    for (std::size_t i = 0; i < a->terms.size(); ++i)
      if (!alpha_eq(a->terms[i], b->terms[i], env)) return false;
    return true;
  }
  if (const auto* a = p.as<Sum>()) {
    const auto* b = q.as<Sum>();
    if (a->branches.size() != b->branches.size()) return false;
    for (std::size_t i = 0; i < a->branches.size(); ++i)
      if (!alpha_eq(a->branches[i], b->branches[i], env)) return false;
    return true;
  }
  if (const auto* a = p.as<Match>()) {
    const auto* b = q.as<Match>();
    return same_name(a->left, b->left, env) && same_name(a->right, b->right, env) &&
           alpha_eq(a->then, b->then, env) && alpha_eq(a->otherwise, b->otherwise, env);
  }
  if (const auto* a = p.as<New>()) {
    const auto* b = q.as<New>();
    if (a->names.size() != b->names.size()) return false;
    return alpha_eq(a->body, b->body, bind(env, a->names, b->names));
  }
  const auto* a = p.as<Call>();
  const auto* b = q.as<Call>();
  return a->constant == b->constant && same_names(a->args, b->args, env);
}

// ---------------------------------------------------------------------------
// Reference substitution: first give every binder a globally unique name,
// then replace free names naively. Capture is impossible by construction.

class Renamer {
 public:
  explicit Renamer(std::string prefix) : prefix_(std::move(prefix)) {}

  Term fresh_binders(const Term& t, const std::map<std::string, std::string>& env = {}) {
    auto look = [&](const std::string& n) {
      auto it = env.find(n);
      return it == env.end() ? n : it->second;
    };
    auto looks = [&](const std::vector<std::string>& ns) {
      std::vector<std::string> out;
      for (const auto& n : ns) out.push_back(look(n));
      return out;
    };
    auto chan = [&](const Channel& c) { return c.is_port() ? c : Channel::plain(look(c.name())); };
    auto extend = [&](const std::vector<std::string>& ns, std::vector<std::string>& renamed) {
      auto inner = env;
      for (const auto& n : ns) {
        std::string f = prefix_ + std::to_string(counter_++);
        inner[n] = f;
        renamed.push_back(f);
      }
      return inner;
    };
    if (t.is<Stop>() || t.is<Done>()) return t;
    if (const auto* a = t.as<Internal>()) return internal(a->label, fresh_binders(a->cont, env));
    if (const auto* a = t.as<Output>()) return output(chan(a->chan), looks(a->payload), fresh_binders(a->cont, env));
    if (const auto* a = t.as<Input>()) {
      std::vector<std::string> bs;
      auto inner = extend(a->binders, bs);
      return input(chan(a->chan), bs, fresh_binders(a->cont, inner));
    }
    if (const auto* a = t.as<Par>()) {
      std::vector<Term> kids;
      for (const auto& c : a->terms) kids.push_back(fresh_binders(c, env));
      return Term(TermData{Par{kids}});
    }
    if (const auto* a = t.as<Sum>()) {
      std::vector<Term> kids;
      for (const auto& c : a->branches) kids.push_back(fresh_binders(c, env));
      return Term(TermData{Sum{kids}});
    }
    if (const auto* a = t.as<Match>())
      return match(look(a->left), look(a->right), fresh_binders(a->then, env), fresh_binders(a->otherwise, env));
    if (const auto* a = t.as<New>()) {
      std::vector<std::string> ns;
      auto inner = extend(a->names, ns);
      return Term(TermData{New{ns, fresh_binders(a->body, inner)}});
    }
    const auto* c = t.as<Call>();
    return call(c->constant, looks(c->args));
  }

 private:
  std::string prefix_;
  int counter_ = 0;
};

// Replaces every occurrence of a key; only valid when no binder is a key.
inline Term naive_replace(const Term& t, const std::map<std::string, std::string>& m) {
  auto look = [&](const std::string& n) {
    auto it = m.find(n);
    return it == m.end() ? n : it->second;
  };
  auto looks = [&](const std::vector<std::string>& ns) {
    std::vector<std::string> out;
    for (const auto& n : ns) out.push_back(look(n));
    return out;
  };
  auto chan = [&](const Channel& c) { return c.is_port() ? c : Channel::plain(look(c.name())); };
  if (t.is<Stop>() || t.is<Done>()) return t;
  if (const auto* a = t.as<Internal>()) return internal(a->label, naive_replace(a->cont, m));
  if (const auto* a = t.as<Output>()) return output(chan(a->chan), looks(a->payload), naive_replace(a->cont, m));
  if (const auto* a = t.as<Input>()) return input(chan(a->chan), a->binders, naive_replace(a->cont, m));
  if (const auto* a = t.as<Par>()) {
    std::vector<Term> kids;
    for (const auto& c : a->terms) kids.push_back(naive_replace(c, m));
    return Term(TermData{Par{kids}});
  }
  if (const auto* a = t.as<Sum>()) {
    std::vector<Term> kids;
    for (const auto& c : a->branches) kids.push_back(naive_replace(c, m));
    return Term(TermData{Sum{kids}});
  }
  if (const auto* a = t.as<Match>())
    return match(look(a->left), look(a->right), naive_replace(a->then, m), naive_replace(a->otherwise, m));
  if (const auto* a = t.as<New>()) return Term(TermData{New{a->names, naive_replace(a->body, m)}});
  const auto* c = t.as<Call>();
  return call(c->constant, looks(c->args));
}

inline Term reference_substitute(const Term& t, const std::map<std::string, std::string>& m) {
  Renamer r("~b");
  return naive_replace(r.fresh_binders(t), m);
}

// Independent free-name computation.
inline void free_into(const Term& t, std::set<std::string> bound, std::set<std::string>& out) {
  auto use = [&](const std::string& n) {
    if (!bound.count(n)) out.insert(n);
  };
  auto use_chan = [&](const Channel& c) {
    if (!c.is_port()) use(c.name());
  };
  if (const auto* a = t.as<Internal>()) free_into(a->cont, bound, out);
  else if (const auto* a = t.as<Output>()) {
    use_chan(a->chan);
    for (const auto& n : a->payload) use(n);
    free_into(a->cont, bound, out);
  } else if (const auto* a = t.as<Input>()) {
    use_chan(a->chan);
    bound.insert(a->binders.begin(), a->binders.end());
    free_into(a->cont, bound, out);
  } else if (const auto* a = t.as<Par>()) {
    for (const auto& c : a->terms) free_into(c, bound, out);
  } else if (const auto* a = t.as<Sum>()) {
    for (const auto& c : a->branches) free_into(c, bound, out);
  } else if (const auto* a = t.as<Match>()) {
    use(a->left);
    use(a->right);
    free_into(a->then, bound, out);
    free_into(a->otherwise, bound, out);
  } else if (const auto* a = t.as<New>()) {
    bound.insert(a->names.begin(), a->names.end());
    free_into(a->body, bound, out);
  } else if (const auto* a = t.as<Call>()) {
    for (const auto& n : a->args) use(n);
  }
}

inline std::set<std::string> free_set(const Term& t) {
  std::set<std::string> out;
  free_into(t, {}, out);
  return out;
}

// ---------------------------------------------------------------------------
// Random terms of bounded depth over a small name pool so that binders,
// captures and matches collide often.

class TermGen {
 public:
  explicit TermGen(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }

  std::string name() {
    static const char* pool[] = {"a", "b", "c", "x", "y", "v"};
    return pool[pick(6)];
  }

  Channel chan() {
    if (pick(4) == 0) return Channel::port({"p", "q"}, pick(2) == 0);
    return Channel::plain(name());
  }

  std::vector<std::string> names(std::size_t max) {
    std::vector<std::string> out;
    std::size_t n = pick(max + 1);
    for (std::size_t i = 0; i < n; ++i) out.push_back(name());
    return out;
  }

  std::vector<std::string> distinct_names(std::size_t min, std::size_t max) {
    std::vector<std::string> pool{"a", "b", "c", "x", "y", "v"};
    std::shuffle(pool.begin(), pool.end(), rng_);
    std::size_t n = min + pick(max - min + 1);
    return {pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n)};
  }

  Term term(int depth) {
    // Depth counts every node, so a prefix with its stop() continuation is 2.
    if (depth <= 1) {
      switch (pick(3)) {
        case 0: return stop();
        case 1: return done();
        default: return call("K", names(2));
      }
    }
    switch (pick(9)) {
      case 0: return internal("t" + std::to_string(pick(3)), term(depth - 1));
      case 1: return output(chan(), names(2), term(depth - 1));
      case 2: return input(chan(), distinct_names(0, 2), term(depth - 1));
      case 3: return Term(TermData{Par{kids(depth)}});
      case 4: return Term(TermData{Sum{kids(depth)}});
      case 5: return match(name(), name(), term(depth - 1), term(depth - 1));
      case 6: return Term(TermData{New{distinct_names(1, 3), term(depth - 1)}});
      case 7: return stop();
      default: return call("K", names(2));
    }
  }

  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

 private:
  std::vector<Term> kids(int depth) {
    std::vector<Term> out;
    std::size_t n = 2 + pick(2);
    for (std::size_t i = 0; i < n; ++i) out.push_back(term(depth - 1));
    return out;
  }

  std::mt19937_64 rng_;
};

// ---------------------------------------------------------------------------
// Congruence-preserving perturbations: shuffle Par/Sum children, regroup
// Par children, insert stop(), add unused restrictions, permute restricted
// names, swap match sides, and rename binders to fresh names.

class Perturber {
 public:
  explicit Perturber(std::uint64_t seed) : rng_(seed) {}

  Term run(const Term& t) {
    Renamer r("~r");
    return step(r.fresh_binders(t));
  }

 private:
  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

  std::vector<Term> children(const std::vector<Term>& in) {
    std::vector<Term> out;
    for (const auto& c : in) out.push_back(step(c));
    std::shuffle(out.begin(), out.end(), rng_);
    if (pick(2) == 0) out.push_back(stop());
    return out;
  }

  Term step(const Term& t) {
    Term r = structural(t);
    if (pick(4) == 0) r = Term(TermData{New{{"~u" + std::to_string(unused_++)}, r}});
    if (pick(5) == 0) r = Term(TermData{Par{{r, stop()}}});
    return r;
  }

  Term structural(const Term& t) {
    if (t.is<Stop>() || t.is<Done>() || t.is<Call>()) return t;
    if (const auto* a = t.as<Internal>()) return internal(a->label, step(a->cont));
    if (const auto* a = t.as<Output>()) return output(a->chan, a->payload, step(a->cont));
    if (const auto* a = t.as<Input>()) return input(a->chan, a->binders, step(a->cont));
    if (const auto* a = t.as<Par>()) {
      auto kids = children(a->terms);
      if (kids.size() >= 3 && pick(2) == 0) {
        Term grouped = Term(TermData{Par{{kids[0], kids[1]}}});
        kids.erase(kids.begin(), kids.begin() + 2);
        kids.insert(kids.begin(), grouped);
      }
      return Term(TermData{Par{kids}});
    }
    if (const auto* a = t.as<Sum>()) return Term(TermData{Sum{children(a->branches)}});
    if (const auto* a = t.as<Match>()) {
      if (pick(2) == 0) return match(a->right, a->left, step(a->then), step(a->otherwise));
      return match(a->left, a->right, step(a->then), step(a->otherwise));
    }
    const auto* n = t.as<New>();
    auto names = n->names;
    std::shuffle(names.begin(), names.end(), rng_);
    return Term(TermData{New{names, step(n->body)}});
  }

  std::mt19937_64 rng_;
  int unused_ = 0;
};

}  // namespace oracle
