#include "radpi/pi_core.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "radpi/rad_model.hpp"

namespace radpi::pi {

const Definition* PiSystem::find(std::string_view constant) const {
  auto it = index_.find(constant);
  return it == index_.end() ? nullptr : &defs_[it->second];
}

void PiSystem::add(Definition def) {
  if (index_.count(def.name)) throw std::invalid_argument("duplicate definition '" + def.name + "'");
  index_.emplace(def.name, defs_.size());
  defs_.push_back(std::move(def));
}

namespace {


void add_free(const std::string& name, const std::multiset<std::string>& bound, std::set<std::string>& out) {
  if (!bound.count(name)) out.insert(name);
}

void free_rec(const Term& t, std::multiset<std::string>& bound, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Internal>) {
          free_rec(n.cont, bound, out);
        } else if constexpr (std::is_same_v<T, Output>) {
          if (!n.chan.is_port()) add_free(n.chan.name(), bound, out);
          for (const auto& v : n.payload) add_free(v, bound, out);
          free_rec(n.cont, bound, out);
        } else if constexpr (std::is_same_v<T, Input>) {
          if (!n.chan.is_port()) add_free(n.chan.name(), bound, out);
          for (const auto& b : n.binders) bound.insert(b);
          free_rec(n.cont, bound, out);
          for (const auto& b : n.binders) bound.erase(bound.find(b));
        } else if constexpr (std::is_same_v<T, Par>) {
          for (const auto& c : n.terms) free_rec(c, bound, out);
        } else if constexpr (std::is_same_v<T, Sum>) {
          for (const auto& c : n.branches) free_rec(c, bound, out);
        } else if constexpr (std::is_same_v<T, Match>) {
          add_free(n.left, bound, out);
          add_free(n.right, bound, out);
          free_rec(n.then, bound, out);
          free_rec(n.otherwise, bound, out);
        } else if constexpr (std::is_same_v<T, New>) {
          for (const auto& b : n.names) bound.insert(b);
          free_rec(n.body, bound, out);
          for (const auto& b : n.names) bound.erase(bound.find(b));
        } else if constexpr (std::is_same_v<T, Call>) {
          for (const auto& a : n.args) add_free(a, bound, out);
        }
      },
      t.data().value);
}

const std::string& apply(const NameMap& m, const std::string& name) {
  auto it = m.find(name);
  return it == m.end() ? name : it->second;
}

std::vector<std::string> apply_all(const NameMap& m, const std::vector<std::string>& names) {
  std::vector<std::string> out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(apply(m, n));
  return out;
}

Channel apply_chan(const NameMap& m, const Channel& c) {
  if (c.is_port()) return c;
  return Channel::plain(apply(m, c.name()));
}

Term subst_rec(const Term& t, const NameMap& m);

// Substitution under binders `names` scoping over `body`. Returns the
// (possibly renamed) binders and the substituted body.
std::pair<std::vector<std::string>, Term> subst_binder(const std::vector<std::string>& names,
                                                       const Term& body, const NameMap& m) {
  NameMap inner = m;
  for (const auto& b : names) inner.erase(b);
  if (inner.empty()) return {names, body};

  auto fn = free_names(body);
  std::set<std::string> captured;
  bool relevant = false;
  for (const auto& [k, v] : inner) {
    if (fn.count(k)) {
      relevant = true;
      captured.insert(v);
    }
  }
  if (!relevant) return {names, body};

  std::set<std::string> avoid = fn;
  avoid.insert(captured.begin(), captured.end());
  for (const auto& [k, v] : inner) avoid.insert(k);
  avoid.insert(names.begin(), names.end());

  std::vector<std::string> renamed = names;
  for (auto& b : renamed) {
    if (!captured.count(b)) continue;
    std::string fresh;
    for (std::size_t k = 1;; ++k) {
      fresh = b + "_" + std::to_string(k);
      if (!avoid.count(fresh)) break;
    }
    avoid.insert(fresh);
    inner[b] = fresh;
    b = fresh;
  }
  return {renamed, subst_rec(body, inner)};
}

Term subst_rec(const Term& t, const NameMap& m) {
  return std::visit(
      [&](const auto& n) -> Term {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Stop> || std::is_same_v<T, Done>) {
          return t;
        } else if constexpr (std::is_same_v<T, Internal>) {
          return internal(n.label, subst_rec(n.cont, m));
        } else if constexpr (std::is_same_v<T, Output>) {
          return output(apply_chan(m, n.chan), apply_all(m, n.payload), subst_rec(n.cont, m));
        } else if constexpr (std::is_same_v<T, Input>) {
          auto [binders, body] = subst_binder(n.binders, n.cont, m);
          return input(apply_chan(m, n.chan), std::move(binders), std::move(body));
        } else if constexpr (std::is_same_v<T, Par>) {
          std::vector<Term> kids;
          for (const auto& c : n.terms) kids.push_back(subst_rec(c, m));
          return Term(TermData{Par{std::move(kids)}});
        } else if constexpr (std::is_same_v<T, Sum>) {
          std::vector<Term> kids;
          for (const auto& c : n.branches) kids.push_back(subst_rec(c, m));
          return Term(TermData{Sum{std::move(kids)}});
        } else if constexpr (std::is_same_v<T, Match>) {
          return match(apply(m, n.left), apply(m, n.right), subst_rec(n.then, m),
                       subst_rec(n.otherwise, m));
        } else if constexpr (std::is_same_v<T, New>) {
          auto [names, body] = subst_binder(n.names, n.body, m);
          return Term(TermData{New{std::move(names), std::move(body)}});
        } else {
          return call(n.constant, apply_all(m, n.args));
        }
      },
      t.data().value);
}

std::string level_name(std::size_t level) { return "%" + std::to_string(level); }

Term norm(const Term& t, std::size_t level);

std::vector<Term> norm_children(const std::vector<Term>& kids, std::size_t level, bool is_par) {
  std::vector<Term> flat;
  for (const auto& c : kids) {
    Term n = norm(c, level);
    if (n.is<Stop>()) continue;
    if (is_par) {
      if (const auto* p = n.as<Par>()) {
        flat.insert(flat.end(), p->terms.begin(), p->terms.end());
        continue;
      }
    } else if (const auto* s = n.as<Sum>()) {
      flat.insert(flat.end(), s->branches.begin(), s->branches.end());
      continue;
    }
    flat.push_back(std::move(n));
  }
  std::vector<std::pair<std::string, Term>> keyed;
  keyed.reserve(flat.size());
  for (auto& f : flat) keyed.emplace_back(key(f), std::move(f));
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Term> out;
  out.reserve(keyed.size());
  for (auto& [k, term] : keyed) out.push_back(std::move(term));
  return out;
}

// Occurrence signatures of restricted names. An occurrence is described by
// a hash of the prefixes above it and a hash of the prefix tree below it;
// Par, Sum and New are transparent, children are taken as a multiset,
// restricted names appear only by their current colour, bound names are
// anonymous and a match with equal sides keeps only its then-branch. The
// result does not change under the laws normalize implements nor under
// renaming of the restricted names, and it is empty exactly for the names
// normalize drops.
class OccurrenceSignatures {
 public:
  using Hash = std::uint64_t;

  OccurrenceSignatures(const std::vector<std::string>& names, const std::vector<std::size_t>& colour)
      : colour_(colour), sig_(names.size()) {
    for (std::size_t i = 0; i < names.size(); ++i) index_.emplace(names[i], i);
  }

  std::vector<std::vector<Hash>> run(const Term& body) {
    std::vector<Hash> roots;
    collect(body, 0, {}, roots);
    for (auto& s : sig_) std::sort(s.begin(), s.end());
    return std::move(sig_);
  }

 private:
  using Bound = std::set<std::string>;
  struct Occurrence {
    std::size_t name;
    Hash role;
  };

  static Hash mix(Hash h, Hash v) { return (h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2))) * 0x100000001b3ULL; }
  static Hash text(std::string_view s) {
    Hash h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
    return h;
  }

  Hash name_hash(const std::string& name, const Bound& bound) const {
    if (bound.count(name)) return text("%b");
    auto it = index_.find(name);
    if (it != index_.end()) return mix(text("%r"), colour_[it->second]);
    return text(name);
  }
  Hash chan_hash(const Channel& c, const Bound& bound) const {
    return c.is_port() ? text(c.str()) : name_hash(c.name(), bound);
  }
  void note(const std::string& name, std::string_view role, std::size_t pos, const Bound& bound,
            std::vector<Occurrence>& out) const {
    if (bound.count(name)) return;
    auto it = index_.find(name);
    if (it != index_.end()) out.push_back({it->second, mix(text(role), pos)});
  }

  // Appends the hashes of the prefix-rooted subterms of a process.
  void collect(const Term& t, Hash up, const Bound& bound, std::vector<Hash>& out) {
    if (const auto* n = t.as<Par>()) {
      for (const auto& c : n->terms) collect(c, up, bound, out);
    } else if (const auto* n = t.as<Sum>()) {
      for (const auto& c : n->branches) collect(c, up, bound, out);
    } else if (const auto* n = t.as<New>()) {
      Bound inner = bound;
      inner.insert(n->names.begin(), n->names.end());
      collect(n->body, up, inner, out);
    } else if (const auto* n = t.as<Match>(); n && n->left == n->right) {
      collect(n->then, up, bound, out);
    } else if (!t.is<Stop>()) {
      out.push_back(node(t, up, bound));
    }
  }

  Hash children(const Term& t, Hash up, const Bound& bound) {
    std::vector<Hash> kids;
    collect(t, up, bound, kids);
    std::sort(kids.begin(), kids.end());
    Hash h = text("{");
    for (auto k : kids) h = mix(h, k);
    return h;
  }

  Hash node(const Term& t, Hash up, const Bound& bound) {
    std::vector<Occurrence> occ;
    Hash desc = 0, down = 0;
    if (const auto* n = t.as<Internal>()) {
      desc = mix(text("i"), text(n->label));
      down = mix(desc, children(n->cont, mix(up, desc), bound));
    } else if (const auto* n = t.as<Output>()) {
      desc = mix(mix(text("o"), chan_hash(n->chan, bound)), n->payload.size());
      for (const auto& p : n->payload) desc = mix(desc, name_hash(p, bound));
      if (!n->chan.is_port()) note(n->chan.name(), "oc", 0, bound, occ);
      for (std::size_t i = 0; i < n->payload.size(); ++i) note(n->payload[i], "op", i, bound, occ);
      down = mix(desc, children(n->cont, mix(up, desc), bound));
    } else if (const auto* n = t.as<Input>()) {
      desc = mix(mix(text("in"), chan_hash(n->chan, bound)), n->binders.size());
      if (!n->chan.is_port()) note(n->chan.name(), "ic", 0, bound, occ);
      Bound inner = bound;
      inner.insert(n->binders.begin(), n->binders.end());
      down = mix(desc, children(n->cont, mix(up, desc), inner));
    } else if (const auto* n = t.as<Match>()) {
      auto l = name_hash(n->left, bound), r = name_hash(n->right, bound);
      desc = mix(mix(text("m"), std::min(l, r)), std::max(l, r));
      note(n->left, "m", 0, bound, occ);
      note(n->right, "m", 0, bound, occ);
      Hash here = mix(up, desc);
      down = mix(mix(desc, children(n->then, mix(here, text("T")), bound)),
                 children(n->otherwise, mix(here, text("E")), bound));
    } else if (const auto* n = t.as<Call>()) {
      desc = mix(text("c"), text(n->constant));
      for (const auto& a : n->args) desc = mix(desc, name_hash(a, bound));
      for (std::size_t i = 0; i < n->args.size(); ++i) note(n->args[i], "ca", i, bound, occ);
      down = desc;
    } else {
      desc = down = text("done");
    }
    for (const auto& o : occ) sig_[o.name].push_back(mix(mix(o.role, up), down));
    return down;
  }

  const std::vector<std::size_t>& colour_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::vector<Hash>> sig_;
};

// Dense ranks of (colour, signature) pairs; splits colour classes only.
template <class T>
std::vector<std::size_t> rerank(const std::vector<std::size_t>& colour, const std::vector<T>& by) {
  std::vector<std::pair<std::size_t, T>> pairs;
  for (std::size_t i = 0; i < colour.size(); ++i) pairs.emplace_back(colour[i], by[i]);
  auto sorted = pairs;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<std::size_t> out;
  for (const auto& p : pairs)
    out.push_back(static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), p) - sorted.begin()));
  return out;
}

std::size_t classes(const std::vector<std::size_t>& colour) {
  return std::set<std::size_t>(colour.begin(), colour.end()).size();
}

constexpr std::size_t kMaxCanonicalLeaves = 720;

Term norm_new(const New& outer, std::size_t level) {
  // Directly nested restrictions form one group; an outer name shadowed by
  // an inner one is dead.
  New n = outer;
  while (const auto* inner = n.body.as<New>()) {
    for (const auto& x : inner->names) n.names.erase(std::remove(n.names.begin(), n.names.end(), x), n.names.end());
    n.names.insert(n.names.end(), inner->names.begin(), inner->names.end());
    n.body = inner->body;
  }
  std::vector<std::string> unique;
  for (const auto& name : n.names)
    if (std::find(unique.begin(), unique.end(), name) == unique.end()) unique.push_back(name);
  std::vector<std::size_t> uncoloured(unique.size(), 0);
  auto unique_sig = OccurrenceSignatures(unique, uncoloured).run(n.body);
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < unique.size(); ++i)
    if (!unique_sig[i].empty()) kept.push_back(unique[i]);
  if (kept.empty()) return norm(n.body, level);

  const std::size_t k = kept.size();
  std::vector<std::string> canonical;
  for (std::size_t i = 0; i < k; ++i) canonical.push_back(level_name(level + i));

  auto attempt = [&](const std::vector<std::size_t>& order) {
    NameMap m;
    for (std::size_t i = 0; i < k; ++i)
      if (kept[order[i]] != canonical[i]) m[kept[order[i]]] = canonical[i];
    return norm(subst_rec(n.body, m), level + k);
  };

  // Canonical order by colour refinement: a name's colour is refined by its
  // signature under the current colours until stable. Remaining ties are
  // broken by individualizing each member of the first tied class in turn;
  // the least resulting term wins. A leaf equal to one found under an
  // earlier sibling branch witnesses an automorphism mapping that branch
  // onto the current one, so the rest of the current branch is skipped.
  // Past the leaf budget the best so far is kept, which is sound but may
  // separate congruent terms.
  auto refine = [&](std::vector<std::size_t> colour) {
    for (;;) {
      auto sig = OccurrenceSignatures(kept, colour).run(n.body);
      auto next = rerank(colour, sig);
      if (classes(next) == classes(colour)) return next;
      colour = std::move(next);
    }
  };
  Term best;
  std::string best_key;
  std::size_t leaves = 0;
  std::vector<const std::set<std::string>*> earlier;
  std::size_t cut = 0;  // depth to unwind to; 0 means none
  std::function<void(std::vector<std::size_t>, std::set<std::string>&)> search =
      [&](std::vector<std::size_t> colour, std::set<std::string>& below) {
        colour = refine(std::move(colour));
        if (classes(colour) == k) {
          std::vector<std::size_t> order(k);
          for (std::size_t i = 0; i < k; ++i) order[colour[i]] = i;
          Term candidate = attempt(order);
          std::string candidate_key = key(candidate);
          ++leaves;
          for (std::size_t d = 0; d < earlier.size(); ++d)
            if (earlier[d]->count(candidate_key)) {
              cut = d + 1;
              return;
            }
          if (best_key.empty() || candidate_key < best_key) {
            best = candidate;
            best_key = candidate_key;
          }
          below.insert(std::move(candidate_key));
          return;
        }
        std::vector<std::size_t> size(k, 0);
        for (auto c : colour) ++size[c];
        std::size_t cell = 0;
        while (size[cell] < 2) ++cell;
        std::set<std::string> seen;
        earlier.push_back(&seen);
        const std::size_t depth = earlier.size();
        for (std::size_t y = 0; y < k && leaves < kMaxCanonicalLeaves; ++y) {
          if (colour[y] != cell) continue;
          std::vector<int> mark(k, 1);
          mark[y] = 0;
          std::set<std::string> child;
          search(rerank(colour, mark), child);
          seen.insert(child.begin(), child.end());
          if (cut == depth) cut = 0;
          if (cut != 0) break;
        }
        earlier.pop_back();
        below.insert(seen.begin(), seen.end());
      };
  std::set<std::string> all_leaves;
  search(std::vector<std::size_t>(k, 0), all_leaves);
  // The body may have collapsed to another restriction; regroup so normal
  // forms never nest restrictions directly.
  if (const auto* inner = best.as<New>()) {
    std::vector<std::string> all = canonical;
    all.insert(all.end(), inner->names.begin(), inner->names.end());
    return norm_new(New{std::move(all), inner->body}, level);
  }
  return restrict(canonical, std::move(best));
}

Term norm(const Term& t, std::size_t level) {
  return std::visit(
      [&](const auto& n) -> Term {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Stop> || std::is_same_v<T, Done> || std::is_same_v<T, Call>) {
          return t;
        } else if constexpr (std::is_same_v<T, Internal>) {
          return internal(n.label, norm(n.cont, level));
        } else if constexpr (std::is_same_v<T, Output>) {
          return output(n.chan, n.payload, norm(n.cont, level));
        } else if constexpr (std::is_same_v<T, Input>) {
          NameMap m;
          std::vector<std::string> binders;
          for (std::size_t i = 0; i < n.binders.size(); ++i) {
            binders.push_back(level_name(level + i));
            if (n.binders[i] != binders.back()) m[n.binders[i]] = binders.back();
          }
          Term body = m.empty() ? n.cont : subst_rec(n.cont, m);
          return input(n.chan, std::move(binders), norm(body, level + n.binders.size()));
        } else if constexpr (std::is_same_v<T, Par>) {
          auto kids = norm_children(n.terms, level, true);
          if (kids.empty()) return stop();
          if (kids.size() == 1) return kids.front();
          return Term(TermData{Par{std::move(kids)}});
        } else if constexpr (std::is_same_v<T, Sum>) {
          auto kids = norm_children(n.branches, level, false);
          if (kids.empty()) return stop();
          if (kids.size() == 1) return kids.front();
          return Term(TermData{Sum{std::move(kids)}});
        } else if constexpr (std::is_same_v<T, Match>) {
          if (n.left == n.right) return norm(n.then, level);
          const auto& [lo, hi] = std::minmax(n.left, n.right);
          return match(lo, hi, norm(n.then, level), norm(n.otherwise, level));
        } else {
          return norm_new(n, level);
        }
      },
      t.data().value);
}

void check_rec(const Term& t, const PiSystem& sys, const std::string& where, std::vector<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Internal> || std::is_same_v<T, Output>) {
          check_rec(n.cont, sys, where, out);
        } else if constexpr (std::is_same_v<T, Input>) {
          std::set<std::string> seen(n.binders.begin(), n.binders.end());
          if (seen.size() != n.binders.size()) out.push_back(where + ": repeated binder on " + n.chan.str());
          check_rec(n.cont, sys, where, out);
        } else if constexpr (std::is_same_v<T, Par>) {
          if (n.terms.size() < 2) out.push_back(where + ": Par with fewer than two operands");
          for (const auto& c : n.terms) {
            if (c.template is<Par>()) out.push_back(where + ": nested Par");
            check_rec(c, sys, where, out);
          }
        } else if constexpr (std::is_same_v<T, Sum>) {
          if (n.branches.size() < 2) out.push_back(where + ": Sum with fewer than two branches");
          for (const auto& c : n.branches) {
            if (c.template is<Sum>()) out.push_back(where + ": nested Sum");
            check_rec(c, sys, where, out);
          }
        } else if constexpr (std::is_same_v<T, Match>) {
          check_rec(n.then, sys, where, out);
          check_rec(n.otherwise, sys, where, out);
        } else if constexpr (std::is_same_v<T, New>) {
          check_rec(n.body, sys, where, out);
        } else if constexpr (std::is_same_v<T, Call>) {
          if (!rad::starts_upper(n.constant)) out.push_back(where + ": constant '" + n.constant + "' is not capitalized");
          const Definition* def = sys.find(n.constant);
          if (!def) out.push_back(where + ": call to undefined '" + n.constant + "'");
          else if (def->params.size() != n.args.size())
            out.push_back(where + ": call to '" + n.constant + "' with wrong arity");
        }
      },
      t.data().value);
}

}  // namespace

std::set<std::string> free_names(const Term& t) {
  std::multiset<std::string> bound;
  std::set<std::string> out;
  free_rec(t, bound, out);
  return out;
}

Term substitute(const Term& t, const NameMap& mapping) {
  NameMap m;
  for (const auto& [k, v] : mapping)
    if (k != v) m.emplace(k, v);
  if (m.empty()) return t;
  return subst_rec(t, m);
}

Term normalize(const Term& t) { return norm(t, 0); }

bool struct_congruent(const Term& p, const Term& q) { return normalize(p) == normalize(q); }

std::vector<std::string> check_system(const PiSystem& system) {
  std::vector<std::string> out;
  for (const auto& def : system.defs()) {
    if (!rad::starts_upper(def.name)) out.push_back("definition '" + def.name + "' is not capitalized");
    check_rec(def.body, system, def.name, out);
    std::set<std::string> allowed(def.params.begin(), def.params.end());
    for (const auto& name : free_names(def.body))
      if (!allowed.count(name) && !system.globals.count(name))
        out.push_back(def.name + ": free name '" + name + "' is neither a parameter nor global");
  }
  check_rec(system.main, system, system.name, out);
  return out;
}

}  // namespace radpi::pi
