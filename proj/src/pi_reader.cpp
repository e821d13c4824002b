#include <cctype>
#include <stdexcept>

#include "radpi/pi_print.hpp"
#include "radpi/rad_model.hpp"

namespace radpi::pi {

namespace {

struct Tok {
  std::string text;  // a name, a punctuation character, or "||"; empty at end
  bool is_name = false;
  int line = 1;
};

bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':' || c == '%' || c == '#' ||
         c == '-';
}

std::vector<Tok> lex(std::string_view src) {
  std::vector<Tok> out;
  int line = 1;
  std::size_t i = 0;
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '#' && (i + 1 >= src.size() || !std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      // '#' followed by a digit is a fresh runtime name, otherwise a comment
      while (i < src.size() && src[i] != '\n') ++i;
    } else if (name_char(c)) {
      std::size_t j = i;
      while (j < src.size() && name_char(src[j])) ++j;
      out.push_back({std::string(src.substr(i, j - i)), true, line});
      i = j;
    } else if (c == '|' && i + 1 < src.size() && src[i + 1] == '|') {
      out.push_back({"||", false, line});
      i += 2;
    } else if (std::string_view("(){}<>.,=+*/?").find(c) != std::string_view::npos) {
      out.push_back({std::string(1, c), false, line});
      ++i;
    } else {
      throw std::runtime_error("line " + std::to_string(line) + ": unexpected character '" + c + "'");
    }
  }
  out.push_back({"", false, line});
  return out;
}

class Reader {
 public:
  explicit Reader(std::vector<Tok> toks) : toks_(std::move(toks)) {}

  ParsedPi file() {
    ParsedPi out;
    auto main = definition();
    out.name = main.name;
    out.main = main.body;
    while (!at_end()) out.defs.push_back(definition());
    return out;
  }

  Term single() {
    Term t = term();
    if (!at_end()) fail("trailing input");
    return t;
  }

 private:
  bool at_end() const { return toks_[pos_].text.empty(); }
  const Tok& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  bool at(std::string_view s) const { return !peek().is_name && peek().text == s; }
  bool at_name(std::string_view s) const { return peek().is_name && peek().text == s; }

  [[noreturn]] void fail(const std::string& msg) const {
    std::string found = at_end() ? "end of input" : "'" + peek().text + "'";
    throw std::runtime_error("line " + std::to_string(peek().line) + ": " + msg + " (found " + found + ")");
  }

  void expect(std::string_view s) {
    if (!at(s)) fail("expected '" + std::string(s) + "'");
    ++pos_;
  }

  std::string name() {
    if (!peek().is_name) fail("expected a name");
    return toks_[pos_++].text;
  }

  std::vector<std::string> names_until(std::string_view close) {
    std::vector<std::string> out;
    if (at(close)) return out;
    out.push_back(name());
    while (at(",")) {
      ++pos_;
      out.push_back(name());
    }
    return out;
  }

  Definition definition() {
    Definition def;
    def.name = name();
    if (!rad::starts_upper(def.name)) fail("definition names start upper-case");
    if (at("(")) {
      ++pos_;
      def.params = names_until(")");
      expect(")");
    }
    expect("=");
    def.body = term();
    return def;
  }

  Term term() {
    std::vector<Term> parts{seq()};
    while (at("||")) {
      ++pos_;
      parts.push_back(seq());
    }
    return par(std::move(parts));
  }

  Term block() {
    expect("{");
    Term t = term();
    expect("}");
    return t;
  }

  Term cont() {
    expect(".");
    return seq();
  }

  Term seq() {
    if (at("{")) {
      std::vector<Term> branches{block()};
      while (at("+")) {
        ++pos_;
        branches.push_back(block());
      }
      return sum(std::move(branches));
    }
    if (at("(")) {
      if (peek(1).is_name && peek(1).text == "new") {
        pos_ += 2;
        auto names = names_until(")");
        expect(")");
        expect("(");
        Term body = term();
        expect(")");
        return restrict(std::move(names), std::move(body));
      }
      ++pos_;
      Term inner = term();
      expect(")");
      return inner;
    }
    if (at_name("if")) return conditional();
    if (!peek().is_name) fail("expected a term");

    std::string first = name();
    if (rad::starts_upper(first)) {
      std::vector<std::string> args;
      if (at("(")) {
        ++pos_;
        args = names_until(")");
        expect(")");
      }
      return call(std::move(first), std::move(args));
    }

    std::vector<std::string> parts{first};
    bool two_way = false;
    while (at("/")) {
      ++pos_;
      parts.push_back(name());
    }
    if (at("*")) {
      ++pos_;
      two_way = true;
    }
    bool is_port = parts.size() > 1;
    if (two_way && !is_port) fail("'*' only follows a port");
    Channel chan = is_port ? Channel::port(parts, two_way) : Channel::plain(first);

    if (at("<")) {
      ++pos_;
      auto payload = names_until(">");
      expect(">");
      return output(std::move(chan), std::move(payload), cont());
    }
    if (at("?")) {
      ++pos_;
      expect("(");
      expect(")");
      return input(std::move(chan), {}, cont());
    }
    expect("(");
    if (at(")")) {
      ++pos_;
      if (is_port) fail("a port needs '<...>' or '(...)' with names");
      if (first == "stop") return stop();
      if (first == "done") return done();
      return internal(first, cont());
    }
    auto binders = names_until(")");
    expect(")");
    return input(std::move(chan), std::move(binders), cont());
  }

  Term conditional() {
    ++pos_;  // if
    auto guard = [&] {
      expect("(");
      std::string l = name();
      expect("=");
      std::string r = name();
      expect(")");
      return std::pair{l, r};
    };
    std::vector<std::pair<std::pair<std::string, std::string>, Term>> arms;
    auto g = guard();
    arms.emplace_back(g, block());
    while (at_name("elseif")) {
      ++pos_;
      auto gi = guard();
      arms.emplace_back(gi, block());
    }
    if (!at_name("else")) fail("expected 'else'");
    ++pos_;
    Term result = block();
    for (auto it = arms.rbegin(); it != arms.rend(); ++it)
      result = match(it->first.first, it->first.second, it->second, result);
    return result;
  }

  std::vector<Tok> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

ParsedPi read_pi(std::string_view text) { return Reader(lex(text)).file(); }

Term read_term(std::string_view text) { return Reader(lex(text)).single(); }

}  // namespace radpi::pi
