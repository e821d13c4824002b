#include <cctype>
#include <set>
#include <stdexcept>

#include "radpi/rad_parser.hpp"

namespace radpi::rad {

namespace {

enum class Tok { ident, string, integer, lbrace, rbrace, lbracket, rbracket, comma, colon, eof };

struct Token {
  Tok kind = Tok::eof;
  std::string text;
  int line = 1;
  int column = 1;
};

struct SyntaxError : std::runtime_error {
  SyntaxError(std::string msg, const Token& at, std::string_view c = codes::syntax)
      : std::runtime_error(std::move(msg)), token(at), code(c) {}
  Token token;
  std::string_view code;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::eof: return "end of input";
    case Tok::string: return "string \"" + t.text + "\"";
    default: return "'" + t.text + "'";
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  // Lexing errors are reported as a single-character error token.
  std::vector<Token> run(std::vector<Diagnostic>& diags, const std::string& file) {
    std::vector<Token> out;
    while (true) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Tok::ident;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          t.text += advance();
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        t.kind = Tok::integer;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
          t.text += advance();
      } else if (c == '"') {
        t.kind = Tok::string;
        advance();
        while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n') t.text += advance();
        if (pos_ >= src_.size() || src_[pos_] != '"') {
          diags.push_back(make_error(codes::syntax, "unterminated string", {file, t.line, t.column, 1}));
          out.push_back(Token{Tok::eof, "", t.line, t.column});
          return out;
        }
        advance();
      } else {
        advance();
        t.text = std::string(1, c);
        switch (c) {
          case '{': t.kind = Tok::lbrace; break;
          case '}': t.kind = Tok::rbrace; break;
          case '[': t.kind = Tok::lbracket; break;
          case ']': t.kind = Tok::rbracket; break;
          case ',': t.kind = Tok::comma; break;
          case ':': t.kind = Tok::colon; break;
          default:
            diags.push_back(make_error(codes::syntax, std::string("unexpected character '") + c + "'",
                                       {file, t.line, t.column, 1}));
            continue;
        }
      }
      out.push_back(std::move(t));
    }
  }

 private:
  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, std::string file) : toks_(std::move(toks)), file_(std::move(file)) {}

  std::optional<RadModel> run(std::vector<Diagnostic>& diags) {
    RadModel model;
    try {
      model.span = span(peek());
      expect_keyword("model");
      model.name = expect(Tok::string, "model name string").text;
      expect(Tok::lbrace, "'{'");
    } catch (const SyntaxError& e) {
      diags.push_back(make_error(codes::syntax, e.what(), span(e.token)));
      return std::nullopt;
    }

    std::set<std::string> role_names, interaction_ids;
    while (peek().kind != Tok::rbrace && peek().kind != Tok::eof) {
      std::size_t start = pos_;
      try {
        const Token& head = peek();
        if (is_keyword(head, "interaction")) {
          auto decl = parse_interaction();
          if (!interaction_ids.insert(decl.id).second)
            throw SyntaxError("duplicate interaction '" + decl.id + "'", toks_[start + 1], codes::duplicate);
          model.interactions.push_back(std::move(decl));
        } else if (is_keyword(head, "role")) {
          auto role = parse_role();
          std::string key = role.name;
          for (auto& c : key) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
          if (!role_names.insert(key).second)
            throw SyntaxError("duplicate role '" + role.name + "'", toks_[start + 1], codes::duplicate);
          model.roles.push_back(std::move(role));
        } else {
          throw SyntaxError("expected 'interaction' or 'role', found " + describe(head), head);
        }
      } catch (const SyntaxError& e) {
        diags.push_back(make_error(e.code, e.what(), span(e.token)));
        // A duplicate is detected after the whole declaration was consumed.
        if (e.code != codes::duplicate) recover(start);
      }
    }
    try {
      expect(Tok::rbrace, "'}' closing the model");
      if (peek().kind != Tok::eof)
        throw SyntaxError("unexpected " + describe(peek()) + " after the model", peek());
    } catch (const SyntaxError& e) {
      diags.push_back(make_error(codes::syntax, e.what(), span(e.token)));
    }
    if (has_errors(diags)) return std::nullopt;
    return model;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }

  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }

  SourceSpan span(const Token& t) const {
    int len = t.kind == Tok::string ? static_cast<int>(t.text.size()) + 2 : static_cast<int>(t.text.size());
    return SourceSpan{file_, t.line, t.column, len};
  }

  static bool is_keyword(const Token& t, std::string_view kw) { return t.kind == Tok::ident && t.text == kw; }

  const Token& expect(Tok kind, std::string_view what) {
    if (peek().kind != kind)
      throw SyntaxError("expected " + std::string(what) + ", found " + describe(peek()), peek());
    return next();
  }

  void expect_keyword(std::string_view kw) {
    if (!is_keyword(peek(), kw))
      throw SyntaxError("expected '" + std::string(kw) + "', found " + describe(peek()), peek());
    next();
  }

  // "key:" label
  void expect_label(std::string_view key) {
    if (!is_keyword(peek(), key) || peek(1).kind != Tok::colon)
      throw SyntaxError("expected '" + std::string(key) + ":', found " + describe(peek()), peek());
    next();
    next();
  }

  bool at_label(std::string_view key) const { return is_keyword(peek(), key) && peek(1).kind == Tok::colon; }

  std::string ident(std::string_view what) { return expect(Tok::ident, what).text; }

  // Skip the rest of a failed top-level declaration: through its braced body
  // when one was opened, otherwise up to the next declaration keyword.
  void recover(std::size_t start) {
    pos_ = start;
    next();
    while (peek().kind != Tok::eof && peek().kind != Tok::lbrace && peek().kind != Tok::rbrace &&
           !is_keyword(peek(), "role") && !is_keyword(peek(), "interaction"))
      next();
    if (peek().kind != Tok::lbrace) return;
    int depth = 0;
    do {
      if (peek().kind == Tok::lbrace) ++depth;
      if (peek().kind == Tok::rbrace) --depth;
      next();
    } while (depth > 0 && peek().kind != Tok::eof);
  }

  std::vector<std::string> name_list() {
    std::vector<std::string> out;
    expect(Tok::lbracket, "'['");
    if (peek().kind != Tok::rbracket) {
      out.push_back(ident("name"));
      while (peek().kind == Tok::comma) {
        next();
        out.push_back(ident("name"));
      }
    }
    expect(Tok::rbracket, "']'");
    return out;
  }

  InteractionDecl parse_interaction() {
    InteractionDecl decl;
    decl.span = span(peek());
    expect_keyword("interaction");
    decl.id = ident("interaction name");
    expect(Tok::lbrace, "'{'");
    expect_label("initiator");
    decl.initiator = ident("initiator role");
    expect_label("responders");
    decl.responders = name_list();
    expect_label("mode");
    const Token& mode = expect(Tok::ident, "'sync' or 'async'");
    if (mode.text == "sync") decl.mode = Mode::sync;
    else if (mode.text == "async") decl.mode = Mode::async;
    else throw SyntaxError("expected 'sync' or 'async', found " + describe(mode), mode);
    if (is_keyword(peek(), "two_way")) {
      next();
      decl.two_way = true;
    }
    if (at_label("payload")) {
      expect_label("payload");
      decl.payload = name_list();
    }
    if (at_label("reply")) {
      expect_label("reply");
      decl.reply_payload = name_list();
    }
    expect(Tok::rbrace, "'}' closing the interaction");
    return decl;
  }

  Role parse_role() {
    Role role;
    role.span = span(peek());
    expect_keyword("role");
    role.name = ident("role name");
    if (is_keyword(peek(), "as")) {
      next();
      role.symbol = ident("role symbol");
    }
    if (is_keyword(peek(), "port")) {
      next();
      role.port_prefix = ident("port prefix");
    }
    if (at_label("instances")) {
      expect_label("instances");
      if (peek().kind == Tok::integer) {
        const Token& n = next();
        if (n.text.size() > 6) throw SyntaxError("instance count too large", n);
        role.cardinality = {CardinalityKind::fixed, std::stoi(n.text)};
      } else if (is_keyword(peek(), "many")) {
        next();
        role.cardinality = {CardinalityKind::unbounded, 0};
      } else {
        throw SyntaxError("expected an instance count or 'many', found " + describe(peek()), peek());
      }
    }
    if (is_keyword(peek(), "stub")) {
      next();
      role.stub = true;
    }
    role.body = block();
    return role;
  }

  NodeList block() {
    expect(Tok::lbrace, "'{'");
    NodeList nodes;
    while (peek().kind != Tok::rbrace) {
      if (peek().kind == Tok::eof) throw SyntaxError("expected '}', found end of input", peek());
      nodes.push_back(node());
    }
    next();
    return nodes;
  }

  Node node() {
    const Token& head = peek();
    SourceSpan at = span(head);
    if (head.kind != Tok::ident) throw SyntaxError("expected a node keyword, found " + describe(head), head);
    const std::string kw = head.text;
    next();
    if (kw == "activity") {
      Activity a{ident("activity name")};
      if (is_keyword(peek(), "encapsulated")) {
        next();
        a.kind = ActivityKind::encapsulated;
      } else if (is_keyword(peek(), "manual")) {
        next();
        a.kind = ActivityKind::manual;
      }
      return {std::move(a), at};
    }
    if (kw == "interact") {
      InteractionPoint ip;
      ip.interaction = ident("interaction name");
      const Token& side = expect(Tok::ident, "'initiate' or 'respond'");
      if (side.text == "initiate") ip.side = Side::initiator;
      else if (side.text == "respond") ip.side = Side::responder;
      else throw SyntaxError("expected 'initiate' or 'respond', found " + describe(side), side);
      if (ip.side == Side::responder && peek().kind == Tok::lbrace) ip.before_reply = block();
      return {std::move(ip), at};
    }
    if (kw == "state") return {StateMark{ident("state name")}, at};
    if (kw == "event") return {ExternalEvent{ident("event name")}, at};
    if (kw == "goto") return {LoopBack{ident("state name")}, at};
    if (kw == "stop") return {Stop{}, at};
    if (kw == "goal") return {Goal{ident("goal name")}, at};
    if (kw == "case") {
      Case c;
      c.scrutinee = ident("case field");
      expect(Tok::lbrace, "'{'");
      while (is_keyword(peek(), "when")) {
        next();
        CaseBranch b;
        b.value = expect(Tok::string, "case value string").text;
        b.body = block();
        c.branches.push_back(std::move(b));
      }
      if (c.branches.empty()) throw SyntaxError("expected 'when', found " + describe(peek()), peek());
      if (is_keyword(peek(), "else")) {
        next();
        c.otherwise = block();
      }
      expect(Tok::rbrace, "'}' closing the case");
      return {std::move(c), at};
    }
    if (kw == "part") {
      Part p;
      expect(Tok::lbrace, "'{'");
      while (is_keyword(peek(), "thread")) {
        next();
        p.threads.push_back(block());
      }
      if (p.threads.empty()) throw SyntaxError("expected 'thread', found " + describe(peek()), peek());
      expect(Tok::rbrace, "'}' closing the part");
      return {std::move(p), at};
    }
    throw SyntaxError("unknown node keyword '" + kw + "'", head);
  }

  std::vector<Token> toks_;
  std::string file_;
  std::size_t pos_ = 0;
};

}  // namespace

ParseResult parse_rad(std::string_view text, std::string file) {
  ParseResult result;
  auto tokens = Lexer(text).run(result.diagnostics, file);
  auto model = Parser(std::move(tokens), std::move(file)).run(result.diagnostics);
  if (!has_errors(result.diagnostics)) result.model = std::move(model);
  return result;
}

}  // namespace radpi::rad
