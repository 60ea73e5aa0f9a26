#include "safefault/bench.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "safefault/errors.hpp"

namespace safefault {

namespace {

enum class Tok { Name, LParen, RParen, Comma, Equals, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_blank();
    if (pos_ >= text_.size()) return {Tok::End, {}, line_, column()};
    const std::size_t line = line_, col = column();
    const char c = text_[pos_];
    auto single = [&](Tok kind) {
      ++pos_;
      return Token{kind, std::string(1, c), line, col};
    };
    switch (c) {
      case '(': return single(Tok::LParen);
      case ')': return single(Tok::RParen);
      case ',': return single(Tok::Comma);
      case '=': return single(Tok::Equals);
      default: break;
    }
    if (!is_name_char(c)) {
      throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
    return {Tok::Name, std::string(text_.substr(start, pos_ - start)), line, col};
  }

 private:
  void skip_blank() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (c == '\n') {
        ++pos_;
        ++line_;
        line_start_ = pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::size_t column() const { return pos_ - line_start_ + 1; }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t line_start_ = 0;
};

class BenchParser {
 public:
  explicit BenchParser(std::string_view text) : lexer_(text) { advance(); }

  Netlist run() {
    while (current_.kind != Tok::End) statement();
    finish();
    return std::move(netlist_);
  }

 private:
  struct Reference {
    std::size_t line;
    std::size_t column;
  };

  void advance() { current_ = lexer_.next(); }

  Token expect(Tok kind, const char* what) {
    if (current_.kind != kind) {
      const std::string got = current_.kind == Tok::End ? "end of input" : "'" + current_.text + "'";
      throw ParseError(std::string("expected ") + what + ", got " + got, current_.line,
                       current_.column, current_.text);
    }
    Token t = current_;
    advance();
    return t;
  }

  NetId reference(const Token& name) {
    const NetId id = netlist_.net_or_add(name.text);
    if (id >= first_use_.size()) first_use_.resize(id + 1, {0, 0});
    if (first_use_[id].line == 0) first_use_[id] = {name.line, name.column};
    if (id >= driven_.size()) driven_.resize(id + 1, false);
    return id;
  }

  void statement() {
    Token head = expect(Tok::Name, "a declaration or net name");
    if (current_.kind == Tok::LParen && (head.text == "INPUT" || head.text == "OUTPUT")) {
      advance();
      Token name = expect(Tok::Name, "a net name");
      expect(Tok::RParen, "')'");
      declare_port(head.text == "INPUT", name);
      return;
    }
    expect(Tok::Equals, "'='");
    Token kind_tok = expect(Tok::Name, "a gate kind");
    auto kind = parse_gate_kind(kind_tok.text);
    if (!kind) {
      throw ParseError("unknown gate kind " + kind_tok.text, kind_tok.line, kind_tok.column,
                       kind_tok.text);
    }
    expect(Tok::LParen, "'('");
    std::vector<NetId> inputs;
    inputs.push_back(reference(expect(Tok::Name, "a net name")));
    while (current_.kind == Tok::Comma) {
      advance();
      inputs.push_back(reference(expect(Tok::Name, "a net name")));
    }
    expect(Tok::RParen, "')'");

    if (is_single_input(*kind) ? inputs.size() != 1 : inputs.size() < 2) {
      const std::string need = is_single_input(*kind) ? "exactly 1 input" : "at least 2 inputs";
      throw ParseError(std::string(to_string(*kind)) + " gate " + head.text + " requires " + need,
                       head.line, head.column, head.text);
    }
    const NetId out = reference(head);
    drive(out, head);
    netlist_.add_gate(*kind, std::move(inputs), out);
  }

  void declare_port(bool is_input, const Token& name) {
    const NetId id = reference(name);
    auto& seen = is_input ? declared_inputs_ : declared_outputs_;
    if (!seen.insert(id).second) {
      throw ParseError("duplicate net name " + name.text, name.line, name.column, name.text);
    }
    if (is_input) {
      drive(id, name);
      netlist_.add_primary_input(id);
    } else {
      netlist_.add_primary_output(id);
    }
  }

  void drive(NetId id, const Token& at) {
    if (driven_[id]) {
      throw ParseError("multiply-driven net " + at.text, at.line, at.column, at.text);
    }
    driven_[id] = true;
  }

  void finish() {
    for (NetId id = 0; id < netlist_.net_count(); ++id) {
      if (!driven_[id]) {
        throw ParseError("undriven net " + netlist_.net_name(id), first_use_[id].line,
                         first_use_[id].column, netlist_.net_name(id));
      }
    }
    // Remaining structural rules (cycles) are the validator's business.
    auto violations = validate(netlist_);
    if (!violations.empty()) throw ParseError(violations.front(), 0, 0);
  }

  Lexer lexer_;
  Token current_{Tok::End, {}, 0, 0};
  Netlist netlist_;
  std::vector<Reference> first_use_;
  std::vector<bool> driven_;
  std::unordered_set<NetId> declared_inputs_;
  std::unordered_set<NetId> declared_outputs_;
};

}  // namespace

Netlist parse_bench(std::string_view text) { return BenchParser(text).run(); }

Netlist read_bench_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open netlist file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_bench(buffer.str());
}

std::string write_bench(const Netlist& netlist) {
  std::ostringstream out;
  for (NetId pi : netlist.primary_inputs()) out << "INPUT(" << netlist.net_name(pi) << ")\n";
  for (NetId po : netlist.primary_outputs()) out << "OUTPUT(" << netlist.net_name(po) << ")\n";
  if (netlist.gate_count() > 0) out << '\n';
  for (const Gate& g : netlist.gates()) {
    out << netlist.net_name(g.output) << " = " << to_string(g.kind) << '(';
    for (std::size_t i = 0; i < g.inputs.size(); ++i) {
      if (i) out << ", ";
      out << netlist.net_name(g.inputs[i]);
    }
    out << ")\n";
  }
  return out.str();
}

}  // namespace safefault
