#include "safefault/constraints.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "safefault/errors.hpp"

namespace safefault {

namespace {

struct Token {
  std::string text;  // empty at end of input
  std::size_t line;
  std::size_t column;
};

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == ':';
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t line = 1, line_start = 0, i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      line_start = ++i;
    } else if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (std::string_view("{}(),=").find(c) != std::string_view::npos) {
      tokens.push_back({std::string(1, c), line, i - line_start + 1});
      ++i;
    } else if (is_word_char(c)) {
      const std::size_t start = i;
      while (i < text.size() && is_word_char(text[i])) ++i;
      tokens.push_back({std::string(text.substr(start, i - start)), line, start - line_start + 1});
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line,
                       i - line_start + 1);
    }
  }
  tokens.push_back({"", line, i - line_start + 1});
  return tokens;
}

class ConstraintParser {
 public:
  explicit ConstraintParser(std::string_view text) : tokens_(tokenize(text)) {}

  std::vector<ConstraintSet> run() {
    std::vector<ConstraintSet> sets;
    while (!at_end()) sets.push_back(parse_set());
    return sets;
  }

 private:
  bool at_end() const { return tokens_[pos_].text.empty(); }
  const Token& peek() const { return tokens_[pos_]; }

  [[noreturn]] void fail(const std::string& message, const Token& at) const {
    throw ParseError(message, at.line, at.column, at.text);
  }

  const Token& take() {
    if (at_end()) fail("unexpected end of input", peek());
    return tokens_[pos_++];
  }

  void expect(std::string_view text) {
    const Token& t = peek();
    if (t.text != text) {
      fail("expected '" + std::string(text) + "', got " +
               (t.text.empty() ? std::string("end of input") : "'" + t.text + "'"),
           t);
    }
    ++pos_;
  }

  const Token& name() {
    const Token& t = take();
    if (!is_word_char(t.text.front())) fail("expected a net name, got '" + t.text + "'", t);
    return t;
  }

  ConstraintSet parse_set() {
    expect("set");
    const Token& keyword = take();
    auto category = Category::parse(keyword.text);
    if (!category) fail("unknown category " + keyword.text, keyword);
    ConstraintSet set{category->keyword(), *category, {}};
    const Token& open = peek();
    expect("{");
    while (peek().text != "}") {
      const Token& entry = take();
      if (entry.text == "fix") {
        set.constraints.push_back(parse_fix());
      } else if (entry.text == "forbid") {
        set.constraints.push_back(parse_forbid());
      } else {
        fail("expected 'fix', 'forbid' or '}', got '" + entry.text + "'", entry);
      }
    }
    expect("}");
    if (set.constraints.empty()) fail("constraint set " + set.name + " is empty", open);
    return set;
  }

  Fix parse_fix() {
    const Token& net = name();
    expect("=");
    const Token& value = take();
    if (value.text != "0" && value.text != "1") fail("fix value must be 0 or 1", value);
    if (!fixed_.insert(net.text).second) fail("duplicate fix for net " + net.text, net);
    return {net.text, value.text == "1"};
  }

  Forbid parse_forbid() {
    Forbid forbid;
    expect("(");
    forbid.nets.push_back(name().text);
    while (peek().text == ",") {
      ++pos_;
      forbid.nets.push_back(name().text);
    }
    expect(")");
    expect("in");
    expect("{");
    forbid.cubes.push_back(cube(forbid.nets.size()));
    while (peek().text == ",") {
      ++pos_;
      forbid.cubes.push_back(cube(forbid.nets.size()));
    }
    expect("}");
    return forbid;
  }

  std::string cube(std::size_t width) {
    const Token& t = take();
    std::string out = t.text;
    for (char& c : out) {
      if (c == 'x') c = 'X';
      if (c != '0' && c != '1' && c != 'X') fail("malformed cube " + t.text, t);
    }
    if (out.size() != width) {
      fail("cube " + t.text + " has " + std::to_string(out.size()) + " positions, expected " +
               std::to_string(width),
           t);
    }
    return out;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::set<std::string> fixed_;
};

NetId resolve(const AugmentedNetlist& a, const std::string& name) {
  auto id = a.base().core().find_net(name);
  if (!id) throw InputError("constraint references unknown net " + name);
  return *id;
}

}  // namespace

std::vector<ConstraintSet> parse_constraints(std::string_view text) {
  return ConstraintParser(text).run();
}

std::vector<ConstraintSet> read_constraints_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open constraint file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_constraints(buffer.str());
}

AugmentedNetlist::AugmentedNetlist(std::shared_ptr<const ScanNetlist> base)
    : base_(std::move(base)) {}

const std::string& AugmentedNetlist::net_name(NetId id) const {
  if (is_monitor_net(id)) return added_names_.at(id - base_->net_count());
  return base_->core().net_name(id);
}

NetId AugmentedNetlist::add_monitor_gate(GateKind kind, std::vector<NetId> inputs) {
  const auto id = static_cast<NetId>(net_count());
  added_names_.push_back("$monitor" + std::to_string(added_gates_.size()));
  added_gates_.push_back({kind, std::move(inputs), id});
  return id;
}

void AugmentedNetlist::tie(NetId net, bool value) {
  auto [it, fresh] = tied_.emplace(net, value);
  if (!fresh && it->second != value) {
    throw InputError("conflicting constraint on " + net_name(net));
  }
}

AugmentedNetlist apply_fix(AugmentedNetlist augmented, const Fix& fix) {
  augmented.tie(resolve(augmented, fix.net), fix.value);
  return augmented;
}

AugmentedNetlist build_monitor(AugmentedNetlist augmented, const Forbid& forbid) {
  if (forbid.cubes.empty()) throw InputError("forbid constraint without cubes");
  std::vector<NetId> nets;
  for (const auto& name : forbid.nets) nets.push_back(resolve(augmented, name));

  std::map<NetId, NetId> inverted;
  auto literal = [&](NetId net, char c) {
    if (c == '1') return net;
    auto it = inverted.find(net);
    if (it == inverted.end()) {
      it = inverted.emplace(net, augmented.add_monitor_gate(GateKind::Not, {net})).first;
    }
    return it->second;
  };

  std::vector<NetId> detectors;
  for (const auto& cube : forbid.cubes) {
    if (cube.size() != nets.size()) {
      throw InputError("cube " + cube + " does not match " + std::to_string(nets.size()) +
                       " nets");
    }
    std::vector<NetId> terms;
    for (std::size_t i = 0; i < cube.size(); ++i) {
      const char c = cube[i];
      if (c == 'X' || c == 'x') continue;
      if (c != '0' && c != '1') throw InputError("malformed cube " + cube);
      terms.push_back(literal(nets[i], c));
    }
    if (terms.empty()) throw InputError("cube " + cube + " is all don't-care");
    if (terms.size() == 1) {
      // A lone inverted literal already is a detector gate; a plain one needs a buffer.
      const bool is_gate = augmented.is_monitor_net(terms.front());
      detectors.push_back(is_gate ? terms.front()
                                  : augmented.add_monitor_gate(GateKind::Buf, {terms.front()}));
    } else {
      detectors.push_back(augmented.add_monitor_gate(GateKind::And, std::move(terms)));
    }
  }
  const NetId out = detectors.size() == 1
                        ? detectors.front()
                        : augmented.add_monitor_gate(GateKind::Or, std::move(detectors));
  augmented.add_monitor_output(out);
  return augmented;
}

AugmentedNetlist apply_constraint(AugmentedNetlist augmented, const Constraint& constraint) {
  if (const auto* fix = std::get_if<Fix>(&constraint)) return apply_fix(std::move(augmented), *fix);
  return build_monitor(std::move(augmented), std::get<Forbid>(constraint));
}

AugmentedNetlist augment(std::shared_ptr<const ScanNetlist> base,
                         std::span<const ConstraintSet> sets) {
  AugmentedNetlist augmented(std::move(base));
  for (const auto& set : sets) {
    for (const auto& c : set.constraints) augmented = apply_constraint(std::move(augmented), c);
  }
  return augmented;
}

void evaluate_monitors(const AugmentedNetlist& augmented, std::vector<Word>& values) {
  std::vector<Word> operands;
  for (const Gate& g : augmented.added_gates()) {
    operands.clear();
    for (NetId in : g.inputs) operands.push_back(values[in]);
    values[g.output] = eval_gate(g.kind, operands);
  }
}

Word admissible_mask(const AugmentedNetlist& augmented, std::span<const Word> values) {
  Word mask = ~Word{0};
  for (const auto& [net, value] : augmented.tied_nets()) mask &= value ? values[net] : ~values[net];
  for (NetId m : augmented.monitor_outputs()) mask &= ~values[m];
  return mask;
}

std::vector<Word> simulate_augmented(const AugmentedNetlist& augmented,
                                     std::span<const Word> input_words) {
  auto values = simulate_words(augmented.base(), input_words);
  values.resize(augmented.net_count(), 0);
  evaluate_monitors(augmented, values);
  return values;
}

bool is_admissible(const AugmentedNetlist& augmented, const TestPattern& pattern) {
  const auto values = simulate_augmented(augmented, pattern_words(pattern));
  return (admissible_mask(augmented, values) & 1) != 0;
}

}  // namespace safefault
