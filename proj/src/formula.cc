#include "sifkit/formula.h"

#include <algorithm>
#include <set>
#include <tuple>
#include <unordered_map>

#include "sifkit/error.h"
#include "sifkit/utf8.h"

namespace sifkit {

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Command: return "Command";
    case TokenKind::Symbol: return "Symbol";
    case TokenKind::Number: return "Number";
    case TokenKind::Operator: return "Operator";
    case TokenKind::Brace: return "Brace";
    case TokenKind::Structure: return "Structure";
  }
  return "?";
}

std::string_view to_string(AstKind kind) {
  switch (kind) {
    case AstKind::Command: return "Command";
    case AstKind::Group: return "Group";
    case AstKind::Symbol: return "Symbol";
    case AstKind::Number: return "Number";
    case AstKind::Operator: return "Operator";
    case AstKind::Sup: return "Sup";
    case AstKind::Sub: return "Sub";
  }
  return "?";
}

std::string_view to_string(EdgeType type) {
  return type == EdgeType::ParentChild ? "ParentChild" : "SameSymbol";
}

// ---------------------------------------------------------------------------
// Lexer

std::vector<FormulaToken> linear_tokenize(std::string_view s) {
  std::vector<FormulaToken> out;
  std::size_t i = 0;
  const std::size_t n = s.size();
  while (i < n) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (utf8::is_ascii_space(c)) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (c == '\\') {
      if (i + 1 >= n) throw Error(ErrorCode::LexError, "stray '\\' at end of formula", std::nullopt, i);
      const auto next = static_cast<unsigned char>(s[i + 1]);
      if (utf8::is_ascii_letter(next)) {
        i += 2;
        while (i < n && utf8::is_ascii_letter(static_cast<unsigned char>(s[i]))) ++i;
        if (s.substr(start, i - start) == "\\FigureBase" && s.substr(i, 2) == "64") i += 2;
      } else if (next > 0x20 && next < 0x7F) {
        i += 2;
      } else {
        throw Error(ErrorCode::LexError, "'\\' must start a command", std::nullopt, i);
      }
      out.push_back({std::string(s.substr(start, i - start)), TokenKind::Command, start});
      continue;
    }
    if (utf8::is_ascii_digit(c)) {
      while (i < n && utf8::is_ascii_digit(static_cast<unsigned char>(s[i]))) ++i;
      if (i + 1 < n && s[i] == '.' && utf8::is_ascii_digit(static_cast<unsigned char>(s[i + 1]))) {
        ++i;
        while (i < n && utf8::is_ascii_digit(static_cast<unsigned char>(s[i]))) ++i;
      }
      out.push_back({std::string(s.substr(start, i - start)), TokenKind::Number, start});
      continue;
    }
    if (utf8::is_ascii_letter(c)) {
      out.push_back({std::string(1, static_cast<char>(c)), TokenKind::Symbol, start});
      ++i;
      continue;
    }
    if (c == '{' || c == '}') {
      out.push_back({std::string(1, static_cast<char>(c)), TokenKind::Brace, start});
      ++i;
      continue;
    }
    if (c == '^' || c == '_') {
      out.push_back({std::string(1, static_cast<char>(c)), TokenKind::Structure, start});
      ++i;
      continue;
    }
    if (c == '$') throw Error(ErrorCode::LexError, "unescaped '$' inside formula", std::nullopt, i);
    if (c < 0x20 || c == 0x7F) throw Error(ErrorCode::LexError, "control character in formula", std::nullopt, i);
    if (c < 0x80) {
      out.push_back({std::string(1, static_cast<char>(c)), TokenKind::Operator, start});
      ++i;
      continue;
    }
    const auto d = utf8::decode(s, i);
    if (!d.valid) throw Error(ErrorCode::LexError, "invalid UTF-8 in formula", std::nullopt, i);
    out.push_back({std::string(s.substr(i, d.len)), TokenKind::Symbol, start});
    i += d.len;
  }
  return out;
}

std::vector<std::string> token_texts(const std::vector<FormulaToken>& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.text);
  return out;
}

// ---------------------------------------------------------------------------
// Operator tables

const std::map<std::string, CommandArity, std::less<>>& command_arity_table() {
  static const std::map<std::string, CommandArity, std::less<>> table = {
      {"\\frac", {2, false}},      {"\\dfrac", {2, false}},     {"\\tfrac", {2, false}},
      {"\\cfrac", {2, false}},     {"\\binom", {2, false}},     {"\\sqrt", {1, true}},
      {"\\textf", {1, false}},     {"\\text", {1, false}},      {"\\mathrm", {1, false}},
      {"\\mathbf", {1, false}},    {"\\mathit", {1, false}},    {"\\mathbb", {1, false}},
      {"\\mathcal", {1, false}},   {"\\boldsymbol", {1, false}}, {"\\operatorname", {1, false}},
      {"\\textbf", {1, false}},    {"\\overline", {1, false}},  {"\\underline", {1, false}},
      {"\\vec", {1, false}},       {"\\hat", {1, false}},       {"\\bar", {1, false}},
      {"\\dot", {1, false}},       {"\\ddot", {1, false}},      {"\\tilde", {1, false}},
      {"\\widehat", {1, false}},   {"\\overrightarrow", {1, false}},
      {"\\overleftarrow", {1, false}}, {"\\begin", {1, false}}, {"\\end", {1, false}},
      {"\\overset", {2, false}},   {"\\underset", {2, false}},  {"\\stackrel", {2, false}},
  };
  return table;
}

namespace {

constexpr int kNoLevel = -1;

int binary_level(std::string_view op) {
  static const std::unordered_map<std::string_view, int> levels = [] {
    std::unordered_map<std::string_view, int> m;
    m["\\\\"] = 0;
    m["&"] = 1;
    for (auto s : {",", ";"}) m[s] = 2;
    for (auto s : {"=", "<", ">", ":", "\\le", "\\leq", "\\ge", "\\geq", "\\ne", "\\neq", "\\approx",
                   "\\equiv", "\\sim", "\\simeq", "\\cong", "\\propto", "\\in", "\\notin", "\\ni",
                   "\\subset", "\\subseteq", "\\supset", "\\supseteq", "\\subsetneqq", "\\perp",
                   "\\parallel", "\\to", "\\rightarrow", "\\leftarrow", "\\Rightarrow", "\\Leftarrow",
                   "\\Leftrightarrow", "\\leftrightarrow", "\\iff", "\\implies", "\\mid", "\\gets",
                   "\\ll", "\\gg", "\\leqslant", "\\geqslant", "\\triangleq"})
      m[s] = 3;
    for (auto s : {"+", "-", "\\pm", "\\mp", "\\cup", "\\cap", "\\setminus", "\\oplus", "\\vee",
                   "\\wedge", "\\land", "\\lor"})
      m[s] = 4;
    for (auto s : {"*", "/", "\\times", "\\cdot", "\\div", "\\otimes", "\\ast"}) m[s] = 5;
    return m;
  }();
  auto it = levels.find(op);
  return it == levels.end() ? kNoLevel : it->second;
}

bool is_unary(std::string_view op) {
  return op == "-" || op == "+" || op == "\\pm" || op == "\\mp" || op == "\\neg" || op == "\\lnot";
}

bool is_operator_label(std::string_view op) { return binary_level(op) != kNoLevel || is_unary(op); }

bool is_opener(std::string_view t) { return t == "(" || t == "["; }
bool is_closer(std::string_view t) { return t == ")" || t == "]"; }

bool is_delim_pair(std::string_view label) {
  return label.size() == 2 && is_opener(label.substr(0, 1)) && is_closer(label.substr(1, 1));
}

bool is_left_label(std::string_view label) {
  return label.starts_with("\\left") && label.find("\\right") != std::string_view::npos;
}

AstNode leaf(std::string label, AstKind kind) { return AstNode{std::move(label), kind, {}}; }

AstNode empty_group() { return AstNode{"{}", AstKind::Group, {}}; }

bool is_empty_group(const AstNode& n) { return n.kind == AstKind::Group && n.children.empty(); }

// ---------------------------------------------------------------------------
// Parser

struct Item {
  bool is_op = false;
  AstNode node;  // operand node, or Operator leaf for operators
};

enum class Stop { End, CloseBrace, Right, OptClose, Closer };

struct Context {
  bool in_delim = false;
  bool optional_close = false;
};

class Parser {
 public:
  explicit Parser(std::vector<FormulaToken> tokens) : toks_(std::move(tokens)) {}

  AstNode parse_top() {
    std::vector<Item> items;
    Stop stop = parse_items({}, items);
    if (stop == Stop::CloseBrace)
      throw Error(ErrorCode::UnbalancedBrace, "unmatched '}'", std::nullopt, toks_[pos_].offset);
    if (stop == Stop::Right)
      throw Error(ErrorCode::UnknownStructure, "\\right without \\left", std::nullopt, toks_[pos_].offset);
    return build_expr(items);
  }

 private:
  bool at_end() const { return pos_ >= toks_.size(); }
  const FormulaToken& peek() const { return toks_[pos_]; }
  std::size_t offset_here() const { return at_end() ? source_end() : peek().offset; }
  std::size_t source_end() const {
    return toks_.empty() ? 0 : toks_.back().offset + toks_.back().text.size();
  }

  Stop parse_items(Context ctx, std::vector<Item>& items) {
    while (!at_end()) {
      const FormulaToken& t = peek();
      if (t.kind == TokenKind::Brace && t.text == "}") return Stop::CloseBrace;
      if (t.kind == TokenKind::Command && t.text == "\\right") return Stop::Right;
      if (t.kind == TokenKind::Operator && is_closer(t.text)) {
        if (ctx.in_delim) return Stop::Closer;
        if (ctx.optional_close && t.text == "]") return Stop::OptClose;
        items.push_back({false, leaf(t.text, AstKind::Operator)});
        ++pos_;
        continue;
      }
      if (t.kind == TokenKind::Structure) {
        parse_script(items);
        continue;
      }
      if (t.kind == TokenKind::Operator && is_opener(t.text)) {
        parse_delimited(items);
        continue;
      }
      if (t.kind == TokenKind::Operator || (t.kind == TokenKind::Command && is_operator_label(t.text))) {
        if (is_operator_label(t.text)) items.push_back({true, leaf(t.text, AstKind::Operator)});
        else items.push_back({false, leaf(t.text, AstKind::Operator)});
        ++pos_;
        continue;
      }
      items.push_back({false, parse_atom()});
    }
    return Stop::End;
  }

  // Operand atom: group, number, symbol, command with its arguments, or a
  // \left..\right block.
  AstNode parse_atom() {
    const FormulaToken& t = peek();
    if (t.kind == TokenKind::Brace) return parse_brace();
    if (t.kind == TokenKind::Number) {
      ++pos_;
      return leaf(t.text, AstKind::Number);
    }
    if (t.kind == TokenKind::Symbol) {
      ++pos_;
      return leaf(t.text, AstKind::Symbol);
    }
    if (t.kind == TokenKind::Command) {
      if (t.text == "\\left") return parse_left();
      const auto& table = command_arity_table();
      auto it = table.find(t.text);
      if (it == table.end()) {
        ++pos_;
        return leaf(t.text, AstKind::Symbol);
      }
      const std::size_t cmd_offset = t.offset;
      AstNode node{t.text, AstKind::Command, {}};
      ++pos_;
      if (it->second.optional && !at_end() && peek().kind == TokenKind::Operator && peek().text == "[") {
        const std::size_t open = peek().offset;
        ++pos_;
        std::vector<Item> items;
        Stop stop = parse_items({false, true}, items);
        if (stop != Stop::OptClose)
          throw Error(ErrorCode::UnknownStructure, "unterminated optional argument", std::nullopt, open);
        ++pos_;
        node.children.push_back(build_expr(items));
      }
      for (int k = 0; k < it->second.required; ++k) {
        auto arg = parse_argument();
        if (!arg)
          throw Error(ErrorCode::MissingArgument,
                      node.label + " expects " + std::to_string(it->second.required) + " argument(s)",
                      std::nullopt, cmd_offset);
        node.children.push_back(std::move(*arg));
      }
      return node;
    }
    throw Error(ErrorCode::UnknownStructure, "unexpected token '" + t.text + "'", std::nullopt, t.offset);
  }

  // A command argument: a braced group or a single operand token.
  std::optional<AstNode> parse_argument() {
    if (at_end()) return std::nullopt;
    const FormulaToken& t = peek();
    if (t.kind == TokenKind::Brace) {
      if (t.text == "}") return std::nullopt;
      return parse_brace();
    }
    if (t.kind == TokenKind::Number || t.kind == TokenKind::Symbol) return parse_atom();
    if (t.kind == TokenKind::Command && t.text != "\\right" && !is_operator_label(t.text)) return parse_atom();
    return std::nullopt;
  }

  // A script argument additionally accepts a bare operator (x^- or x^\pm).
  std::optional<AstNode> parse_script_argument() {
    if (at_end()) return std::nullopt;
    const FormulaToken& t = peek();
    if (t.kind == TokenKind::Operator || (t.kind == TokenKind::Command && is_operator_label(t.text))) {
      ++pos_;
      return leaf(t.text, AstKind::Operator);
    }
    return parse_argument();
  }

  AstNode parse_brace() {
    const std::size_t open = peek().offset;
    ++pos_;
    std::vector<Item> items;
    Stop stop = parse_items({}, items);
    if (stop == Stop::End) throw Error(ErrorCode::UnbalancedBrace, "unmatched '{'", std::nullopt, open);
    if (stop != Stop::CloseBrace)
      throw Error(ErrorCode::UnknownStructure, "\\right inside a group without \\left", std::nullopt,
                  peek().offset);
    ++pos_;
    AstNode inner = build_expr(items);
    if (is_empty_group(inner)) return inner;
    return AstNode{"{}", AstKind::Group, {std::move(inner)}};
  }

  AstNode parse_left() {
    const std::size_t open = peek().offset;
    ++pos_;
    if (at_end() || peek().kind == TokenKind::Brace)
      throw Error(ErrorCode::UnknownStructure, "\\left needs a delimiter", std::nullopt, open);
    std::string label = "\\left" + peek().text;
    ++pos_;
    std::vector<Item> items;
    Stop stop = parse_items({}, items);
    if (stop != Stop::Right)
      throw Error(ErrorCode::UnknownStructure, "\\left without matching \\right", std::nullopt, open);
    const std::size_t right = peek().offset;
    ++pos_;
    if (at_end() || peek().kind == TokenKind::Brace)
      throw Error(ErrorCode::UnknownStructure, "\\right needs a delimiter", std::nullopt, right);
    label += "\\right" + peek().text;
    ++pos_;
    return AstNode{std::move(label), AstKind::Command, {build_expr(items)}};
  }

  void parse_delimited(std::vector<Item>& items) {
    const std::string opener = peek().text;
    ++pos_;
    std::vector<Item> inner;
    Stop stop = parse_items({true, false}, inner);
    if (stop == Stop::Closer) {
      const std::string closer = peek().text;
      ++pos_;
      items.push_back({false, AstNode{opener + closer, AstKind::Operator, {build_expr(inner)}}});
      return;
    }
    // No closer in this scope: the opener is an ordinary leaf.
    items.push_back({false, leaf(opener, AstKind::Operator)});
    for (auto& it : inner) items.push_back(std::move(it));
  }

  void parse_script(std::vector<Item>& items) {
    const FormulaToken& t = peek();
    const std::size_t at = t.offset;
    const bool sup = t.text == "^";
    ++pos_;
    AstNode base = empty_group();
    if (!items.empty() && !items.back().is_op) {
      base = std::move(items.back().node);
      items.pop_back();
    }
    auto script = parse_script_argument();
    if (!script) throw Error(ErrorCode::MissingArgument, std::string(sup ? "^" : "_") + " expects a script", std::nullopt, at);
    items.push_back({false, AstNode{sup ? "^" : "_", sup ? AstKind::Sup : AstKind::Sub,
                                    {std::move(base), std::move(*script)}}});
  }

  // Precedence climbing over the item list; falls back to a flat group.
  static AstNode build_expr(std::vector<Item>& items) {
    if (items.empty()) return empty_group();
    std::size_t i = 0;
    bool fail = false;
    AstNode tree = climb(items, i, 0, fail);
    if (!fail && i == items.size()) return tree;
    if (items.size() == 1) return std::move(items[0].node);
    AstNode group{"{}", AstKind::Group, {}};
    for (auto& it : items) group.children.push_back(std::move(it.node));
    return group;
  }

  static AstNode climb(const std::vector<Item>& items, std::size_t& i, int min_level, bool& fail) {
    AstNode left = unary(items, i, fail);
    if (fail) return left;
    while (i < items.size() && items[i].is_op) {
      const int level = binary_level(items[i].node.label);
      if (level == kNoLevel || level < min_level) break;
      std::string op = items[i].node.label;
      ++i;
      AstNode right = climb(items, i, level + 1, fail);
      if (fail) return left;
      left = AstNode{std::move(op), AstKind::Operator, {std::move(left), std::move(right)}};
    }
    return left;
  }

  static AstNode unary(const std::vector<Item>& items, std::size_t& i, bool& fail) {
    if (i < items.size() && items[i].is_op) {
      if (!is_unary(items[i].node.label)) {
        fail = true;
        return {};
      }
      std::string op = items[i].node.label;
      ++i;
      AstNode operand = unary(items, i, fail);
      if (fail) return {};
      return AstNode{std::move(op), AstKind::Operator, {std::move(operand)}};
    }
    std::vector<AstNode> run;
    while (i < items.size() && !items[i].is_op) run.push_back(items[i++].node);
    if (run.empty()) {
      fail = true;
      return {};
    }
    if (run.size() == 1) return std::move(run[0]);
    return AstNode{"{}", AstKind::Group, std::move(run)};
  }

  std::vector<FormulaToken> toks_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Serialization

TokenKind label_token_kind(const AstNode& n) {
  switch (n.kind) {
    case AstKind::Sup:
    case AstKind::Sub:
    case AstKind::Group: return TokenKind::Structure;
    case AstKind::Number: return TokenKind::Number;
    case AstKind::Command: return is_left_label(n.label) ? TokenKind::Structure : TokenKind::Command;
    case AstKind::Operator:
      if (is_delim_pair(n.label) && n.children.size() == 1) return TokenKind::Structure;
      return n.label.starts_with('\\') ? TokenKind::Command : TokenKind::Operator;
    case AstKind::Symbol: return n.label.starts_with('\\') ? TokenKind::Command : TokenKind::Symbol;
  }
  return TokenKind::Symbol;
}

void serialize(const AstNode& n, std::vector<FormulaToken>& out) {
  out.push_back({n.label, label_token_kind(n), 0});
  for (const auto& c : n.children) {
    out.push_back({"{", TokenKind::Brace, 0});
    serialize(c, out);
    out.push_back({"}", TokenKind::Brace, 0});
  }
}

struct PlainTree {
  std::string label;
  std::vector<PlainTree> children;
};

PlainTree read_prefix(const std::vector<std::string>& toks, std::size_t& i) {
  if (i >= toks.size() || toks[i] == "{" || toks[i] == "}")
    throw Error(ErrorCode::UnknownStructure, "expected a node label", i);
  PlainTree t{toks[i++], {}};
  while (i < toks.size() && toks[i] == "{") {
    ++i;
    t.children.push_back(read_prefix(toks, i));
    if (i >= toks.size() || toks[i] != "}") throw Error(ErrorCode::UnknownStructure, "expected '}'", i);
    ++i;
  }
  return t;
}

std::string print(const PlainTree& t);

std::string wrapped(const PlainTree& t) { return "{" + print(t) + "}"; }

std::string print(const PlainTree& t) {
  const auto n = t.children.size();
  const std::string& l = t.label;
  if (l == "{}") {
    std::string out;
    for (const auto& c : t.children) out += wrapped(c);
    return out;
  }
  if (n == 0) return l;
  if ((l == "^" || l == "_") && n == 2) return wrapped(t.children[0]) + l + wrapped(t.children[1]);
  if (is_left_label(l) && n == 1) {
    const auto r = l.rfind("\\right");
    return "\\left " + l.substr(5, r - 5) + " " + wrapped(t.children[0]) + "\\right " + l.substr(r + 6);
  }
  if (is_delim_pair(l) && n == 1) return l.substr(0, 1) + wrapped(t.children[0]) + l.substr(1, 1);
  if (n == 2 && binary_level(l) != kNoLevel) return wrapped(t.children[0]) + l + wrapped(t.children[1]);
  if (n == 1 && is_unary(l)) return l + wrapped(t.children[0]);
  if (l == "\\sqrt" && n == 2) return "\\sqrt[" + wrapped(t.children[0]) + "]" + wrapped(t.children[1]);
  std::string out = l;
  for (const auto& c : t.children) out += wrapped(c);
  return out;
}

}  // namespace

std::size_t AstNode::node_count() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.node_count();
  return n;
}

FormulaAst parse_formula(std::string_view latex) {
  Parser p(linear_tokenize(latex));
  return FormulaAst{p.parse_top()};
}

AstNode canonicalize(const AstNode& node) {
  if (node.kind == AstKind::Group && node.children.size() == 1) return canonicalize(node.children[0]);
  AstNode out{node.label, node.kind, {}};
  out.children.reserve(node.children.size());
  for (const auto& c : node.children) out.children.push_back(canonicalize(c));
  return out;
}

bool isomorphic(const FormulaAst& a, const FormulaAst& b) {
  return canonicalize(a.root) == canonicalize(b.root);
}

std::vector<FormulaToken> ast_tokenize(const FormulaAst& ast) {
  std::vector<FormulaToken> out;
  serialize(canonicalize(ast.root), out);
  return out;
}

std::string detokenize(const std::vector<std::string>& tokens) {
  std::size_t i = 0;
  PlainTree t = read_prefix(tokens, i);
  if (i != tokens.size()) throw Error(ErrorCode::UnknownStructure, "trailing tokens after root", i);
  return print(t);
}

FormulaForest group_parse(const std::vector<std::string>& formulas) {
  FormulaForest forest;
  std::vector<Error> failures;
  for (std::size_t i = 0; i < formulas.size(); ++i) {
    try {
      forest.trees.push_back(parse_formula(formulas[i]));
    } catch (const Error& e) {
      failures.emplace_back(e.code(), e.detail(), i, e.offset());
    }
  }
  if (!failures.empty()) throw AggregateError(std::move(failures));
  return forest;
}

std::size_t FormulaGraph::count(EdgeType type) const {
  return static_cast<std::size_t>(
      std::count_if(edges.begin(), edges.end(), [type](const GraphEdge& e) { return e.type == type; }));
}

namespace {

void add_tree(const AstNode& n, std::size_t tree, std::optional<std::size_t> parent, FormulaGraph& g,
              std::map<std::string, std::vector<std::size_t>>& symbols) {
  const std::size_t id = g.nodes.size();
  g.nodes.push_back({id, n.label, n.kind, tree});
  if (parent) g.edges.push_back({*parent, id, EdgeType::ParentChild});
  if (n.kind == AstKind::Symbol && n.children.empty()) symbols[n.label].push_back(id);
  for (const auto& c : n.children) add_tree(c, tree, id, g, symbols);
}

}  // namespace

FormulaGraph build_graph(const FormulaForest& forest) {
  FormulaGraph g;
  std::map<std::string, std::vector<std::size_t>> symbols;
  for (std::size_t t = 0; t < forest.trees.size(); ++t) add_tree(forest.trees[t].root, t, std::nullopt, g, symbols);
  std::vector<GraphEdge> same;
  for (const auto& [label, ids] : symbols)
    for (std::size_t a = 0; a < ids.size(); ++a)
      for (std::size_t b = a + 1; b < ids.size(); ++b) same.push_back({ids[a], ids[b], EdgeType::SameSymbol});
  std::sort(same.begin(), same.end(),
            [](const GraphEdge& x, const GraphEdge& y) { return std::tie(x.src, x.dst) < std::tie(y.src, y.dst); });
  g.edges.insert(g.edges.end(), same.begin(), same.end());
  return g;
}

nlohmann::json graph_to_json(const FormulaGraph& graph) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : graph.nodes)
    nodes.push_back({{"id", n.id}, {"label", n.label}, {"kind", to_string(n.kind)}, {"tree", n.tree}});
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : graph.edges)
    edges.push_back({{"src", e.src}, {"dst", e.dst}, {"type", to_string(e.type)}});
  return {{"nodes", nodes}, {"edges", edges}};
}

}  // namespace sifkit
