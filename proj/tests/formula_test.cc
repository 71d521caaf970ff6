#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "sifkit/error.h"
#include "sifkit/formula.h"
#include "support/corpus.h"

namespace sifkit {
namespace {

using Texts = std::vector<std::string>;

Texts lex(std::string_view f) { return token_texts(linear_tokenize(f)); }
Texts ast_texts(std::string_view f) { return token_texts(ast_tokenize(parse_formula(f))); }

ErrorCode parse_code(std::string_view f) {
  try {
    parse_formula(f);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for " << f;
  return ErrorCode::InvalidArgument;
}

std::string strip_ws(std::string_view s) {
  std::string out;
  for (char c : s)
    if (c != ' ' && c != '\t' && c != '\n' && c != '\r') out += c;
  return out;
}

TEST(Lex, Examples) {
  EXPECT_EQ(lex("\\frac{x}{2}"), (Texts{"\\frac", "{", "x", "}", "{", "2", "}"}));
  EXPECT_EQ(lex("x"), Texts{"x"});
  EXPECT_EQ(lex("x^{2}+y_{1}"), (Texts{"x", "^", "{", "2", "}", "+", "y", "_", "{", "1", "}"}));
  EXPECT_EQ(lex("12.5ab"), (Texts{"12.5", "a", "b"}));
}

TEST(Lex, Kinds) {
  const auto t = linear_tokenize("\\frac{x}{2}+y^1");
  EXPECT_EQ(t[0].kind, TokenKind::Command);
  EXPECT_EQ(t[1].kind, TokenKind::Brace);
  EXPECT_EQ(t[2].kind, TokenKind::Symbol);
  EXPECT_EQ(t[5].kind, TokenKind::Number);
  EXPECT_EQ(t[7].kind, TokenKind::Operator);
  EXPECT_EQ(t[9].kind, TokenKind::Structure);
}

TEST(Lex, Errors) {
  EXPECT_THROW(linear_tokenize("x\\"), Error);
  EXPECT_THROW(linear_tokenize("x\x01"), Error);
  try {
    linear_tokenize("ab\\");
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LexError);
    EXPECT_EQ(e.offset(), 2u);
  }
}

TEST(Lex, LosslessOnCorpus) {
  for (const auto& f : testing::formula_corpus(500, 3)) {
    std::string joined;
    for (const auto& t : lex(f)) joined += t;
    EXPECT_EQ(joined, strip_ws(f)) << f;
  }
}

TEST(Lex, CommandIntegrity) {
  std::vector<std::string> inputs = testing::formula_corpus(200, 4);
  for (const auto& [cmd, arity] : command_arity_table()) {
    std::string f = cmd;
    if (arity.optional) f += "[3]";
    for (int i = 0; i < arity.required; ++i) f += "{x}";
    inputs.push_back(f);
    inputs.push_back(f + "y");
    const auto toks = linear_tokenize(f + "y");
    ASSERT_FALSE(toks.empty());
    EXPECT_EQ(toks[0].text, cmd);
    EXPECT_EQ(toks[0].kind, TokenKind::Command);
  }
  for (const auto& f : inputs) {
    const auto toks = linear_tokenize(f);
    for (const auto& t : toks) {
      EXPECT_NE(t.text, "\\");
      if (t.kind != TokenKind::Command || t.text.size() < 2 || !std::isalpha(static_cast<unsigned char>(t.text[1])))
        continue;
      // A letter command must extend to the end of the letter run in the source.
      const std::size_t end = t.offset + t.text.size();
      EXPECT_EQ(f.compare(t.offset, t.text.size(), t.text), 0);
      if (end < f.size()) EXPECT_FALSE(std::isalpha(static_cast<unsigned char>(f[end]))) << f;
    }
  }
}

TEST(Parse, Examples) {
  const auto frac = parse_formula("\\frac{x}{2}").root;
  EXPECT_EQ(frac.kind, AstKind::Command);
  EXPECT_EQ(frac.label, "\\frac");
  ASSERT_EQ(frac.children.size(), 2u);
  EXPECT_EQ(frac.children[0].kind, AstKind::Group);
  EXPECT_EQ(frac.children[0].children, (std::vector{AstNode{"x", AstKind::Symbol, {}}}));
  EXPECT_EQ(frac.children[1].children, (std::vector{AstNode{"2", AstKind::Number, {}}}));

  EXPECT_EQ(parse_formula("x").root, (AstNode{"x", AstKind::Symbol, {}}));
  EXPECT_EQ(parse_code("\\frac{x}"), ErrorCode::MissingArgument);
  EXPECT_EQ(parse_code("{x"), ErrorCode::UnbalancedBrace);
  EXPECT_EQ(parse_code("x}"), ErrorCode::UnbalancedBrace);
}

TEST(Parse, OptionalArgumentAndScripts) {
  const auto r = canonicalize(parse_formula("\\sqrt[n]{x}").root);
  EXPECT_EQ(r.label, "\\sqrt");
  EXPECT_EQ(r.children.size(), 2u);
  const auto s = canonicalize(parse_formula("x^{2}").root);
  EXPECT_EQ(s.kind, AstKind::Sup);
  EXPECT_EQ(s.children.size(), 2u);
  const auto b = canonicalize(parse_formula("a_1").root);
  EXPECT_EQ(b.kind, AstKind::Sub);
}

void check_shape(const AstNode& n) {
  const auto& table = command_arity_table();
  if (n.kind == AstKind::Sup || n.kind == AstKind::Sub) EXPECT_EQ(n.children.size(), 2u);
  if (n.kind == AstKind::Command) {
    auto it = table.find(n.label);
    if (it != table.end()) {
      const auto k = n.children.size();
      EXPECT_TRUE(k == static_cast<std::size_t>(it->second.required) ||
                  (it->second.optional && k == static_cast<std::size_t>(it->second.required + 1)))
          << n.label;
    }
  }
  if (n.children.empty())
    EXPECT_TRUE(n.kind == AstKind::Symbol || n.kind == AstKind::Number || n.kind == AstKind::Operator ||
                n.kind == AstKind::Command || n.kind == AstKind::Group)
        << n.label;
  for (const auto& c : n.children) check_shape(c);
}

TEST(Parse, ShapesOnCorpus) {
  for (const auto& f : testing::formula_corpus(500, 5)) check_shape(parse_formula(f).root);
}

TEST(AstTokenize, Examples) {
  EXPECT_EQ(ast_texts("x^{2}"), (Texts{"^", "{", "x", "}", "{", "2", "}"}));
  EXPECT_EQ(ast_texts("x"), Texts{"x"});
  EXPECT_EQ(ast_texts("\\frac{x}{2}"), (Texts{"\\frac", "{", "x", "}", "{", "2", "}"}));
  EXPECT_EQ(ast_texts("x+y=1"), (Texts{"=", "{", "+", "{", "x", "}", "{", "y", "}", "}", "{", "1", "}"}));
  EXPECT_EQ(detokenize(ast_texts("x+y=1")), "{{x}+{y}}={1}");
}

TEST(AstTokenize, PrecedenceAndDelimiters) {
  EXPECT_EQ(ast_texts("a+b\\times c"),
            (Texts{"+", "{", "a", "}", "{", "\\times", "{", "b", "}", "{", "c", "}", "}"}));
  EXPECT_EQ(ast_texts("(a)"), (Texts{"()", "{", "a", "}"}));
}

TEST(AstTokenize, CanonicalFixpoint) {
  for (const auto& f : testing::formula_corpus(500, 6)) {
    const auto once = parse_formula(f);
    const std::string back = detokenize(token_texts(ast_tokenize(once)));
    FormulaAst twice;
    ASSERT_NO_THROW(twice = parse_formula(back)) << f << " -> " << back;
    EXPECT_TRUE(isomorphic(once, twice)) << f << " -> " << back;
    EXPECT_EQ(token_texts(ast_tokenize(twice)), token_texts(ast_tokenize(once)));
  }
}

TEST(Detokenize, Malformed) {
  EXPECT_THROW(detokenize({}), Error);
  EXPECT_THROW(detokenize({"+", "{", "x"}), Error);
  EXPECT_THROW(detokenize({"x", "y"}), Error);
}

TEST(GroupParse, Examples) {
  EXPECT_EQ(group_parse({"x+1", "x-1"}).trees.size(), 2u);
  EXPECT_TRUE(group_parse({}).trees.empty());
  try {
    group_parse({"x", "\\frac{x}"});
    FAIL();
  } catch (const AggregateError& e) {
    ASSERT_EQ(e.failures().size(), 1u);
    EXPECT_EQ(e.failures()[0].index(), 1u);
    EXPECT_EQ(e.failures()[0].code(), ErrorCode::MissingArgument);
  }
}

TEST(Graph, Examples) {
  const auto g = build_graph(group_parse({"x+1", "x-1"}));
  EXPECT_EQ(g.count(EdgeType::SameSymbol), 1u);
  EXPECT_EQ(g.count(EdgeType::ParentChild), 4u);
  EXPECT_TRUE(build_graph(FormulaForest{}).nodes.empty());
  EXPECT_TRUE(build_graph(FormulaForest{}).edges.empty());
  const auto xx = build_graph(group_parse({"x+x"}));
  ASSERT_EQ(xx.count(EdgeType::SameSymbol), 1u);
  const auto& e = xx.edges.back();
  EXPECT_EQ(xx.nodes[e.src].label, "x");
  EXPECT_EQ(xx.nodes[e.dst].label, "x");
}

// Independent oracle: walks the trees with its own counters.
void tally(const AstNode& n, std::size_t& nodes, std::map<std::string, std::size_t>& leaves) {
  ++nodes;
  if (n.kind == AstKind::Symbol && n.children.empty()) ++leaves[n.label];
  for (const auto& c : n.children) tally(c, nodes, leaves);
}

TEST(Graph, ClosedFormCounts) {
  testing::Gen gen(8);
  for (int round = 0; round < 50; ++round) {
    std::vector<std::string> fs;
    const std::size_t k = gen.below(6);
    for (std::size_t i = 0; i < k; ++i) fs.push_back(gen.formula(3));
    const auto forest = group_parse(fs);
    const auto g = build_graph(forest);
    std::size_t pc = 0, total = 0;
    std::map<std::string, std::size_t> leaves;
    for (const auto& t : forest.trees) {
      std::size_t nodes = 0;
      tally(t.root, nodes, leaves);
      pc += nodes - 1;
      total += nodes;
    }
    std::size_t same = 0;
    for (const auto& [label, c] : leaves) same += c * (c - 1) / 2;
    EXPECT_EQ(g.nodes.size(), total);
    EXPECT_EQ(g.count(EdgeType::ParentChild), pc);
    EXPECT_EQ(g.count(EdgeType::SameSymbol), same);
    for (std::size_t i = 0; i < g.nodes.size(); ++i) EXPECT_EQ(g.nodes[i].id, i);
    EXPECT_EQ(graph_to_json(g), graph_to_json(build_graph(forest)));
  }
}

}  // namespace
}  // namespace sifkit
