#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace sifkit {

enum class TokenKind : std::uint8_t { Command, Symbol, Number, Operator, Brace, Structure };

std::string_view to_string(TokenKind kind);

struct FormulaToken {
  std::string text;
  TokenKind kind = TokenKind::Symbol;
  std::size_t offset = 0;  // byte offset in the source formula

  bool operator==(const FormulaToken& o) const { return text == o.text && kind == o.kind; }
};

// Flat lexing of a formula body. Commands stay whole, whitespace is dropped,
// digit runs (with an optional decimal part) form one Number token, letters
// are emitted one Symbol per character. Throws LexError.
std::vector<FormulaToken> linear_tokenize(std::string_view latex);

std::vector<std::string> token_texts(const std::vector<FormulaToken>& tokens);

struct CommandArity {
  int required = 0;
  bool optional = false;  // one leading [..] argument allowed
};

// Commands that take arguments. Unknown commands are zero-arity leaves.
const std::map<std::string, CommandArity, std::less<>>& command_arity_table();

enum class AstKind : std::uint8_t { Command, Group, Symbol, Number, Operator, Sup, Sub };

std::string_view to_string(AstKind kind);

struct AstNode {
  std::string label;
  AstKind kind = AstKind::Symbol;
  std::vector<AstNode> children;

  bool operator==(const AstNode&) const = default;
  std::size_t node_count() const;
};

struct FormulaAst {
  AstNode root;

  bool operator==(const FormulaAst&) const = default;
  std::size_t node_count() const { return root.node_count(); }
};

// Parses a formula body into a tree. Binary operators and relations become
// Operator nodes over their operands, juxtaposed operands are collected in
// an implicit Group, scripts become Sup/Sub(base, script) and written braces
// become explicit Group nodes. Sequences that do not form a well-shaped
// operator expression fall back to a flat Group with Operator leaves.
// Throws LexError, MissingArgument, UnbalancedBrace or UnknownStructure.
FormulaAst parse_formula(std::string_view latex);

// Removes single-child Group nodes. Two formulas are isomorphic when their
// canonical trees are equal.
AstNode canonicalize(const AstNode& node);
bool isomorphic(const FormulaAst& a, const FormulaAst& b);

// Prefix serialization of the canonical tree: label, then every child
// wrapped in "{" "}".
std::vector<FormulaToken> ast_tokenize(const FormulaAst& ast);

// Rebuilds LaTeX from an ast_tokenize stream. The result parses to a tree
// isomorphic to the one that was serialized. Throws UnknownStructure on a
// malformed stream.
std::string detokenize(const std::vector<std::string>& tokens);

struct FormulaForest {
  std::vector<FormulaAst> trees;
};

// Parses every formula; failures are collected into an AggregateError whose
// entries carry the formula index.
FormulaForest group_parse(const std::vector<std::string>& formulas);

enum class EdgeType : std::uint8_t { ParentChild, SameSymbol };

std::string_view to_string(EdgeType type);

struct GraphNode {
  std::size_t id = 0;
  std::string label;
  AstKind kind = AstKind::Symbol;
  std::size_t tree = 0;

  bool operator==(const GraphNode&) const = default;
};

struct GraphEdge {
  std::size_t src = 0;
  std::size_t dst = 0;
  EdgeType type = EdgeType::ParentChild;

  bool operator==(const GraphEdge&) const = default;
};

// Nodes are numbered in preorder, tree after tree. ParentChild edges come
// first in preorder of the child, then SameSymbol edges sorted by (src, dst).
struct FormulaGraph {
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;

  std::size_t count(EdgeType type) const;
};

FormulaGraph build_graph(const FormulaForest& forest);
nlohmann::json graph_to_json(const FormulaGraph& graph);

}  // namespace sifkit
