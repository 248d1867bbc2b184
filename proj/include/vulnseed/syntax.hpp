#pragma once

#include "vulnseed/source.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace vulnseed {

enum class NodeKind {
    SourceUnit,
    ContractDef,
    FunctionDef,
    ModifierDef,
    ConstructorDef,
    VariableDeclarationStmt,
    ExpressionStmt,
    IfStmt,
    ForStmt,
    WhileStmt,
    RequireCall,
    AssertCall,
    FunctionCall,
    MemberAccess,
    BinaryOp,
    Assignment,
    Identifier,
    Block,
    ReturnStmt,
    EmitStmt,
    AssemblyBlock,
    Other,
};

std::string_view to_string(NodeKind kind);

using NodeId = std::uint32_t;
inline constexpr NodeId no_node = std::numeric_limits<NodeId>::max();

/// Kind-specific attributes. Only the fields relevant to a node's kind are set.
struct NodeAttrs {
    std::string op;                       // BinaryOp, Assignment, unary Other
    std::string member;                   // MemberAccess
    std::string name;                     // Identifier, declarations (first name for tuples)
    std::vector<std::string> names;       // every name a declaration introduces
    std::string type_text;                // declarations and parameters
    std::string visibility;               // FunctionDef / ConstructorDef / state variables
    std::vector<std::string> modifiers;   // FunctionDef specifiers and modifier invocations
    std::vector<std::string> bases;       // ContractDef inheritance list
    std::string label;                    // construct label for Other; contract/library/interface for ContractDef
    Span head;                            // ContractDef: keyword..'{' ; VariableDeclarationStmt: declaration before '='
};

struct AstNode {
    NodeId id = no_node;
    NodeKind kind = NodeKind::Other;
    Span span;
    NodeId parent = no_node;
    std::vector<NodeId> children;
    NodeAttrs attrs;
    /// Enclosing Block/FunctionDef/ModifierDef/ConstructorDef/ContractDef ids, innermost first.
    /// Populated for Identifier nodes.
    std::vector<NodeId> scope_chain;
};

/// Arena-backed syntax tree. Node ids index into `nodes()`.
class SyntaxTree {
public:
    SyntaxTree(std::shared_ptr<const SourceFile> source, std::vector<AstNode> nodes, NodeId root);

    const SourceFile& source() const { return *source_; }
    std::shared_ptr<const SourceFile> source_ptr() const { return source_; }
    const AstNode& root() const { return nodes_[root_]; }
    NodeId root_id() const { return root_; }
    const AstNode& node(NodeId id) const { return nodes_.at(id); }
    const std::vector<AstNode>& nodes() const { return nodes_; }
    std::string_view text_of(NodeId id) const { return source_->slice(node(id).span); }

    /// Nearest strict ancestor whose kind is one of `kinds`, or no_node.
    NodeId enclosing(NodeId id, std::initializer_list<NodeKind> kinds) const;
    bool is_ancestor(NodeId ancestor, NodeId id) const;

private:
    std::shared_ptr<const SourceFile> source_;
    std::vector<AstNode> nodes_;
    NodeId root_;
};

struct Diagnostic {
    Span span;
    std::string message;
};

enum class ParseStatus { Parsed, Invalid };

struct ParseOutcome {
    ParseStatus status = ParseStatus::Invalid;
    std::optional<SyntaxTree> tree;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return status == ParseStatus::Parsed; }
};

ParseOutcome parse(std::shared_ptr<const SourceFile> file);
ParseOutcome parse(SourceFile file);
ParseOutcome parse_text(std::string text, std::filesystem::path path = "<memory>");

using NodePredicate = std::function<bool(const SyntaxTree&, const AstNode&)>;

/// All nodes under `from` (inclusive) matching `predicate`, depth-first in source order.
std::vector<NodeId> find_nodes(const SyntaxTree& tree, NodeId from, const NodePredicate& predicate);
std::vector<NodeId> find_nodes(const SyntaxTree& tree, const NodePredicate& predicate);

/// Every identifier name visible at `id`: declarations of enclosing blocks, loop headers and
/// function parameters, members of the enclosing contract and of its bases defined in the same
/// file, and top-level names.
std::set<std::string> scope_identifiers(const SyntaxTree& tree, NodeId id);

/// Every name declared or referenced anywhere under `id`.
std::set<std::string> names_within(const SyntaxTree& tree, NodeId id);

/// Member names of a contract including bases resolvable within the same file.
std::set<std::string> contract_member_names(const SyntaxTree& tree, NodeId contract);

}  // namespace vulnseed
