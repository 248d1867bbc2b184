#include "vulnseed/syntax.hpp"

#include <algorithm>

namespace vulnseed {

std::string_view to_string(NodeKind kind)
{
    switch (kind) {
    case NodeKind::SourceUnit: return "SourceUnit";
    case NodeKind::ContractDef: return "ContractDef";
    case NodeKind::FunctionDef: return "FunctionDef";
    case NodeKind::ModifierDef: return "ModifierDef";
    case NodeKind::ConstructorDef: return "ConstructorDef";
    case NodeKind::VariableDeclarationStmt: return "VariableDeclarationStmt";
    case NodeKind::ExpressionStmt: return "ExpressionStmt";
    case NodeKind::IfStmt: return "IfStmt";
    case NodeKind::ForStmt: return "ForStmt";
    case NodeKind::WhileStmt: return "WhileStmt";
    case NodeKind::RequireCall: return "RequireCall";
    case NodeKind::AssertCall: return "AssertCall";
    case NodeKind::FunctionCall: return "FunctionCall";
    case NodeKind::MemberAccess: return "MemberAccess";
    case NodeKind::BinaryOp: return "BinaryOp";
    case NodeKind::Assignment: return "Assignment";
    case NodeKind::Identifier: return "Identifier";
    case NodeKind::Block: return "Block";
    case NodeKind::ReturnStmt: return "ReturnStmt";
    case NodeKind::EmitStmt: return "EmitStmt";
    case NodeKind::AssemblyBlock: return "AssemblyBlock";
    case NodeKind::Other: return "Other";
    }
    return "Other";
}

SyntaxTree::SyntaxTree(std::shared_ptr<const SourceFile> source, std::vector<AstNode> nodes, NodeId root)
    : source_(std::move(source)), nodes_(std::move(nodes)), root_(root)
{
}

NodeId SyntaxTree::enclosing(NodeId id, std::initializer_list<NodeKind> kinds) const
{
    for (NodeId p = node(id).parent; p != no_node; p = nodes_[p].parent) {
        if (std::find(kinds.begin(), kinds.end(), nodes_[p].kind) != kinds.end()) return p;
    }
    return no_node;
}

bool SyntaxTree::is_ancestor(NodeId ancestor, NodeId id) const
{
    for (NodeId p = node(id).parent; p != no_node; p = nodes_[p].parent) {
        if (p == ancestor) return true;
    }
    return false;
}

std::vector<NodeId> find_nodes(const SyntaxTree& tree, NodeId from, const NodePredicate& predicate)
{
    std::vector<NodeId> found;
    std::vector<NodeId> stack{from};
    while (!stack.empty()) {
        NodeId id = stack.back();
        stack.pop_back();
        const AstNode& n = tree.node(id);
        if (predicate(tree, n)) found.push_back(id);
        for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) stack.push_back(*it);
    }
    return found;
}

std::vector<NodeId> find_nodes(const SyntaxTree& tree, const NodePredicate& predicate)
{
    return find_nodes(tree, tree.root_id(), predicate);
}

namespace {

bool is_label(const AstNode& n, std::string_view label)
{
    return n.kind == NodeKind::Other && n.attrs.label == label;
}

void add_declared(const AstNode& n, std::set<std::string>& out)
{
    for (const auto& name : n.attrs.names) {
        if (!name.empty()) out.insert(name);
    }
    if (!n.attrs.name.empty()) out.insert(n.attrs.name);
}

void add_parameters(const SyntaxTree& tree, const AstNode& owner, std::set<std::string>& out)
{
    for (NodeId c : owner.children) {
        const AstNode& list = tree.node(c);
        if (!is_label(list, "ParameterList") && !is_label(list, "ReturnParameters")) continue;
        for (NodeId p : list.children) add_declared(tree.node(p), out);
    }
}

NodeId find_contract(const SyntaxTree& tree, std::string_view name)
{
    for (NodeId c : tree.root().children) {
        const AstNode& n = tree.node(c);
        if (n.kind == NodeKind::ContractDef && n.attrs.name == name) return c;
    }
    return no_node;
}

void collect_members(const SyntaxTree& tree, NodeId contract, std::set<std::string>& out, std::set<NodeId>& seen)
{
    if (contract == no_node || !seen.insert(contract).second) return;
    const AstNode& c = tree.node(contract);
    for (NodeId m : c.children) {
        const AstNode& member = tree.node(m);
        if (member.kind == NodeKind::ConstructorDef) continue;
        if (member.kind == NodeKind::Other && member.attrs.label != "StateVariable" && member.attrs.label != "Event" &&
            member.attrs.label != "Struct" && member.attrs.label != "Enum" && member.attrs.label != "ErrorDef" &&
            member.attrs.label != "UserType")
            continue;
        if (!member.attrs.name.empty()) out.insert(member.attrs.name);
        if (member.kind == NodeKind::Other && member.attrs.label == "StateVariable") add_declared(member, out);
    }
    for (const auto& base : c.attrs.bases) collect_members(tree, find_contract(tree, base), out, seen);
}

}  // namespace

std::set<std::string> contract_member_names(const SyntaxTree& tree, NodeId contract)
{
    std::set<std::string> out;
    std::set<NodeId> seen;
    collect_members(tree, contract, out, seen);
    return out;
}

std::set<std::string> scope_identifiers(const SyntaxTree& tree, NodeId id)
{
    std::set<std::string> names;
    for (NodeId p = id; p != no_node; p = tree.node(p).parent) {
        const AstNode& n = tree.node(p);
        switch (n.kind) {
        case NodeKind::Block:
            for (NodeId s : n.children) {
                const AstNode& stmt = tree.node(s);
                if (stmt.kind == NodeKind::VariableDeclarationStmt) add_declared(stmt, names);
            }
            break;
        case NodeKind::ForStmt:
            if (!n.children.empty() && tree.node(n.children.front()).kind == NodeKind::VariableDeclarationStmt)
                add_declared(tree.node(n.children.front()), names);
            break;
        case NodeKind::FunctionDef:
        case NodeKind::ModifierDef:
        case NodeKind::ConstructorDef:
            add_parameters(tree, n, names);
            break;
        case NodeKind::ContractDef:
            for (const auto& name : contract_member_names(tree, p)) names.insert(name);
            break;
        case NodeKind::SourceUnit:
            for (NodeId c : n.children) {
                const AstNode& item = tree.node(c);
                if (!item.attrs.name.empty()) names.insert(item.attrs.name);
            }
            break;
        default:
            if (is_label(n, "TryStmt")) add_parameters(tree, n, names);
            break;
        }
    }
    return names;
}

std::set<std::string> names_within(const SyntaxTree& tree, NodeId id)
{
    std::set<std::string> names;
    find_nodes(tree, id, [&](const SyntaxTree&, const AstNode& n) {
        if (n.kind == NodeKind::Identifier) names.insert(n.attrs.name);
        if (n.kind == NodeKind::VariableDeclarationStmt || is_label(n, "Parameter") || is_label(n, "StateVariable"))
            add_declared(n, names);
        return false;
    });
    return names;
}

}  // namespace vulnseed
