#include "vulnseed/operators.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <stdexcept>

namespace vulnseed {

std::string_view to_string(OperatorId op)
{
    switch (op) {
    case OperatorId::UC: return "UC";
    case OperatorId::US: return "US";
    case OperatorId::TX: return "TX";
    case OperatorId::UR: return "UR";
    case OperatorId::CL: return "CL";
    case OperatorId::DTU: return "DTU";
    }
    return "?";
}

std::optional<OperatorId> operator_from_string(std::string_view name)
{
    for (OperatorId op : all_operators) {
        if (to_string(op) == name) return op;
    }
    return std::nullopt;
}

namespace {

bool is_label(const AstNode& n, std::string_view label)
{
    return n.kind == NodeKind::Other && n.attrs.label == label;
}

/// Peels redundant parentheses: `((e))` -> `e`.
NodeId strip_parens(const SyntaxTree& tree, NodeId id)
{
    while (is_label(tree.node(id), "Tuple") && tree.node(id).children.size() == 1) id = tree.node(id).children.front();
    return id;
}

bool is_call_of(const SyntaxTree& tree, NodeId id, std::initializer_list<std::string_view> members)
{
    if (tree.node(id).kind != NodeKind::FunctionCall) return false;
    auto invoked = invoked_member(tree, id);
    return invoked && std::find(members.begin(), members.end(), invoked->name) != members.end();
}

bool is_abort(const SyntaxTree& tree, NodeId id)
{
    const AstNode& n = tree.node(id);
    if (is_label(n, "Throw") || is_label(n, "RevertStmt")) return true;
    if (n.kind == NodeKind::ExpressionStmt) {
        const AstNode& e = tree.node(n.children.front());
        if (e.kind != NodeKind::FunctionCall) return false;
        const AstNode& callee = tree.node(e.children.front());
        return callee.kind == NodeKind::Identifier && callee.attrs.name == "revert";
    }
    if (n.kind == NodeKind::ReturnStmt && n.children.size() == 1) return tree.text_of(n.children.front()) == "false";
    return false;
}

bool aborts_only(const SyntaxTree& tree, NodeId body)
{
    const AstNode& n = tree.node(body);
    if (n.kind != NodeKind::Block) return is_abort(tree, body);
    return !n.children.empty() &&
           std::all_of(n.children.begin(), n.children.end(), [&](NodeId s) { return is_abort(tree, s); });
}

/// The checked call expression when `stmt` is `require(E[, msg]);`, `assert(E);` or an
/// abort-only `if (E)` / `if (!E)` without else, where E invokes `member`.
std::optional<NodeId> checked_call(const SyntaxTree& tree, NodeId stmt, std::string_view member)
{
    const AstNode& s = tree.node(stmt);
    if (s.kind == NodeKind::ExpressionStmt) {
        const AstNode& e = tree.node(s.children.front());
        std::size_t args = e.children.size() - 1;
        bool shape = (e.kind == NodeKind::RequireCall && (args == 1 || args == 2)) ||
                     (e.kind == NodeKind::AssertCall && args == 1);
        if (!shape) return std::nullopt;
        NodeId call = strip_parens(tree, e.children[1]);
        if (is_call_of(tree, call, {member})) return call;
        return std::nullopt;
    }
    if (s.kind == NodeKind::IfStmt && s.children.size() == 2) {
        NodeId cond = strip_parens(tree, s.children[0]);
        const AstNode& c = tree.node(cond);
        if (is_label(c, "UnaryOp") && c.attrs.op == "!") cond = strip_parens(tree, c.children.front());
        if (!is_call_of(tree, cond, {member})) return std::nullopt;
        if (!aborts_only(tree, s.children[1])) return std::nullopt;
        return cond;
    }
    return std::nullopt;
}

bool is_tx_anchor(const SyntaxTree& tree, NodeId id)
{
    const AstNode& n = tree.node(id);
    if (n.kind != NodeKind::MemberAccess || n.attrs.member != "sender") return false;
    const AstNode& base = tree.node(n.children.front());
    if (base.kind != NodeKind::Identifier || base.attrs.name != "msg") return false;
    if (n.parent == no_node) return false;
    const AstNode& parent = tree.node(n.parent);
    return parent.kind == NodeKind::BinaryOp && (parent.attrs.op == "==" || parent.attrs.op == "!=");
}

bool is_elementary_type_name(std::string_view name)
{
    static const std::regex elementary(
        R"((address|bool|string|bytes|byte|payable|fixed|ufixed|u?int(8|16|24|32|40|48|56|64|72|80|88|96|104|112|120|128|136|144|152|160|168|176|184|192|200|208|216|224|232|240|248|256)?|bytes([1-9]|[12][0-9]|3[0-2])|u?fixed\d+x\d+))");
    return std::regex_match(name.begin(), name.end(), elementary);
}

/// A call whose value can be discarded: not a type conversion, contract creation or
/// require/assert.
bool is_value_returning_call(const SyntaxTree& tree, NodeId id)
{
    const AstNode& n = tree.node(id);
    if (n.kind != NodeKind::FunctionCall) return false;
    NodeId callee = n.children.front();
    while (is_label(tree.node(callee), "IndexAccess")) callee = tree.node(callee).children.front();
    const AstNode& c = tree.node(callee);
    if (c.kind == NodeKind::Identifier && (is_elementary_type_name(c.attrs.name) || c.attrs.name == "revert"))
        return false;
    if (is_label(c, "New")) return false;
    return true;
}

bool is_for_header(const SyntaxTree& tree, NodeId stmt)
{
    const AstNode& n = tree.node(stmt);
    if (n.parent == no_node) return false;
    const AstNode& p = tree.node(n.parent);
    return p.kind == NodeKind::ForStmt && p.children.back() != stmt;
}

bool is_ur_anchor(const SyntaxTree& tree, NodeId id)
{
    const AstNode& n = tree.node(id);
    if (is_for_header(tree, id)) return false;
    if (n.kind == NodeKind::ExpressionStmt) {
        const AstNode& e = tree.node(n.children.front());
        if (e.kind != NodeKind::Assignment || e.attrs.op != "=") return false;
        if (is_label(tree.node(e.children[0]), "Tuple")) return false;
        return is_value_returning_call(tree, e.children[1]);
    }
    if (n.kind == NodeKind::VariableDeclarationStmt) {
        if (n.attrs.label == "tuple" || n.attrs.type_text == "var" || n.children.size() != 1) return false;
        const auto& locs = n.attrs.modifiers;
        if (std::find(locs.begin(), locs.end(), "storage") != locs.end()) return false;
        return is_value_returning_call(tree, n.children.front());
    }
    return false;
}

bool is_statement(const AstNode& n)
{
    switch (n.kind) {
    case NodeKind::ExpressionStmt:
    case NodeKind::VariableDeclarationStmt:
    case NodeKind::IfStmt:
    case NodeKind::ForStmt:
    case NodeKind::WhileStmt:
    case NodeKind::ReturnStmt:
    case NodeKind::EmitStmt:
        return true;
    default:
        return is_label(n, "RevertStmt") || is_label(n, "TryStmt");
    }
}

/// Innermost statement enclosing `id` that can stand on its own (for-loop header clauses
/// are skipped in favour of the loop).
NodeId innermost_statement(const SyntaxTree& tree, NodeId id)
{
    for (NodeId p = tree.node(id).parent; p != no_node; p = tree.node(p).parent) {
        const AstNode& n = tree.node(p);
        if (n.kind == NodeKind::Block || n.kind == NodeKind::FunctionDef || n.kind == NodeKind::ModifierDef ||
            n.kind == NodeKind::ConstructorDef || n.kind == NodeKind::ContractDef)
            return no_node;
        if (is_statement(n) && !is_for_header(tree, p)) return p;
    }
    return no_node;
}

bool is_cl_invocation(const SyntaxTree& tree, const AstNode& n)
{
    return is_call_of(tree, n.id, {"call", "send", "transfer"});
}

bool is_cl_anchor(const SyntaxTree& tree, NodeId id)
{
    const AstNode& n = tree.node(id);
    if (!is_statement(n) || n.kind == NodeKind::VariableDeclarationStmt || is_for_header(tree, id)) return false;
    auto invocations = find_nodes(tree, id, [](const SyntaxTree& t, const AstNode& c) { return is_cl_invocation(t, c); });
    return std::any_of(invocations.begin(), invocations.end(),
                       [&](NodeId inv) { return innermost_statement(tree, inv) == id; });
}

bool is_dtu_anchor(const SyntaxTree& tree, NodeId id)
{
    if (!is_call_of(tree, id, {"delegatecall"})) return false;
    if (tree.enclosing(id, {NodeKind::ConstructorDef}) != no_node) return false;
    NodeId contract = tree.enclosing(id, {NodeKind::ContractDef});
    return contract != no_node && tree.node(contract).attrs.label == "contract";
}

std::vector<MutationSite> collect_sites(OperatorId op, const SyntaxTree& tree, const NodePredicate& predicate)
{
    std::vector<MutationSite> sites;
    for (NodeId id : find_nodes(tree, predicate)) {
        MutationSite site;
        site.op = op;
        site.file = tree.source().path();
        site.anchor = id;
        site.anchor_span = tree.node(id).span;
        site.line = tree.source().line_of(site.anchor_span.start);
        site.original_snippet = std::string(tree.text_of(id));
        site.ordinal = sites.size();
        sites.push_back(std::move(site));
    }
    return sites;
}

void require_operator(const MutationSite& site, OperatorId op)
{
    if (site.op != op) throw std::invalid_argument("site belongs to operator " + std::string(to_string(site.op)));
}

EditSet make_edit_set(const MutationSite& site, std::vector<Edit> edits)
{
    EditSet set;
    set.edits = std::move(edits);
    set.site_id = std::string(to_string(site.op)) + "#" + std::to_string(site.ordinal);
    return set;
}

/// Indentation step used inside `scope`: the extra leading whitespace of `line_offset` over the
/// line where `scope` starts, or four spaces.
std::string indent_unit(const SourceFile& file, std::size_t scope_offset, std::size_t line_offset)
{
    std::string_view outer = file.indent_at(scope_offset);
    std::string_view inner = file.indent_at(line_offset);
    if (inner.size() > outer.size() && inner.substr(0, outer.size()) == outer)
        return std::string(inner.substr(outer.size()));
    if (inner.find('\t') != std::string_view::npos) return "\t";
    return "    ";
}

EditSet unwrap_check(const SyntaxTree& tree, const MutationSite& site, std::string_view member)
{
    auto call = checked_call(tree, site.anchor, member);
    if (!call) throw std::invalid_argument("site no longer matches its pattern");
    return make_edit_set(site, {{site.anchor_span, std::string(tree.text_of(*call)) + ";"}});
}

std::string capitalize(std::string s)
{
    if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
}

}  // namespace

std::optional<InvokedMember> invoked_member(const SyntaxTree& tree, NodeId call)
{
    const AstNode& n = tree.node(call);
    if (n.kind != NodeKind::FunctionCall || n.children.empty()) return std::nullopt;
    NodeId callee = n.children.front();
    while (true) {
        const AstNode& c = tree.node(callee);
        if (is_label(c, "CallOptions")) {
            callee = c.children.front();
            continue;
        }
        if (c.kind == NodeKind::FunctionCall) {
            const AstNode& inner = tree.node(c.children.front());
            if (inner.kind == NodeKind::MemberAccess && (inner.attrs.member == "value" || inner.attrs.member == "gas")) {
                callee = inner.children.front();
                continue;
            }
        }
        break;
    }
    const AstNode& c = tree.node(callee);
    if (c.kind != NodeKind::MemberAccess) return std::nullopt;
    return InvokedMember{c.attrs.member, callee};
}

bool satisfies_shape(OperatorId op, const SyntaxTree& tree, NodeId node)
{
    switch (op) {
    case OperatorId::UC: return checked_call(tree, node, "call").has_value();
    case OperatorId::US: return checked_call(tree, node, "send").has_value();
    case OperatorId::TX: return is_tx_anchor(tree, node);
    case OperatorId::UR: return is_ur_anchor(tree, node);
    case OperatorId::CL: return is_cl_anchor(tree, node);
    case OperatorId::DTU: return is_dtu_anchor(tree, node);
    }
    return false;
}

std::vector<MutationSite> match_uc(const SyntaxTree& tree) { return match(OperatorId::UC, tree); }
std::vector<MutationSite> match_us(const SyntaxTree& tree) { return match(OperatorId::US, tree); }
std::vector<MutationSite> match_tx(const SyntaxTree& tree) { return match(OperatorId::TX, tree); }
std::vector<MutationSite> match_ur(const SyntaxTree& tree) { return match(OperatorId::UR, tree); }
std::vector<MutationSite> match_cl(const SyntaxTree& tree, const OperatorConfig& cfg) { return match(OperatorId::CL, tree, cfg); }
std::vector<MutationSite> match_dtu(const SyntaxTree& tree) { return match(OperatorId::DTU, tree); }

std::vector<MutationSite> match(OperatorId op, const SyntaxTree& tree, const OperatorConfig& cfg)
{
    return collect_sites(op, tree, [&](const SyntaxTree& t, const AstNode& n) {
        if (!satisfies_shape(op, t, n.id)) return false;
        if (op == OperatorId::CL && cfg.cl_skip_inside_loop)
            return t.enclosing(n.id, {NodeKind::ForStmt, NodeKind::WhileStmt}) == no_node;
        return true;
    });
}

EditSet transform_uc(const SyntaxTree& tree, const MutationSite& site)
{
    require_operator(site, OperatorId::UC);
    return unwrap_check(tree, site, "call");
}

EditSet transform_us(const SyntaxTree& tree, const MutationSite& site)
{
    require_operator(site, OperatorId::US);
    return unwrap_check(tree, site, "send");
}

EditSet transform_tx(const SyntaxTree&, const MutationSite& site)
{
    require_operator(site, OperatorId::TX);
    return make_edit_set(site, {{site.anchor_span, "tx.origin"}});
}

EditSet transform_ur(const SyntaxTree& tree, const MutationSite& site)
{
    require_operator(site, OperatorId::UR);
    const AstNode& stmt = tree.node(site.anchor);
    if (stmt.kind == NodeKind::ExpressionStmt) {
        const AstNode& assignment = tree.node(stmt.children.front());
        return make_edit_set(site, {{stmt.span, std::string(tree.text_of(assignment.children[1])) + ";"}});
    }
    std::string indent(tree.source().indent_at(stmt.span.start));
    std::string replacement = std::string(tree.source().slice(stmt.attrs.head)) + ";\n" + indent +
                              std::string(tree.text_of(stmt.children.front())) + ";";
    return make_edit_set(site, {{stmt.span, std::move(replacement)}});
}

std::string cl_loop_variable(const SyntaxTree& tree, const MutationSite& site)
{
    std::set<std::string> taken = scope_identifiers(tree, site.anchor);
    NodeId owner = tree.enclosing(site.anchor, {NodeKind::FunctionDef, NodeKind::ModifierDef, NodeKind::ConstructorDef});
    for (const auto& name : names_within(tree, owner == no_node ? site.anchor : owner)) taken.insert(name);
    return fresh_name("i", taken);
}

EditSet transform_cl(const SyntaxTree& tree, const MutationSite& site, const OperatorConfig& cfg)
{
    require_operator(site, OperatorId::CL);
    if (cfg.cl_loop_bound < 1) throw std::invalid_argument("cl_loop_bound must be at least 1");
    const SourceFile& file = tree.source();
    std::string var = cl_loop_variable(tree, site);
    std::string indent(file.indent_at(site.anchor_span.start));
    NodeId scope = tree.enclosing(site.anchor, {NodeKind::Block, NodeKind::FunctionDef, NodeKind::ModifierDef,
                                                NodeKind::ConstructorDef});
    std::size_t scope_offset = scope == no_node ? site.anchor_span.start : tree.node(scope).span.start;
    if (scope != no_node) {
        NodeId outer = tree.enclosing(scope, {NodeKind::FunctionDef, NodeKind::ModifierDef, NodeKind::ConstructorDef});
        if (tree.node(scope).kind == NodeKind::Block && outer != no_node &&
            file.line_of(scope_offset) == file.line_of(tree.node(outer).span.start))
            scope_offset = tree.node(outer).span.start;
    }
    std::string unit = indent_unit(file, scope_offset, site.anchor_span.start);

    std::string header = "for (uint256 " + var + " = 1; " + var + " <= " + std::to_string(cfg.cl_loop_bound) + "; " +
                         var + "++) {\n" + indent + unit;
    std::size_t start = site.anchor_span.start;
    std::size_t end = site.anchor_span.end;
    return make_edit_set(site, {{{start, start}, std::move(header)}, {{end, end}, "\n" + indent + "}"}});
}

EditSet transform_dtu(const SyntaxTree& tree, const MutationSite& site)
{
    require_operator(site, OperatorId::DTU);
    const SourceFile& file = tree.source();
    auto invoked = invoked_member(tree, site.anchor);
    NodeId contract_id = tree.enclosing(site.anchor, {NodeKind::ContractDef});
    if (!invoked || contract_id == no_node) throw std::invalid_argument("site no longer matches its pattern");
    const AstNode& contract = tree.node(contract_id);
    NodeId receiver = tree.node(invoked->member_access).children.front();

    std::set<std::string> taken = scope_identifiers(tree, contract_id);
    for (const auto& name : names_within(tree, contract_id)) taken.insert(name);
    std::string var;
    std::string setter;
    while (true) {
        var = fresh_name("delegate", taken);
        setter = "set" + capitalize(var);
        if (!taken.contains(setter) && !taken.contains("_" + var)) break;
        taken.insert(var);
    }

    std::string contract_indent(file.indent_at(contract.span.start));
    std::string member_indent = contract_indent + "    ";
    if (!contract.children.empty()) {
        std::size_t first = tree.node(contract.children.front()).span.start;
        if (file.line_of(first) != file.line_of(contract.attrs.head.end)) member_indent = file.indent_at(first);
    }
    std::string unit = indent_unit(file, contract.span.start, contract.children.empty()
                                                                   ? contract.span.start
                                                                   : tree.node(contract.children.front()).span.start);
    if (member_indent == contract_indent) unit = "    ";

    std::string declarations = "\n" + member_indent + "address public " + var + ";\n" + member_indent + "function " +
                               setter + "(address _" + var + ") public {\n" + member_indent + unit + var + " = _" +
                               var + ";\n" + member_indent + "}";
    std::size_t insert_at = contract.attrs.head.end;
    return make_edit_set(site, {{{insert_at, insert_at}, std::move(declarations)}, {tree.node(receiver).span, var}});
}

EditSet transform(const SyntaxTree& tree, const MutationSite& site, const OperatorConfig& cfg)
{
    switch (site.op) {
    case OperatorId::UC: return transform_uc(tree, site);
    case OperatorId::US: return transform_us(tree, site);
    case OperatorId::TX: return transform_tx(tree, site);
    case OperatorId::UR: return transform_ur(tree, site);
    case OperatorId::CL: return transform_cl(tree, site, cfg);
    case OperatorId::DTU: return transform_dtu(tree, site);
    }
    throw std::invalid_argument("unknown operator");
}

}  // namespace vulnseed
