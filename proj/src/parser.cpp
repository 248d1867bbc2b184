// Recursive-descent parser for the Solidity subset the mutation operators rely on.
//
// Accepts both legacy (0.4.x) and current syntax: `throw`, `var`, function-named constructors,
// `.call.value(x)(...)`, `.call{value: x}(...)`, try/catch, custom errors. Constructs that are
// recognised but not modelled become `Other` nodes labelled with the construct name.

#include "vulnseed/syntax.hpp"

#include "lexer.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <unordered_set>

namespace vulnseed {
namespace {

using detail::Token;
using detail::TokenKind;

struct ParseError : std::runtime_error {
    ParseError(Span where, const std::string& what) : std::runtime_error(what), span(where) {}
    Span span;
};

const std::unordered_set<std::string_view> reserved_words = {
    "contract", "library",  "interface", "function", "modifier", "event",    "struct",   "enum",
    "mapping",  "if",       "else",      "for",      "while",    "do",       "return",   "returns",
    "break",    "continue", "throw",     "emit",     "var",      "assembly", "pragma",   "import",
    "using",    "constructor", "is",     "try",      "catch",    "unchecked", "memory",  "storage",
    "calldata", "indexed",  "public",    "private",  "internal", "external", "pure",     "view",
    "constant", "virtual",  "override",  "immutable", "new",     "delete",   "anonymous",
};

const std::unordered_set<std::string_view> visibility_words = {"public", "private", "internal", "external"};
const std::unordered_set<std::string_view> mutability_words = {"pure", "view", "payable", "constant", "nonpayable", "virtual"};
const std::unordered_set<std::string_view> data_locations = {"memory", "storage", "calldata"};
const std::unordered_set<std::string_view> literal_units = {"wei",     "gwei",  "ether", "finney", "szabo", "seconds",
                                                            "minutes", "hours", "days",  "weeks",  "years"};
const std::unordered_set<std::string_view> assignment_ops = {"=",  "+=", "-=",  "*=",  "/=",  "%=",
                                                             "|=", "&=", "^=", "<<=", ">>=", ">>>="};

int binary_precedence(std::string_view op)
{
    if (op == "||") return 1;
    if (op == "&&") return 2;
    if (op == "==" || op == "!=") return 3;
    if (op == "<" || op == ">" || op == "<=" || op == ">=") return 4;
    if (op == "|") return 5;
    if (op == "^") return 6;
    if (op == "&") return 7;
    if (op == "<<" || op == ">>" || op == ">>>") return 8;
    if (op == "+" || op == "-") return 9;
    if (op == "*" || op == "/" || op == "%") return 10;
    if (op == "**") return 11;
    return 0;
}

constexpr int max_depth = 400;

class Parser {
public:
    Parser(const SourceFile& file, std::vector<Token> tokens) : file_(file), toks_(std::move(tokens)) {}

    NodeId parse_source_unit()
    {
        std::vector<NodeId> items;
        while (cur().kind != TokenKind::End) items.push_back(parse_source_unit_item());
        return add(NodeKind::SourceUnit, {0, file_.size()}, std::move(items));
    }

    std::vector<AstNode> take_nodes() { return std::move(nodes_); }

private:
    struct Mark {
        std::size_t pos;
        std::size_t nodes;
    };

    struct DepthGuard {
        explicit DepthGuard(Parser& p) : parser(p)
        {
            if (++parser.depth_ > max_depth) parser.fail("nesting too deep");
        }
        ~DepthGuard() { --parser.depth_; }
        Parser& parser;
    };

    // --- token helpers --------------------------------------------------------------------

    const Token& cur() const { return toks_[pos_]; }
    const Token& at(std::size_t ahead) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    bool check(std::string_view s) const { return cur().is(s); }
    bool accept(std::string_view s)
    {
        if (!check(s)) return false;
        ++pos_;
        return true;
    }
    const Token& expect(std::string_view s)
    {
        if (!check(s)) fail("expected '" + std::string(s) + "'");
        return toks_[pos_++];
    }
    std::size_t start_offset() const { return cur().span.start; }
    std::size_t prev_end() const { return pos_ == 0 ? 0 : toks_[pos_ - 1].span.end; }
    Span since(std::size_t start) const { return {start, prev_end()}; }

    [[noreturn]] void fail(const std::string& message) const
    {
        const Token& t = cur();
        std::string found = t.kind == TokenKind::End ? "end of input" : "'" + std::string(t.text) + "'";
        throw ParseError(t.span, message + ", found " + found);
    }

    bool is_plain_identifier(const Token& t) const
    {
        return t.kind == TokenKind::Identifier && !reserved_words.contains(t.text);
    }

    std::string expect_identifier()
    {
        if (!is_plain_identifier(cur())) fail("expected identifier");
        return std::string(toks_[pos_++].text);
    }

    Mark mark() const { return {pos_, nodes_.size()}; }
    void restore(const Mark& m)
    {
        pos_ = m.pos;
        nodes_.resize(m.nodes);
    }

    void skip_balanced(std::string_view open, std::string_view close)
    {
        expect(open);
        int depth = 1;
        while (depth > 0) {
            if (cur().kind == TokenKind::End) fail("unbalanced '" + std::string(open) + "'");
            if (check(open)) ++depth;
            else if (check(close)) --depth;
            ++pos_;
        }
    }

    void skip_to_semicolon()
    {
        while (!check(";")) {
            if (cur().kind == TokenKind::End) fail("expected ';'");
            if (check("{")) skip_balanced("{", "}");
            else ++pos_;
        }
        ++pos_;
    }

    NodeId add(NodeKind kind, Span span, std::vector<NodeId> children = {}, NodeAttrs attrs = {})
    {
        auto id = static_cast<NodeId>(nodes_.size());
        for (NodeId c : children) nodes_[c].parent = id;
        AstNode n;
        n.id = id;
        n.kind = kind;
        n.span = span;
        n.children = std::move(children);
        n.attrs = std::move(attrs);
        nodes_.push_back(std::move(n));
        return id;
    }

    NodeId add_other(std::string label, Span span, std::vector<NodeId> children = {}, NodeAttrs attrs = {})
    {
        attrs.label = std::move(label);
        return add(NodeKind::Other, span, std::move(children), std::move(attrs));
    }

    // --- source units and contracts -------------------------------------------------------

    NodeId parse_source_unit_item()
    {
        std::size_t start = start_offset();
        if (check("pragma") || check("import")) {
            std::string label = check("pragma") ? "Pragma" : "Import";
            ++pos_;
            skip_to_semicolon();
            return add_other(label, since(start));
        }
        if (check("contract") || check("library") || check("interface") || (check("abstract") && at(1).is("contract")))
            return parse_contract();
        if (check("{")) fail("expected contract, library, interface or pragma");
        return parse_member(std::string{});
    }

    NodeId parse_contract()
    {
        std::size_t start = start_offset();
        NodeAttrs attrs;
        if (accept("abstract")) attrs.modifiers.push_back("abstract");
        attrs.label = std::string(cur().text);
        ++pos_;
        attrs.name = expect_identifier();
        if (accept("is")) {
            do {
                std::string base = expect_identifier();
                while (accept(".")) base = expect_identifier();
                attrs.bases.push_back(base);
                if (check("(")) skip_balanced("(", ")");
            } while (accept(","));
        }
        expect("{");
        attrs.head = since(start);
        std::vector<NodeId> members;
        while (!check("}")) {
            if (cur().kind == TokenKind::End) fail("expected '}' closing contract " + attrs.name);
            members.push_back(parse_member(attrs.name));
        }
        ++pos_;
        return add(NodeKind::ContractDef, since(start), std::move(members), std::move(attrs));
    }

    NodeId parse_member(const std::string& contract_name)
    {
        std::size_t start = start_offset();
        if (check("function") || check("constructor") || check("modifier") ||
            ((check("fallback") || check("receive")) && at(1).is("(")))
            return parse_function_like(contract_name);
        if (check("event")) return parse_event();
        if (check("error") && is_plain_identifier(at(1)) && at(2).is("(")) {
            ++pos_;
            NodeAttrs attrs;
            attrs.name = expect_identifier();
            NodeId params = parse_parameter_list("ParameterList");
            expect(";");
            return add_other("ErrorDef", since(start), {params}, std::move(attrs));
        }
        if (check("struct")) return parse_struct();
        if (check("enum")) return parse_enum();
        if (check("using")) {
            ++pos_;
            skip_to_semicolon();
            return add_other("Using", since(start));
        }
        if (check("type") && is_plain_identifier(at(1)) && at(2).is("is")) {
            ++pos_;
            NodeAttrs attrs;
            attrs.name = expect_identifier();
            skip_to_semicolon();
            return add_other("UserType", since(start), {}, std::move(attrs));
        }
        return parse_state_variable();
    }

    NodeId parse_state_variable()
    {
        std::size_t start = start_offset();
        if (!can_start_type()) fail("expected declaration");
        NodeAttrs attrs;
        attrs.type_text = std::string(file_.slice(parse_type()));
        while (true) {
            if (visibility_words.contains(cur().text) && cur().kind == TokenKind::Identifier) {
                attrs.visibility = std::string(cur().text);
                ++pos_;
            } else if (check("constant") || check("immutable") || check("transient")) {
                attrs.modifiers.emplace_back(cur().text);
                ++pos_;
            } else if (check("override")) {
                attrs.modifiers.emplace_back("override");
                ++pos_;
                if (check("(")) skip_balanced("(", ")");
            } else {
                break;
            }
        }
        attrs.name = expect_identifier();
        attrs.names = {attrs.name};
        attrs.head = since(start);
        std::vector<NodeId> children;
        if (accept("=")) children.push_back(parse_expression());
        expect(";");
        return add_other("StateVariable", since(start), std::move(children), std::move(attrs));
    }

    NodeId parse_event()
    {
        std::size_t start = start_offset();
        expect("event");
        NodeAttrs attrs;
        attrs.name = expect_identifier();
        NodeId params = parse_parameter_list("ParameterList");
        accept("anonymous");
        expect(";");
        return add_other("Event", since(start), {params}, std::move(attrs));
    }

    NodeId parse_struct()
    {
        std::size_t start = start_offset();
        expect("struct");
        NodeAttrs attrs;
        attrs.name = expect_identifier();
        expect("{");
        while (!accept("}")) {
            parse_type();
            attrs.names.push_back(expect_identifier());
            expect(";");
        }
        return add_other("Struct", since(start), {}, std::move(attrs));
    }

    NodeId parse_enum()
    {
        std::size_t start = start_offset();
        expect("enum");
        NodeAttrs attrs;
        attrs.name = expect_identifier();
        expect("{");
        while (!accept("}")) {
            attrs.names.push_back(expect_identifier());
            if (!check("}")) expect(",");
        }
        return add_other("Enum", since(start), {}, std::move(attrs));
    }

    NodeId parse_function_like(const std::string& contract_name)
    {
        std::size_t start = start_offset();
        std::string word(cur().text);
        ++pos_;
        NodeKind kind = NodeKind::FunctionDef;
        NodeAttrs attrs;
        if (word == "function") {
            if (cur().kind == TokenKind::Identifier && !check("(")) attrs.name = std::string(toks_[pos_++].text);
            if (!contract_name.empty() && attrs.name == contract_name) kind = NodeKind::ConstructorDef;
        } else if (word == "constructor") {
            kind = NodeKind::ConstructorDef;
            attrs.name = "constructor";
        } else if (word == "modifier") {
            kind = NodeKind::ModifierDef;
            attrs.name = expect_identifier();
        } else {
            attrs.name = word;
        }

        std::vector<NodeId> children;
        if (check("(")) children.push_back(parse_parameter_list("ParameterList"));
        while (!check("{") && !check(";") && !check("returns")) {
            if (cur().kind != TokenKind::Identifier) fail("expected function specifier");
            if (visibility_words.contains(cur().text)) {
                attrs.visibility = std::string(toks_[pos_++].text);
            } else if (mutability_words.contains(cur().text)) {
                attrs.modifiers.emplace_back(toks_[pos_++].text);
            } else if (check("override")) {
                ++pos_;
                attrs.modifiers.emplace_back("override");
                if (check("(")) skip_balanced("(", ")");
            } else {
                children.push_back(parse_modifier_invocation(attrs));
            }
        }
        if (accept("returns")) children.push_back(parse_parameter_list("ReturnParameters"));
        if (!accept(";")) children.push_back(parse_block());
        return add(kind, since(start), std::move(children), std::move(attrs));
    }

    NodeId parse_modifier_invocation(NodeAttrs& owner)
    {
        std::size_t start = start_offset();
        NodeAttrs attrs;
        attrs.name = expect_identifier();
        while (accept(".")) attrs.name += "." + expect_identifier();
        owner.modifiers.push_back(attrs.name);
        std::vector<NodeId> args;
        if (check("(")) args = parse_call_arguments();
        return add_other("ModifierInvocation", since(start), std::move(args), std::move(attrs));
    }

    NodeId parse_parameter_list(std::string label)
    {
        std::size_t start = start_offset();
        expect("(");
        std::vector<NodeId> params;
        if (!check(")")) {
            do {
                params.push_back(parse_parameter());
            } while (accept(","));
        }
        expect(")");
        return add_other(std::move(label), since(start), std::move(params));
    }

    NodeId parse_parameter()
    {
        std::size_t start = start_offset();
        NodeAttrs attrs;
        if (!can_start_type()) fail("expected parameter type");
        attrs.type_text = std::string(file_.slice(parse_type()));
        while (cur().kind == TokenKind::Identifier && (data_locations.contains(cur().text) || check("indexed")))
            attrs.modifiers.emplace_back(toks_[pos_++].text);
        if (is_plain_identifier(cur())) {
            attrs.name = std::string(toks_[pos_++].text);
            attrs.names = {attrs.name};
        }
        return add_other("Parameter", since(start), {}, std::move(attrs));
    }

    // --- types ----------------------------------------------------------------------------

    bool can_start_type() const
    {
        return is_plain_identifier(cur()) || check("mapping") || check("function");
    }

    Span parse_type()
    {
        std::size_t start = start_offset();
        if (accept("mapping")) {
            expect("(");
            parse_type();
            if (is_plain_identifier(cur())) ++pos_;
            expect("=>");
            parse_type();
            if (is_plain_identifier(cur())) ++pos_;
            expect(")");
        } else if (accept("function")) {
            skip_balanced("(", ")");
            while (cur().kind == TokenKind::Identifier &&
                   (visibility_words.contains(cur().text) || mutability_words.contains(cur().text)))
                ++pos_;
            if (accept("returns")) skip_balanced("(", ")");
        } else {
            std::string first = expect_identifier();
            if (first == "address" && check("payable")) ++pos_;
            while (check(".") && is_plain_identifier(at(1))) pos_ += 2;
        }
        while (check("[")) skip_balanced("[", "]");
        return since(start);
    }

    // --- statements -----------------------------------------------------------------------

    NodeId parse_block(std::string label = {})
    {
        DepthGuard guard(*this);
        std::size_t start = start_offset();
        expect("{");
        std::vector<NodeId> stmts;
        while (!check("}")) {
            if (cur().kind == TokenKind::End) fail("expected '}'");
            stmts.push_back(parse_statement());
        }
        ++pos_;
        NodeAttrs attrs;
        attrs.label = std::move(label);
        return add(NodeKind::Block, since(start), std::move(stmts), std::move(attrs));
    }

    NodeId parse_statement()
    {
        DepthGuard guard(*this);
        std::size_t start = start_offset();
        if (check("{")) return parse_block();
        if (accept("if")) {
            expect("(");
            std::vector<NodeId> children{parse_expression()};
            expect(")");
            children.push_back(parse_statement());
            if (accept("else")) children.push_back(parse_statement());
            return add(NodeKind::IfStmt, since(start), std::move(children));
        }
        if (accept("for")) {
            expect("(");
            std::vector<NodeId> children;
            if (!accept(";")) children.push_back(parse_simple_statement());
            if (!check(";")) children.push_back(parse_expression());
            expect(";");
            if (!check(")")) children.push_back(parse_expression());
            expect(")");
            children.push_back(parse_statement());
            return add(NodeKind::ForStmt, since(start), std::move(children));
        }
        if (accept("while")) {
            expect("(");
            std::vector<NodeId> children{parse_expression()};
            expect(")");
            children.push_back(parse_statement());
            return add(NodeKind::WhileStmt, since(start), std::move(children));
        }
        if (accept("do")) {
            std::vector<NodeId> children{parse_statement()};
            expect("while");
            expect("(");
            children.push_back(parse_expression());
            expect(")");
            expect(";");
            NodeAttrs attrs;
            attrs.label = "do";
            return add(NodeKind::WhileStmt, since(start), std::move(children), std::move(attrs));
        }
        if (accept("return")) {
            std::vector<NodeId> children;
            if (!check(";")) children.push_back(parse_expression());
            expect(";");
            return add(NodeKind::ReturnStmt, since(start), std::move(children));
        }
        if (check("break") || check("continue") || check("throw")) {
            std::string label = check("break") ? "Break" : check("continue") ? "Continue" : "Throw";
            ++pos_;
            expect(";");
            return add_other(label, since(start));
        }
        if (accept("emit")) {
            std::vector<NodeId> children{parse_expression()};
            expect(";");
            return add(NodeKind::EmitStmt, since(start), std::move(children));
        }
        if (accept("assembly")) {
            if (cur().kind == TokenKind::String) ++pos_;
            if (check("(")) skip_balanced("(", ")");
            skip_balanced("{", "}");
            return add(NodeKind::AssemblyBlock, since(start));
        }
        if (check("unchecked") && at(1).is("{")) {
            ++pos_;
            NodeId block = parse_block("unchecked");
            nodes_[block].span.start = start;
            return block;
        }
        if (check("try")) return parse_try();
        if (check("revert") && is_plain_identifier(at(1))) {
            ++pos_;
            std::vector<NodeId> children{parse_expression()};
            expect(";");
            return add_other("RevertStmt", since(start), std::move(children));
        }
        return parse_simple_statement();
    }

    /// Variable declaration or expression statement, including the trailing ';'.
    NodeId parse_simple_statement()
    {
        std::size_t start = start_offset();
        if (check("var")) return parse_var_declaration();
        if (check("(")) {
            if (auto decl = try_tuple_declaration()) return *decl;
        } else if (auto decl = try_variable_declaration()) {
            return *decl;
        }
        std::vector<NodeId> children{parse_expression()};
        expect(";");
        return add(NodeKind::ExpressionStmt, since(start), std::move(children));
    }

    NodeId finish_declaration(std::size_t start, NodeAttrs attrs)
    {
        attrs.head = since(start);
        if (!attrs.names.empty()) attrs.name = attrs.names.front();
        std::vector<NodeId> children;
        if (accept("=")) children.push_back(parse_expression());
        expect(";");
        return add(NodeKind::VariableDeclarationStmt, since(start), std::move(children), std::move(attrs));
    }

    NodeId parse_var_declaration()
    {
        std::size_t start = start_offset();
        expect("var");
        NodeAttrs attrs;
        attrs.type_text = "var";
        if (accept("(")) {
            attrs.label = "tuple";
            while (!check(")")) {
                if (check(",")) {
                    ++pos_;
                    continue;
                }
                attrs.names.push_back(expect_identifier());
                if (!check(")")) expect(",");
            }
            ++pos_;
        } else {
            attrs.names.push_back(expect_identifier());
        }
        return finish_declaration(start, std::move(attrs));
    }

    std::optional<NodeId> try_variable_declaration()
    {
        if (!can_start_type()) return std::nullopt;
        std::size_t start = start_offset();
        Mark m = mark();
        NodeAttrs attrs;
        try {
            attrs.type_text = std::string(file_.slice(parse_type()));
            while (cur().kind == TokenKind::Identifier && data_locations.contains(cur().text))
                attrs.modifiers.emplace_back(toks_[pos_++].text);
            if (!is_plain_identifier(cur())) {
                restore(m);
                return std::nullopt;
            }
        } catch (const ParseError&) {
            restore(m);
            return std::nullopt;
        }
        attrs.names.push_back(std::string(toks_[pos_++].text));
        return finish_declaration(start, std::move(attrs));
    }

    std::optional<NodeId> try_tuple_declaration()
    {
        std::size_t start = start_offset();
        Mark m = mark();
        NodeAttrs attrs;
        attrs.label = "tuple";
        try {
            expect("(");
            std::vector<std::string> types;
            while (!check(")")) {
                if (accept(",")) continue;
                if (!can_start_type()) throw ParseError(cur().span, "not a declaration");
                types.emplace_back(file_.slice(parse_type()));
                while (cur().kind == TokenKind::Identifier && data_locations.contains(cur().text)) ++pos_;
                attrs.names.push_back(expect_identifier());
                if (!check(")")) expect(",");
            }
            ++pos_;
            if (!check("=") || attrs.names.empty()) throw ParseError(cur().span, "not a declaration");
        } catch (const ParseError&) {
            restore(m);
            return std::nullopt;
        }
        attrs.type_text = std::string(file_.slice(since(start)));
        return finish_declaration(start, std::move(attrs));
    }

    NodeId parse_try()
    {
        std::size_t start = start_offset();
        expect("try");
        std::vector<NodeId> children{parse_expression()};
        if (accept("returns")) children.push_back(parse_parameter_list("ReturnParameters"));
        children.push_back(parse_block());
        if (!check("catch")) fail("expected 'catch'");
        while (accept("catch")) {
            if (is_plain_identifier(cur())) ++pos_;
            if (check("(")) children.push_back(parse_parameter_list("ParameterList"));
            children.push_back(parse_block());
        }
        return add_other("TryStmt", since(start), std::move(children));
    }

    // --- expressions ----------------------------------------------------------------------

    NodeId parse_expression()
    {
        DepthGuard guard(*this);
        std::size_t start = start_offset();
        NodeId lhs = parse_conditional();
        if (cur().kind == TokenKind::Punct && assignment_ops.contains(cur().text)) {
            NodeAttrs attrs;
            attrs.op = std::string(toks_[pos_++].text);
            NodeId rhs = parse_expression();
            return add(NodeKind::Assignment, since(start), {lhs, rhs}, std::move(attrs));
        }
        return lhs;
    }

    NodeId parse_conditional()
    {
        std::size_t start = start_offset();
        NodeId cond = parse_binary(1);
        if (!accept("?")) return cond;
        NodeId yes = parse_expression();
        expect(":");
        NodeId no = parse_expression();
        return add_other("Conditional", since(start), {cond, yes, no});
    }

    NodeId parse_binary(int min_precedence)
    {
        DepthGuard guard(*this);
        std::size_t start = start_offset();
        NodeId lhs = parse_unary();
        while (cur().kind == TokenKind::Punct) {
            int prec = binary_precedence(cur().text);
            if (prec == 0 || prec < min_precedence) break;
            NodeAttrs attrs;
            attrs.op = std::string(toks_[pos_++].text);
            // '**' is right-associative.
            NodeId rhs = parse_binary(attrs.op == "**" ? prec : prec + 1);
            lhs = add(NodeKind::BinaryOp, since(start), {lhs, rhs}, std::move(attrs));
        }
        return lhs;
    }

    NodeId parse_unary()
    {
        DepthGuard guard(*this);
        std::size_t start = start_offset();
        if (check("!") || check("~") || check("-") || check("+") || check("++") || check("--") || check("delete")) {
            NodeAttrs attrs;
            attrs.op = std::string(toks_[pos_++].text);
            NodeId operand = parse_unary();
            return add_other("UnaryOp", since(start), {operand}, std::move(attrs));
        }
        return parse_postfix(parse_primary());
    }

    NodeId parse_postfix(NodeId expr)
    {
        std::size_t start = nodes_[expr].span.start;
        while (true) {
            if (check("++") || check("--")) {
                NodeAttrs attrs;
                attrs.op = std::string(toks_[pos_++].text);
                expr = add_other("UnaryOp", since(start), {expr}, std::move(attrs));
            } else if (accept(".")) {
                if (cur().kind != TokenKind::Identifier) fail("expected member name");
                NodeAttrs attrs;
                attrs.member = std::string(toks_[pos_++].text);
                expr = add(NodeKind::MemberAccess, since(start), {expr}, std::move(attrs));
            } else if (accept("[")) {
                std::vector<NodeId> children{expr};
                if (!check("]") && !check(":")) children.push_back(parse_expression());
                if (accept(":") && !check("]")) children.push_back(parse_expression());
                expect("]");
                expr = add_other("IndexAccess", since(start), std::move(children));
            } else if (check("(")) {
                std::vector<NodeId> children{expr};
                for (NodeId arg : parse_call_arguments()) children.push_back(arg);
                NodeKind kind = NodeKind::FunctionCall;
                const AstNode& callee = nodes_[expr];
                if (callee.kind == NodeKind::Identifier && callee.attrs.name == "require") kind = NodeKind::RequireCall;
                if (callee.kind == NodeKind::Identifier && callee.attrs.name == "assert") kind = NodeKind::AssertCall;
                expr = add(kind, since(start), std::move(children));
            } else if (check("{") && at(1).kind == TokenKind::Identifier && at(2).is(":")) {
                ++pos_;
                std::vector<NodeId> children{expr};
                while (!accept("}")) {
                    expect_identifier();
                    expect(":");
                    children.push_back(parse_expression());
                    if (!check("}")) expect(",");
                }
                expr = add_other("CallOptions", since(start), std::move(children));
            } else {
                return expr;
            }
        }
    }

    std::vector<NodeId> parse_call_arguments()
    {
        expect("(");
        std::vector<NodeId> args;
        if (accept("{")) {
            while (!accept("}")) {
                expect_identifier();
                expect(":");
                args.push_back(parse_expression());
                if (!check("}")) expect(",");
            }
            expect(")");
            return args;
        }
        if (!check(")")) {
            do {
                args.push_back(parse_expression());
            } while (accept(","));
        }
        expect(")");
        return args;
    }

    NodeId parse_primary()
    {
        std::size_t start = start_offset();
        const Token& t = cur();
        if (t.kind == TokenKind::Number) {
            ++pos_;
            if (cur().kind == TokenKind::Identifier && literal_units.contains(cur().text)) ++pos_;
            return add_other("Literal", since(start));
        }
        if (t.kind == TokenKind::String) {
            while (cur().kind == TokenKind::String) ++pos_;
            return add_other("Literal", since(start));
        }
        if (t.is("true") || t.is("false")) {
            ++pos_;
            return add_other("Literal", since(start));
        }
        if (accept("new")) {
            parse_type();
            return add_other("New", since(start));
        }
        if (is_plain_identifier(t)) {
            NodeAttrs attrs;
            attrs.name = std::string(t.text);
            ++pos_;
            if (attrs.name == "address" && check("payable")) ++pos_;
            return add(NodeKind::Identifier, since(start), {}, std::move(attrs));
        }
        if (accept("(")) {
            std::vector<NodeId> parts;
            bool expect_item = true;
            while (!check(")")) {
                if (accept(",")) {
                    expect_item = true;
                    continue;
                }
                if (!expect_item) fail("expected ',' or ')'");
                parts.push_back(parse_expression());
                expect_item = false;
            }
            ++pos_;
            return add_other("Tuple", since(start), std::move(parts));
        }
        if (accept("[")) {
            std::vector<NodeId> parts;
            if (!check("]")) {
                do {
                    parts.push_back(parse_expression());
                } while (accept(","));
            }
            expect("]");
            return add_other("InlineArray", since(start), std::move(parts));
        }
        fail("expected expression");
    }

    const SourceFile& file_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    int depth_ = 0;
    std::vector<AstNode> nodes_;
};

void assign_scope_chains(std::vector<AstNode>& nodes)
{
    for (AstNode& n : nodes) {
        if (n.kind != NodeKind::Identifier) continue;
        for (NodeId p = n.parent; p != no_node; p = nodes[p].parent) {
            switch (nodes[p].kind) {
            case NodeKind::Block:
            case NodeKind::FunctionDef:
            case NodeKind::ModifierDef:
            case NodeKind::ConstructorDef:
            case NodeKind::ContractDef:
                n.scope_chain.push_back(p);
                break;
            default:
                break;
            }
        }
    }
}

}  // namespace

ParseOutcome parse(std::shared_ptr<const SourceFile> file)
{
    ParseOutcome outcome;
    try {
        Parser parser(*file, detail::tokenize(file->text()));
        NodeId root = parser.parse_source_unit();
        std::vector<AstNode> nodes = parser.take_nodes();
        assign_scope_chains(nodes);
        outcome.tree.emplace(std::move(file), std::move(nodes), root);
        outcome.status = ParseStatus::Parsed;
    } catch (const detail::LexError& e) {
        outcome.diagnostics.push_back({e.span, e.what()});
    } catch (const ParseError& e) {
        outcome.diagnostics.push_back({e.span, e.what()});
    }
    return outcome;
}

ParseOutcome parse(SourceFile file)
{
    return parse(std::make_shared<const SourceFile>(std::move(file)));
}

ParseOutcome parse_text(std::string text, std::filesystem::path path)
{
    return parse(SourceFile(std::move(path), std::move(text)));
}

}  // namespace vulnseed
