#pragma once

#include "vulnseed/rewrite.hpp"
#include "vulnseed/syntax.hpp"

#include <array>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace vulnseed {

/// The six vulnerability-injecting mutation operators.
enum class OperatorId {
    UC,   // unchecked low-level call return value
    US,   // unchecked send
    TX,   // authentication via tx.origin
    UR,   // unused return
    CL,   // multiple calls in a loop
    DTU,  // delegatecall to untrusted callee
};

inline constexpr std::array<OperatorId, 6> all_operators = {OperatorId::UC, OperatorId::US, OperatorId::TX,
                                                            OperatorId::UR, OperatorId::CL, OperatorId::DTU};

std::string_view to_string(OperatorId op);
std::optional<OperatorId> operator_from_string(std::string_view name);

struct OperatorConfig {
    unsigned cl_loop_bound = 1000;
    bool cl_skip_inside_loop = false;
    std::set<OperatorId> enabled{all_operators.begin(), all_operators.end()};
};

struct MutationSite {
    OperatorId op = OperatorId::UC;
    std::filesystem::path file;
    NodeId anchor = no_node;
    Span anchor_span;
    std::size_t line = 0;
    std::string original_snippet;
    std::size_t ordinal = 0;
};

/// Whether `node` has the shape operator `op` mutates. The matchers are exactly the nodes
/// for which this holds (CL additionally honours `cl_skip_inside_loop`).
bool satisfies_shape(OperatorId op, const SyntaxTree& tree, NodeId node);

std::vector<MutationSite> match_uc(const SyntaxTree& tree);
std::vector<MutationSite> match_us(const SyntaxTree& tree);
std::vector<MutationSite> match_tx(const SyntaxTree& tree);
std::vector<MutationSite> match_ur(const SyntaxTree& tree);
std::vector<MutationSite> match_cl(const SyntaxTree& tree, const OperatorConfig& cfg = {});
std::vector<MutationSite> match_dtu(const SyntaxTree& tree);

EditSet transform_uc(const SyntaxTree& tree, const MutationSite& site);
EditSet transform_us(const SyntaxTree& tree, const MutationSite& site);
EditSet transform_tx(const SyntaxTree& tree, const MutationSite& site);
EditSet transform_ur(const SyntaxTree& tree, const MutationSite& site);
EditSet transform_cl(const SyntaxTree& tree, const MutationSite& site, const OperatorConfig& cfg);
EditSet transform_dtu(const SyntaxTree& tree, const MutationSite& site);

std::vector<MutationSite> match(OperatorId op, const SyntaxTree& tree, const OperatorConfig& cfg = {});
EditSet transform(const SyntaxTree& tree, const MutationSite& site, const OperatorConfig& cfg = {});

/// Name CL uses for its loop counter at `site`.
std::string cl_loop_variable(const SyntaxTree& tree, const MutationSite& site);

// Call-chain helpers shared with tests.

/// For a call node, the invoked member name after stripping call options and the legacy
/// `.value(..)`/`.gas(..)` modifiers, and the MemberAccess node carrying it.
struct InvokedMember {
    std::string name;
    NodeId member_access = no_node;
};
std::optional<InvokedMember> invoked_member(const SyntaxTree& tree, NodeId call);

}  // namespace vulnseed
