#pragma once

#include <string>

#include "qrl/frontend/ast.hpp"

namespace qrl::frontend {

/// Canonical source text for a parsed tree. Re-parsing the output yields a
/// structurally equal tree; an empty Program renders as "".
std::string pretty(const Node &node);

/// Canonical text of a single expression.
std::string pretty_expression(const Node &expr);

} // namespace qrl::frontend
