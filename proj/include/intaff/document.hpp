#pragma once

// Text documents describing base spaces.
//
// A document is a JSON object with the optional sections "complex",
// "sheaf" (named sheaves), "affine", "polytope", "gluing", "classes" and
// "expected". Cells are referred to by id. Algebraic integers and rationals
// are decimal strings ("12", "-3/4"); counts (dimensions, ranks, degrees)
// are plain JSON numbers. `catalog <name> --export` writes a complete
// example of every section.
//
// Syntax errors are reported as "line L, column C: ...", semantic errors as
// "<json pointer>: ...", both with ErrorCode::Parse.

#include <string>

#include "intaff/catalog.hpp"

namespace intaff {

CatalogEntry parse_document(const std::string& text);
std::string serialize_document(const CatalogEntry& e);

// Throws Error(Parse) when the file cannot be read.
CatalogEntry read_document(const std::string& path);

}  // namespace intaff
