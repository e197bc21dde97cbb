#pragma once
#include <memory>
#include <string>
#include <vector>

#include "nexact/algebra.hpp"
#include "nexact/modcat.hpp"

namespace nexact {

/* Line-oriented description files.  All three parsers share the same
 * conventions: `#` starts a comment, blank lines are skipped, and every
 * rejection is an InputError naming the offending line ("line 12: ...").
 *
 * Algebra file:
 *   field p=<prime>
 *   vertex <label>                 (one per line, in order)
 *   arrow <name>: <src> -> <tgt>
 *   relation <term> [± <term> ...]  where a term is [coeff*]path and the
 *                                   path `b*a` means "a then b"
 *   n = <positive integer>          (optional; the algebra's default)
 */

struct AlgebraFile {
    std::unique_ptr<Algebra> alg;
    int n = 1;
};

AlgebraFile parse_algebra_file(const std::string& text);

/* Module bundle: any number of blocks
 *   module <name> over <side>      side is A or A^op
 *   dim <vertex> = <k>             unlisted vertices get 0
 *   map <arrow> = [[...],[...]]    rows = target dim; unlisted maps are zero
 * Entries are arbitrary integers and are reduced mod p.  Every block is
 * validated (shapes and relations) before it is returned. */

struct NamedModule {
    std::string name;
    Module mod;
};

std::vector<NamedModule> parse_module_file(const std::string& text, const Algebra& a);

// Structure file: one module name per line, referring to a module bundle.
std::vector<std::string> parse_structure_file(const std::string& text);

// --- serialization ------------------------------------------------------------

// Nested-array form "[[1,0],[0,1]]"; "[]" for an empty matrix.
std::string mat_text(const Mat& m);

// A module block in the file format above, replayable through the parser.
std::string module_file_text(const std::string& name, const Module& m);

}  // namespace nexact
