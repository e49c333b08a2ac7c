#pragma once

/* Plain-text description files for symmetric collections. One document per
 * collection:
 *
 *   ring Q | Fp <p> | Z
 *   max-arity <m>
 *   arity <m>
 *   gen <label> <degree>
 *   diff <source-label> <target-label> <scalar>     # d(source) += scalar * target
 *   act <k> <source-label> <target-label> <sign>    # generator s_k, signed permutation
 *   unit <label>                                    # inside the arity-1 block
 *
 * Scalars are bit-exact: integers or fractions "p/q". Blank lines and
 * '#' comments are ignored.
 */

#include "opcx/operad.hpp"

#include <iosfwd>
#include <string>

namespace opcx::ops {

SymmetricCollection load_collection(std::istream& in);
SymmetricCollection load_collection_file(const std::string& path);
std::string save_collection(const SymmetricCollection& o);

} // namespace opcx::ops
