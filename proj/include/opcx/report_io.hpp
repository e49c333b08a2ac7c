#pragma once

/* Report renderings: a JSON document and a flat tab-separated table (one row
 * per component per degree). Identical parameters produce byte-identical
 * output.
 */

#include "opcx/verifier.hpp"

#include <string>

namespace opcx::verify {

std::string report_json(const Report& report);
std::string report_tsv(const Report& report);

} // namespace opcx::verify
