#pragma once

#include <stdexcept>

namespace opcx {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/* Requested operation is not defined over the given coefficient ring
 * (e.g. rank over Z, coinvariants of a nontrivial action over Z). */
struct UnsupportedRing : Error {
    using Error::Error;
};

} // namespace opcx
