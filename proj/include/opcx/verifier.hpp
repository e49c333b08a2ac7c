#pragma once

/* Named, reproducible verification scenarios: the positive-characteristic
 * counterexample (joining a contractible M to COM changes homology), and the
 * two cases of the corrected statement (O(0) = 0 with n > 0; coefficients
 * containing Q), each producing a structured report.
 */

#include "opcx/operad.hpp"

#include <optional>
#include <string>
#include <vector>

namespace opcx::verify {

enum class Verdict { QisoUpToTruncation, NotQiso, Unsupported };

std::string verdict_str(Verdict v);

struct Params {
    exact::RingDesc ring = exact::RingDesc::rationals();
    std::string operad;
    int n = 0;
    int s = 0;
    int r_max = 0;
    int max_s = 0;
};

struct Report {
    std::string scenario;
    Params params;
    std::vector<ops::ComponentVerdict> components; // ordered by (r, |S|, code)
    Verdict verdict = Verdict::QisoUpToTruncation;
    // |Aut| = 1 for every enumerated class; asserted in case (i)
    std::optional<bool> aut_all_trivial;
    // NOT_QISO only: the first |S| >= 1 component with nonzero homology
    std::string witness_code;
    int witness_r = -1;
    std::string unsupported_reason;
};

/// COM over F_p, M = cone(id)[s], arity 0, truncated at |S| <= max_power.
/// Cross-checks the coproduct dimensions against the symmetric-power oracle.
Report run_counterexample(unsigned long p, int max_power, int s);

/// O(0) = 0 and n > 0: every class has trivial automorphisms and every
/// |S| >= 1 component is acyclic, for all r <= r_max. Any ring.
Report run_case_i(const std::string& operad, int n, exact::RingDesc ring, int r_max, int max_s,
                  int s);

/// Coefficients Q: every |S| >= 1 component is acyclic, for all r <= r_max.
Report run_case_ii(const std::string& operad, int n, int r_max, int max_s, int s);

/// The m-th symmetric power of a complex: coinvariants of the m-fold tensor
/// power under the full symmetric group (Koszul-signed transpositions),
/// assembled without any tree machinery.
chain::Complex symmetric_power_oracle(const chain::Complex& m_complex, int power);

} // namespace opcx::verify
