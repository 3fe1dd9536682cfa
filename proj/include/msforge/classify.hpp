#ifndef MSFORGE_CLASSIFY_HPP
#define MSFORGE_CLASSIFY_HPP

#include <string>
#include <vector>

namespace msforge::classify {

// One solution of the ramification identity: branch count (t for the
// rotation-group analysis, s for the Delta_0 analysis), the group order,
// and the sorted multiplicity tuple.
struct RamificationCase {
    int branch_count = 0;
    long group_order = 0;
    std::vector<long> m;

    bool operator==(const RamificationCase&) const = default;
};

// Exhausts t in {1,2,3}, |R| in {gamma+1, 2(gamma+1), 4(gamma+1)},
// m_i in [2, |R|] sorted ascending, keeping exactly the tuples satisfying
//   2 gamma = sum_i (m_i - 1) |R| / m_i
// in exact integer arithmetic.
std::vector<RamificationCase> enumerate_R_cases(int gamma);

// swap = true: the "p1 can be transformed to p2" analysis,
//   4 gamma + 2 = sum_i (m_i - 1) |Delta0| / m_i with |Delta0| = 2(gamma+1),
//   s in {1,2,3} exhausted (s=1 has no solutions).
// swap = false: the "p1 cannot be transformed to p2" analysis,
//   2 gamma = sum_i (m_i - 1) |Delta0| / m_i, which forces s=1, m1=gamma+1.
std::vector<RamificationCase> enumerate_Delta0_cases(int gamma, bool swap);

enum class CandidateStatus {
    constructed,
    excluded_by_period,
    excluded_by_genus,
    excluded_by_symmetry,
};
std::string to_string(CandidateStatus s);

// Terminal Weierstrass-data candidates of the uniqueness analysis for a
// given (genus, end-multiplicity profile), with the machine-checkable
// exclusion reasons.
struct CandidateData {
    std::string curve_template;
    std::string g_template;
    std::string eta_template;
    std::vector<std::string> transformations;
    CandidateStatus status = CandidateStatus::constructed;
    std::string reason;
};

std::vector<CandidateData> candidate_catalog(int gamma, std::pair<int, int> d_profile);

// Canonical text rendering of tables 1..5 of the classification output
// (the t=1, t=2, t=3, swap, no-swap tables) for gamma in [1, gamma_max];
// golden files are committed against this exact format.
std::string render_table(int table, int gamma_max);
std::string render_tables_json(int gamma_max);

} // namespace msforge::classify

#endif
