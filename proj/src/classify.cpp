#include "msforge/classify.hpp"
#include "msforge/errors.hpp"

#include <nlohmann/json.hpp>

#include <sstream>

namespace msforge::classify {

namespace {

// Enumerate sorted tuples 2 <= m_1 <= ... <= m_count <= G solving
//   target/G == sum_i (m_i - 1)/m_i
// exactly: iterate the first count-1 coordinates and solve the last one
// over the rationals.
void enumerate_tuples(long target, long G, int count,
                      std::vector<RamificationCase>& out, int branch_count) {
    std::vector<long> prefix(count - 1, 2);
    auto rec = [&](auto&& self, int depth, long lo) -> void {
        if (depth == count - 1) {
            // remaining fraction p/q = target/G - sum (m_i-1)/m_i
            long q = G, p = target;
            for (long mi : prefix) {
                // p/q - (mi-1)/mi = (p*mi - q*(mi-1)) / (q*mi)
                p = p * mi - q * (mi - 1);
                q = q * mi;
            }
            if (p <= 0 || p >= q) return;       // (m-1)/m lies in (0,1)
            if (q % (q - p) != 0) return;
            const long m_last = q / (q - p);
            if (m_last < lo || m_last > G) return;
            std::vector<long> m = prefix;
            m.push_back(m_last);
            out.push_back({branch_count, G, m});
            return;
        }
        for (long mi = lo; mi <= G; ++mi) {
            prefix[depth] = mi;
            self(self, depth + 1, mi);
        }
    };
    rec(rec, 0, 2);
}

} // namespace

std::vector<RamificationCase> enumerate_R_cases(int gamma) {
    if (gamma < 1) throw ValidationError("enumerate_R_cases: gamma must be >= 1");
    std::vector<RamificationCase> out;
    for (int t = 1; t <= 3; ++t)
        for (long G : {long(gamma) + 1, 2L * (gamma + 1), 4L * (gamma + 1)})
            enumerate_tuples(2L * gamma, G, t, out, t);
    return out;
}

std::vector<RamificationCase> enumerate_Delta0_cases(int gamma, bool swap) {
    if (gamma < 1) throw ValidationError("enumerate_Delta0_cases: gamma must be >= 1");
    std::vector<RamificationCase> out;
    const long G = 2L * (gamma + 1);
    if (swap) {
        for (int s = 1; s <= 3; ++s)
            enumerate_tuples(4L * gamma + 2, G, s, out, s);
    } else {
        for (int s = 1; s <= 3; ++s)
            enumerate_tuples(2L * gamma, G, s, out, s);
    }
    return out;
}

std::string to_string(CandidateStatus s) {
    switch (s) {
        case CandidateStatus::constructed: return "constructed";
        case CandidateStatus::excluded_by_period: return "excluded-by-period";
        case CandidateStatus::excluded_by_genus: return "excluded-by-genus";
        case CandidateStatus::excluded_by_symmetry: return "excluded-by-symmetry";
    }
    return "?";
}

std::vector<CandidateData> candidate_catalog(int gamma, std::pair<int, int> d_profile) {
    std::vector<CandidateData> out;
    if (gamma == 1 && d_profile == std::pair<int, int>{1, 3}) {
        out.push_back({"w^2 = z(z^2-1)", "c w", "c' dz/(z^2 w)",
                       {"R(z,w) = (z,-w)", "tau(z,w) = (-z, i w)"},
                       CandidateStatus::constructed,
                       "period condition solved by c = sqrt(A_1/B_1)"});
        out.push_back({"w^2 = z(z^2-1)", "c w", "c' dz/(z w)",
                       {"R(z,w) = (z,-w)", "tau(z,w) = (-z, i w)"},
                       CandidateStatus::excluded_by_period,
                       "period identity forces c^2 < 0 (nonexistence case genus1_alt)"});
        return out;
    }
    if (gamma >= 2 && gamma % 2 == 0 && d_profile == std::pair<int, int>{2, 2}) {
        std::ostringstream curve;
        curve << "w^" << (gamma + 1) << " = z^2 ((z-1)/(z-a))^" << gamma;
        out.push_back({curve.str(), "c w", "c' dz/(z w)",
                       {"R(z,w) = (z, e^(2 pi i/(gamma+1)) w)",
                        "sigma(z,w) = (a/z, a^((gamma+2)/(gamma+1))/w)"},
                       CandidateStatus::constructed,
                       "period condition solved by the unique a in (1,oo)"});
        std::ostringstream c2;
        c2 << "w^" << (gamma + 1) << " = z^2 (z^2-1)^" << (gamma / 2);
        out.push_back({c2.str(), "c w", "eta^(gamma+1) = c'' (dz)^(gamma+1) z^2/(z g^2)^(gamma+1)",
                       {"R(z,w) = (z, e^(2 pi i/(gamma+1)) w)", "tau(z,w) = (-z, w)"},
                       CandidateStatus::excluded_by_genus,
                       "reparameterizes to v^(gamma+1) = (u^(2 gamma+2)-1)^(gamma/2), "
                       "whose genus exceeds gamma"});
        std::ostringstream c4a, c4b;
        c4a << "w^" << (gamma + 1) << " = z (z-1)^" << gamma << "/(z+1)^" << (gamma + 2);
        c4b << "w^" << (gamma + 1) << " = z^2 (z-1)^" << (gamma - 2) << "/(z+1)^" << (gamma + 2);
        for (const std::string& t : {c4a.str(), c4b.str()})
            out.push_back({t, "c w", "c' dz/(z w) type",
                           {"R(z,w) = (z, e^(2 pi i/(gamma+1)) w)",
                            "sigma(z,w) = (1/z, w)"},
                           CandidateStatus::excluded_by_genus,
                           "excluded like the previous case (double-cover regrouping "
                           "raises the genus)"});
        if (gamma == 2) {
            out.push_back({"w^3 = (z^2-1)^2/z^2", "c/w", "c' w dz/z",
                           {"R(z,w) = (z, e^(2 pi i/3) w)", "sigma(z,w) = (1/z, w)"},
                           CandidateStatus::excluded_by_symmetry,
                           "sigma(z,w) = (1/z,w) swaps the two ends, contradicting "
                           "the no-swap assumption"});
            out.push_back({"w^3 = ((z-1)(z-a)/z)^2", "c/w", "c' w dz/z",
                           {"R(z,w) = (z, e^(2 pi i/3) w)", "sigma(z,w) = (a/z, w)"},
                           CandidateStatus::excluded_by_period,
                           "period identity sign-definite for every real a "
                           "(nonexistence cases i-iii)"});
        }
        return out;
    }
    throw ValidationError("candidate_catalog: unsupported (gamma, d-profile) pair");
}

namespace {

void render_cases(std::ostream& os, int gamma, const std::vector<RamificationCase>& cases,
                  int want_branches, long want_group) {
    for (const auto& c : cases) {
        if (c.branch_count != want_branches) continue;
        if (want_group > 0 && c.group_order != want_group) continue;
        os << "gamma=" << gamma << " group=" << c.group_order << " m=";
        for (size_t i = 0; i < c.m.size(); ++i)
            os << (i ? "," : "") << c.m[i];
        os << "\n";
    }
}

} // namespace

std::string render_table(int table, int gamma_max) {
    std::ostringstream os;
    switch (table) {
        case 4: os << "# rotation group, one extra branch fiber (t=1)\n"; break;
        case 5: os << "# rotation group, two extra branch fibers (t=2)\n"; break;
        case 6: os << "# rotation group, three extra branch fibers (t=3)\n"; break;
        case 7: os << "# holomorphic group, ends swapped (s=2,3)\n"; break;
        case 8: os << "# holomorphic group, ends fixed (s=1)\n"; break;
        default: throw ValidationError("render_table: table must be 4..8");
    }
    for (int gamma = 1; gamma <= gamma_max; ++gamma) {
        if (table >= 4 && table <= 6) {
            const auto cases = enumerate_R_cases(gamma);
            render_cases(os, gamma, cases, table - 3, -1);
        } else {
            const auto cases = enumerate_Delta0_cases(gamma, table == 7);
            for (int s = 1; s <= 3; ++s) render_cases(os, gamma, cases, s, -1);
        }
    }
    return os.str();
}

std::string render_tables_json(int gamma_max) {
    nlohmann::json j;
    for (int table = 4; table <= 8; ++table) {
        nlohmann::json rows = nlohmann::json::array();
        for (int gamma = 1; gamma <= gamma_max; ++gamma) {
            std::vector<RamificationCase> cases;
            if (table <= 6) cases = enumerate_R_cases(gamma);
            else cases = enumerate_Delta0_cases(gamma, table == 7);
            for (const auto& c : cases) {
                if (table <= 6 && c.branch_count != table - 3) continue;
                rows.push_back({{"gamma", gamma},
                                {"branch_fibers", c.branch_count},
                                {"group_order", c.group_order},
                                {"m", c.m}});
            }
        }
        j["table" + std::to_string(table)] = rows;
    }
    return j.dump(2);
}

} // namespace msforge::classify
