#include "handopt/design.hpp"

#include <algorithm>

namespace handopt {

std::string PhalanxTriple::id() const {
    return std::to_string(proximal) + "-" + std::to_string(middle) + "-" + std::to_string(distal);
}

std::vector<PhalanxTriple> enumerate_feasible_designs(int total, int min_len, bool ordered) {
    std::vector<PhalanxTriple> out;
    if (min_len < 0 || total < 3 * min_len) return out;
    for (int p = min_len; p <= total - 2 * min_len; ++p) {
        for (int m = min_len; m <= total - p - min_len; ++m) {
            const PhalanxTriple t{p, m, total - p - m};
            if (ordered && !t.ordered()) continue;
            out.push_back(t);
        }
    }
    return out;
}

std::vector<PhalanxTriple> enumerate_by_elimination(int total, int min_len, bool ordered) {
    std::vector<PhalanxTriple> out;
    if (min_len < 0 || total < 3 * min_len) return out;
    for (int m = min_len; m <= total; ++m) {
        for (int d = min_len; d <= total; ++d) {
            const int p = total - m - d;
            if (p < min_len) continue;
            const PhalanxTriple t{p, m, d};
            if (ordered && !t.ordered()) continue;
            out.push_back(t);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace handopt
