#pragma once

#include <array>
#include <compare>
#include <string>
#include <vector>

namespace handopt {

/// Three phalanx lengths in integer hundredths of hand length, ordered
/// proximal-to-distal (metacarpal/proximal/distal for the thumb).
struct PhalanxTriple {
    int proximal = 0;
    int middle = 0;
    int distal = 0;

    int sum() const { return proximal + middle + distal; }
    bool ordered() const { return proximal >= middle && middle >= distal; }
    std::array<double, 3> lengths() const {
        return {proximal / 100.0, middle / 100.0, distal / 100.0};
    }
    /// "17-17-17" style identifier.
    std::string id() const;

    friend auto operator<=>(const PhalanxTriple&, const PhalanxTriple&) = default;
};

inline constexpr int kThumbTotal = 51;
inline constexpr int kFingerTotal = 45;
inline constexpr int kMinPhalanx = 10;

/// All triples summing to `total` with each entry >= `min_len`, in
/// lexicographic order. With `ordered`, only non-increasing triples.
/// Infeasible inputs yield an empty list.
std::vector<PhalanxTriple> enumerate_feasible_designs(int total, int min_len, bool ordered);

/// Same set, parameterized by (middle, distal) with proximal = total - middle - distal.
std::vector<PhalanxTriple> enumerate_by_elimination(int total, int min_len, bool ordered);

}  // namespace handopt
