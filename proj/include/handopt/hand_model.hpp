#pragma once

#include "handopt/design.hpp"
#include "handopt/kinematics.hpp"

#include <array>
#include <string>
#include <vector>

namespace handopt {

/// Fixed hand dimensions, hand length normalized to 1.
struct HandGeometry {
    double hl = 1.0;
    double hw = 0.54;
    double lt = 0.51;
    double lf = 0.45;
    double a1 = 0.18;
    double a0p = 0.10;
    double a1p = 0.10;
    double d1 = 0.55;

    /// Lateral distance between adjacent fingers (HW = 3 * spacing).
    double finger_spacing() const { return hw / 3.0; }
};

/// A DH table with symbolic labels kept for the model dump. Rows listed in
/// `design_rows` get their a_{i-1} replaced by the proximal/middle/distal
/// phalanx length when a chain is built.
struct ChainTemplate {
    std::string name;
    std::vector<DhRow> rows;
    std::vector<std::string> a_labels;      // one per row, e.g. "a2'"
    std::vector<std::string> theta_labels;  // one per row, e.g. "theta3'" or "90"
    std::vector<JointRange> ranges;         // one per actuated row
    std::vector<bool> flexion;              // one per actuated row
    std::array<int, 3> design_rows{};
};

enum class Finger { Index = 0, Middle = 1, Ring = 2, Little = 3 };
inline constexpr std::array<Finger, 4> kAllFingers{Finger::Index, Finger::Middle, Finger::Ring, Finger::Little};
const char* finger_name(Finger f);

/// The five-finger hand: geometry, both DH templates and chain base poses.
struct HandModel {
    HandGeometry geometry;
    ChainTemplate thumb;
    ChainTemplate finger;
    BasePose thumb_base;
    std::array<BasePose, 4> finger_bases;

    /// Table defaults with the palm origin as the thumb base and the finger
    /// MCP centres at d1 along the palm axis.
    static HandModel defaults();
    /// Same layout derived from custom dimensions.
    static HandModel from_geometry(const HandGeometry& g);

    SerialChain thumb_chain(const PhalanxTriple& design) const;
    SerialChain finger_chain(const PhalanxTriple& design, Finger f) const;

    /// Checks template consistency; throws ContractError.
    void validate() const;
};

SerialChain build_chain(const ChainTemplate& tmpl, const BasePose& base, const PhalanxTriple& design);

}  // namespace handopt
