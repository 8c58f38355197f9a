#include "handopt/hand_model.hpp"

#include <sstream>

namespace handopt {

namespace {

DhRow row_deg(double alpha_deg, double a, double d, double offset_deg, bool actuated) {
    return DhRow{deg_to_rad(alpha_deg), a, d, deg_to_rad(offset_deg), actuated};
}

ChainTemplate default_thumb(const HandGeometry& g) {
    ChainTemplate t;
    t.name = "thumb";
    t.rows = {
        row_deg(0, g.a0p, 0, 0, true),
        row_deg(-90, g.a1p, 0, 0, true),
        row_deg(90, 0.17, 0, 0, true),
        row_deg(-90, 0, 0, 0, true),
        row_deg(0, 0.17, 0, 0, true),
        row_deg(0, 0.17, 0, 0, false),
    };
    t.a_labels = {"a0'", "a1'", "a2'", "0", "a4'", "a5'"};
    t.theta_labels = {"theta1'", "theta2'", "theta3'", "theta4'", "theta5'", "0"};
    t.ranges = {{-30, 90}, {-90, 30}, {-60, 60}, {-90, 0}, {-90, 0}};
    // theta1' opposition, theta3' abduction; theta2', theta4', theta5' flex.
    t.flexion = {false, true, false, true, true};
    t.design_rows = {2, 4, 5};
    return t;
}

ChainTemplate default_finger(const HandGeometry& g) {
    ChainTemplate t;
    t.name = "finger";
    t.rows = {
        row_deg(90, 0, 0, 90, false),
        row_deg(90, g.a1, 0, 0, true),
        row_deg(-90, 0, 0, 0, true),
        row_deg(0, 0.15, 0, 0, true),
        row_deg(0, 0.15, 0, 0, true),
        row_deg(0, 0.15, 0, 0, false),
    };
    t.a_labels = {"0", "a1", "0", "a3", "a4", "a5"};
    t.theta_labels = {"90", "theta2", "theta3", "theta4", "theta5", "0"};
    t.ranges = {{-30, 30}, {-90, 30}, {-90, 0}, {-90, 0}};
    t.flexion = {false, true, true, true};
    t.design_rows = {3, 4, 5};
    return t;
}

}  // namespace

const char* finger_name(Finger f) {
    switch (f) {
        case Finger::Index: return "index";
        case Finger::Middle: return "middle";
        case Finger::Ring: return "ring";
        case Finger::Little: return "little";
    }
    return "?";
}

HandModel HandModel::defaults() { return from_geometry(HandGeometry{}); }

HandModel HandModel::from_geometry(const HandGeometry& g) {
    HandModel m;
    m.geometry = g;
    m.thumb = default_thumb(m.geometry);
    m.finger = default_finger(m.geometry);
    m.thumb_base = BasePose{};

    // The finger chain runs along +z of its base at zero posture and its first
    // moving row carries a1 along that axis, so the base sits at d1 - a1 to
    // put the MCP joints at d1 and the extended fingertip at HL = d1 + lf.
    const double spacing = m.geometry.finger_spacing();
    const double z = m.geometry.d1 - m.geometry.a1;
    const std::array<double, 4> lateral{spacing, 0.0, -spacing, -2.0 * spacing};
    for (std::size_t i = 0; i < 4; ++i) {
        m.finger_bases[i] = BasePose{Vec3(0.0, lateral[i], z), Mat3::Identity()};
    }
    return m;
}

void HandModel::validate() const {
    for (const ChainTemplate* t : {&thumb, &finger}) {
        const auto n = t->rows.size();
        if (t->a_labels.size() != n || t->theta_labels.size() != n) {
            throw ContractError(t->name + ": label count differs from row count");
        }
        for (int r : t->design_rows) {
            if (r < 0 || static_cast<std::size_t>(r) >= n) throw ContractError(t->name + ": design row out of bounds");
        }
        // Constructing a chain runs the structural checks.
        (void)build_chain(*t, BasePose{}, PhalanxTriple{17, 17, 17});
    }
    validate_rotation(thumb_base.rotation, "thumb base");
    for (const auto& b : finger_bases) validate_rotation(b.rotation, "finger base");
}

SerialChain build_chain(const ChainTemplate& tmpl, const BasePose& base, const PhalanxTriple& design) {
    std::vector<DhRow> rows = tmpl.rows;
    const auto len = design.lengths();
    for (std::size_t k = 0; k < 3; ++k) rows.at(tmpl.design_rows[k]).a_prev = len[k];
    return SerialChain(base, std::move(rows), tmpl.ranges, tmpl.flexion);
}

SerialChain HandModel::thumb_chain(const PhalanxTriple& design) const {
    return build_chain(thumb, thumb_base, design);
}

SerialChain HandModel::finger_chain(const PhalanxTriple& design, Finger f) const {
    return build_chain(finger, finger_bases[static_cast<std::size_t>(f)], design);
}

}  // namespace handopt
