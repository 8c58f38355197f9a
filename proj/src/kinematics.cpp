#include "handopt/kinematics.hpp"

#include <Eigen/LU>

#include <array>
#include <cmath>
#include <sstream>

namespace handopt {

namespace {

// Degree round trips (deg -> rad -> deg) may overshoot by an ulp or so.
constexpr double kRangeSlackDeg = 1e-9;

}  // namespace

Mat4 Transform::matrix() const {
    Mat4 m = Mat4::Identity();
    m.topLeftCorner<3, 3>() = rotation;
    m.topRightCorner<3, 1>() = translation;
    return m;
}

Transform compose(const Transform& lhs, const Transform& rhs) {
    Transform out;
    out.rotation.noalias() = lhs.rotation * rhs.rotation;
    out.translation.noalias() = lhs.rotation * rhs.translation;
    out.translation += lhs.translation;
    return out;
}

void validate_rotation(const Mat3& r, const std::string& what) {
    if (!r.allFinite()) throw ContractError(what + ": rotation has non-finite entries");
    const double ortho = (r * r.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff();
    if (ortho > 1e-9) throw ContractError(what + ": rotation is not orthonormal");
    if (std::abs(r.determinant() - 1.0) > 1e-9) throw ContractError(what + ": rotation determinant is not +1");
}

SerialChain::SerialChain(BasePose base, std::vector<DhRow> rows, std::vector<JointRange> ranges,
                         std::vector<bool> flexion)
    : base_(std::move(base)), rows_(std::move(rows)), ranges_(std::move(ranges)), flexion_(std::move(flexion)) {
    validate_rotation(base_.rotation, "chain base");
    if (!base_.translation.allFinite()) throw ContractError("chain base translation is not finite");

    int actuated = 0;
    for (const auto& row : rows_) {
        if (!std::isfinite(row.alpha_prev) || !std::isfinite(row.a_prev) || !std::isfinite(row.d) ||
            !std::isfinite(row.theta_offset)) {
            throw ContractError("DH row has non-finite parameters");
        }
        if (row.actuated) ++actuated;
    }
    if (actuated != static_cast<int>(ranges_.size())) {
        std::ostringstream os;
        os << "chain has " << actuated << " actuated rows but " << ranges_.size() << " joint ranges";
        throw ContractError(os.str());
    }
    if (actuated > kMaxJoints) throw ContractError("chain exceeds the supported number of actuated joints");
    for (const auto& r : ranges_) {
        if (!(r.min_deg <= r.max_deg)) throw ContractError("joint range has min > max");
    }
    if (flexion_.empty()) flexion_.assign(ranges_.size(), true);
    if (flexion_.size() != ranges_.size()) throw ContractError("flexion mask size differs from joint count");
}

double SerialChain::reach_bound() const {
    double sum = 0.0;
    for (const auto& row : rows_) sum += std::abs(row.a_prev) + std::abs(row.d);
    return sum;
}

SerialChain SerialChain::transformed(const Transform& t) const {
    const Transform moved = t * base_.transform();
    return SerialChain(BasePose{moved.translation, moved.rotation}, rows_, ranges_, flexion_);
}

Transform link_transform(const DhRow& row, double theta) {
    const double ca = std::cos(row.alpha_prev);
    const double sa = std::sin(row.alpha_prev);
    const double th = row.theta_offset + theta;
    const double ct = std::cos(th);
    const double st = std::sin(th);

    Transform t;
    t.rotation << ct, -st, 0.0,
                  ca * st, ca * ct, -sa,
                  sa * st, sa * ct, ca;
    t.translation << row.a_prev, -sa * row.d, ca * row.d;
    return t;
}

void check_joint_vector(const SerialChain& chain, JointAngles q) {
    if (static_cast<int>(q.size()) != chain.dof()) {
        std::ostringstream os;
        os << "joint vector has " << q.size() << " entries, chain expects " << chain.dof();
        throw ContractError(os.str());
    }
    for (int i = 0; i < chain.dof(); ++i) {
        const double deg = rad_to_deg(q[i]);
        const auto& r = chain.ranges()[i];
        if (!std::isfinite(deg) || deg < r.min_deg - kRangeSlackDeg || deg > r.max_deg + kRangeSlackDeg) {
            std::ostringstream os;
            os << "joint " << i << " value " << deg << " deg outside [" << r.min_deg << ", " << r.max_deg << "]";
            throw RangeError(os.str(), i);
        }
    }
}

Transform chain_transform(const SerialChain& chain, JointAngles q) {
    check_joint_vector(chain, q);
    Transform t = chain.base().transform();
    std::size_t j = 0;
    for (const auto& row : chain.rows()) {
        t = t * link_transform(row, row.actuated ? q[j++] : 0.0);
    }
    return t;
}

Point3 fingertip_position(const SerialChain& chain, JointAngles q) {
    return chain_transform(chain, q).translation;
}

Jacobian positional_jacobian(const SerialChain& chain, JointAngles q) {
    check_joint_vector(chain, q);
    const int n = chain.dof();
    Jacobian jac(3, n);

    // Joint i rotates about z of the frame produced by its own row; Rot_z
    // leaves that axis and origin unchanged, so the post-row frame is used.
    std::array<Vec3, kMaxJoints> axes;
    std::array<Vec3, kMaxJoints> origins;
    Transform t = chain.base().transform();
    int j = 0;
    for (const auto& row : chain.rows()) {
        t = t * link_transform(row, row.actuated ? q[j] : 0.0);
        if (row.actuated) {
            axes[j] = t.rotation.col(2);
            origins[j] = t.translation;
            ++j;
        }
    }
    const Vec3 tip = t.translation;
    for (int i = 0; i < n; ++i) jac.col(i) = axes[i].cross(tip - origins[i]);
    return jac;
}

}  // namespace handopt
