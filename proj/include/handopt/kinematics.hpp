#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace handopt {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Point3 = Eigen::Vector3d;

/// Upper bound on actuated joints per chain; keeps Jacobians on the stack.
inline constexpr int kMaxJoints = 8;

using Jacobian = Eigen::Matrix<double, 3, Eigen::Dynamic, Eigen::ColMajor, 3, kMaxJoints>;

/// Joint vector in radians, one entry per actuated row.
using JointAngles = std::span<const double>;

/// Thrown when an input violates a structural precondition (dimension, count).
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a joint value lies outside its range of motion.
class RangeError : public std::out_of_range {
public:
    RangeError(const std::string& what, int joint) : std::out_of_range(what), joint_(joint) {}
    int joint() const noexcept { return joint_; }

private:
    int joint_;
};

/// Thrown for non-positive steps, voxel sizes and similar scalar parameters.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

constexpr double deg_to_rad(double deg) { return deg * (3.14159265358979323846 / 180.0); }
constexpr double rad_to_deg(double rad) { return rad * (180.0 / 3.14159265358979323846); }

/// Rigid transform kept as rotation + translation. Composition order is the
/// same everywhere so that cached prefix products in the sweep kernels are
/// bit-identical to a from-scratch chain product.
struct Transform {
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();

    static Transform identity() { return {}; }

    Mat4 matrix() const;
    Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
};

Transform compose(const Transform& lhs, const Transform& rhs);
inline Transform operator*(const Transform& lhs, const Transform& rhs) { return compose(lhs, rhs); }

/// One modified-DH row (alpha_{i-1}, a_{i-1}, d_i, theta_i). Angles in radians.
struct DhRow {
    double alpha_prev = 0.0;
    double a_prev = 0.0;
    double d = 0.0;
    double theta_offset = 0.0;
    bool actuated = false;
};

/// Inclusive range of motion in degrees.
struct JointRange {
    double min_deg = 0.0;
    double max_deg = 0.0;

    bool contains_deg(double deg) const { return deg >= min_deg && deg <= max_deg; }
};

/// Pose of a chain's first frame in the palm frame.
struct BasePose {
    Vec3 translation = Vec3::Zero();
    Mat3 rotation = Mat3::Identity();

    Transform transform() const { return {rotation, translation}; }
};

/// Checks orthonormality and det = +1; throws ContractError otherwise.
void validate_rotation(const Mat3& r, const std::string& what);

/// Immutable serial chain: base pose, DH rows, one range per actuated row and
/// one flexion flag per actuated row (used to pick the sensitivity joints).
class SerialChain {
public:
    SerialChain(BasePose base, std::vector<DhRow> rows, std::vector<JointRange> ranges,
                std::vector<bool> flexion = {});

    const BasePose& base() const { return base_; }
    const std::vector<DhRow>& rows() const { return rows_; }
    const std::vector<JointRange>& ranges() const { return ranges_; }
    const std::vector<bool>& flexion() const { return flexion_; }
    int dof() const { return static_cast<int>(ranges_.size()); }

    /// Sum of |a_prev| + |d| over all rows: a bound on tip distance from the base.
    double reach_bound() const;

    /// Returns a copy whose base is pre-multiplied by `t`.
    SerialChain transformed(const Transform& t) const;

private:
    BasePose base_;
    std::vector<DhRow> rows_;
    std::vector<JointRange> ranges_;
    std::vector<bool> flexion_;
};

/// Rot_x(alpha_prev) * Trans_x(a_prev) * Trans_z(d) * Rot_z(theta_offset + theta).
Transform link_transform(const DhRow& row, double theta);

/// Base pose times every row transform, in row order. Throws ContractError on
/// dimension mismatch, RangeError for a joint outside its range.
Transform chain_transform(const SerialChain& chain, JointAngles q);

Point3 fingertip_position(const SerialChain& chain, JointAngles q);

/// Positional Jacobian; column i = z_i x (p_e - p_i) for actuated row i.
Jacobian positional_jacobian(const SerialChain& chain, JointAngles q);

/// Checks the dimension and range preconditions shared by the three chain
/// operations above.
void check_joint_vector(const SerialChain& chain, JointAngles q);

}  // namespace handopt
