#pragma once

#include "handopt/kinematics.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace handopt {

/// Cartesian product of per-joint sample lists. Configurations are ordered
/// lexicographically with joint 0 outermost (the last joint varies fastest).
class JointGrid {
public:
    JointGrid() = default;
    /// Explicit per-joint samples in degrees; every list must be non-empty.
    explicit JointGrid(std::vector<std::vector<double>> samples_deg, std::vector<double> steps_deg = {});

    int dof() const { return static_cast<int>(samples_deg_.size()); }
    std::size_t size() const { return count_; }
    const std::vector<double>& samples_deg(int joint) const { return samples_deg_[joint]; }
    const std::vector<double>& samples_rad(int joint) const { return samples_rad_[joint]; }
    std::size_t samples_per_joint(int joint) const { return samples_deg_[joint].size(); }
    const std::vector<double>& steps_deg() const { return steps_deg_; }

    /// Joint angles (radians) of configuration `index`, written to `out`.
    void configuration(std::size_t index, std::span<double> out) const;

    /// Throws RangeError when some sample lies outside `ranges`.
    void check_within(const std::vector<JointRange>& ranges) const;

private:
    std::vector<std::vector<double>> samples_deg_;
    std::vector<std::vector<double>> samples_rad_;
    std::vector<double> steps_deg_;
    std::size_t count_ = 0;
};

/// q_{i,k} = q_{i,min} + (k-1) * step for every k keeping q within the range.
/// Throws ParameterError for a non-positive step.
JointGrid build_joint_grid(const std::vector<JointRange>& ranges, double step_deg);

/// Grid over the flexion joints of `chain` only, at `step_deg`.
JointGrid build_flexion_grid(const SerialChain& chain, double step_deg);

}  // namespace handopt
