#pragma once

#include "handopt/joint_grid.hpp"
#include "handopt/kinematics.hpp"
#include "handopt/voxel_set.hpp"

#include <cmath>
#include <optional>
#include <vector>

namespace handopt {

/// Neumaier-compensated accumulator.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    void add(const CompensatedSum& other) {
        add(other.sum_);
        add(other.comp_);
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// sqrt(det(J J^T)); round-off negatives are clamped to zero.
double manipulability(const Jacobian& jac);

/// Fingertip positions for every grid configuration, in grid order.
std::vector<Point3> sample_workspace(const SerialChain& chain, const JointGrid& grid, int jobs = 0);

/// Mean manipulability over the grid.
double global_manipulability(const SerialChain& chain, const JointGrid& grid, int jobs = 0);

/// Values for the non-flexion joints while the flexion grid is swept, in
/// degrees, one per actuated joint (flexion entries are ignored). Empty means
/// all zero.
using FixedPosture = std::vector<double>;

/// Mean norm of the Jacobian column of the most distal flexion joint over
/// `fe_grid`, which spans the flexion joints only.
double distal_sensitivity(const SerialChain& chain, const JointGrid& fe_grid, const FixedPosture& fixed = {});

struct SweepOptions {
    bool manipulability = true;
    std::vector<double> voxel_deltas;  // one voxel set per entry
    int jobs = 0;                      // 0: OpenMP default
};

struct SweepResult {
    std::size_t configurations = 0;
    double global_manipulability = 0.0;
    std::vector<VoxelSet> voxels;  // parallel to SweepOptions::voxel_deltas
};

/// One pass over the grid, computing mean manipulability and/or the
/// occupied voxel sets. Work is split into fixed chunks so the result does not
/// depend on the thread count.
SweepResult sweep_chain(const SerialChain& chain, const JointGrid& grid, const SweepOptions& options);

namespace reference {

// Literal per-configuration implementations: one chain product per sample,
// no caching, serial. Kept as the oracle for the parallel kernels.

std::vector<Point3> sample_workspace(const SerialChain& chain, const JointGrid& grid);
double global_manipulability(const SerialChain& chain, const JointGrid& grid);
VoxelSet workspace_voxels(const SerialChain& chain, const JointGrid& grid, double delta);

}  // namespace reference

}  // namespace handopt
