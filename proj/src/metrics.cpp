#include "handopt/metrics.hpp"

#include <Eigen/LU>

#include <sstream>

namespace handopt {

double manipulability(const Jacobian& jac) {
    const Mat3 jjt = jac * jac.transpose();
    const double det = jjt.determinant();
    return det > 0.0 ? std::sqrt(det) : 0.0;
}

double distal_sensitivity(const SerialChain& chain, const JointGrid& fe_grid, const FixedPosture& fixed) {
    const int n = chain.dof();
    std::vector<int> fe_joints;
    for (int j = 0; j < n; ++j) {
        if (chain.flexion()[j]) fe_joints.push_back(j);
    }
    if (fe_joints.empty()) throw ContractError("chain has no flexion joints");
    if (fe_grid.dof() != static_cast<int>(fe_joints.size())) {
        std::ostringstream os;
        os << "flexion grid has " << fe_grid.dof() << " joints, chain has " << fe_joints.size() << " flexion joints";
        throw ContractError(os.str());
    }
    if (!fixed.empty() && static_cast<int>(fixed.size()) != n) {
        throw ContractError("fixed posture must list one angle per actuated joint");
    }

    std::vector<double> q(n, 0.0);
    for (int j = 0; j < n; ++j) q[j] = fixed.empty() ? 0.0 : deg_to_rad(fixed[j]);
    std::vector<double> fe(fe_joints.size());
    const int distal = fe_joints.back();

    CompensatedSum sum;
    for (std::size_t c = 0; c < fe_grid.size(); ++c) {
        fe_grid.configuration(c, fe);
        for (std::size_t i = 0; i < fe_joints.size(); ++i) q[fe_joints[i]] = fe[i];
        sum.add(positional_jacobian(chain, q).col(distal).norm());
    }
    return fe_grid.size() == 0 ? 0.0 : sum.value() / static_cast<double>(fe_grid.size());
}

}  // namespace handopt
