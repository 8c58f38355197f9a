#include "handopt/joint_grid.hpp"

#include <cmath>
#include <sstream>

namespace handopt {

JointGrid::JointGrid(std::vector<std::vector<double>> samples_deg, std::vector<double> steps_deg)
    : samples_deg_(std::move(samples_deg)), steps_deg_(std::move(steps_deg)) {
    if (steps_deg_.empty()) steps_deg_.assign(samples_deg_.size(), 0.0);
    if (steps_deg_.size() != samples_deg_.size()) throw ContractError("grid step count differs from joint count");
    count_ = samples_deg_.empty() ? 0 : 1;
    samples_rad_.reserve(samples_deg_.size());
    for (const auto& s : samples_deg_) {
        if (s.empty()) throw ContractError("grid joint has no samples");
        count_ *= s.size();
        std::vector<double> rad;
        rad.reserve(s.size());
        for (double d : s) rad.push_back(deg_to_rad(d));
        samples_rad_.push_back(std::move(rad));
    }
}

void JointGrid::configuration(std::size_t index, std::span<double> out) const {
    if (static_cast<int>(out.size()) != dof()) throw ContractError("configuration buffer has wrong size");
    if (index >= count_) throw ContractError("configuration index out of bounds");
    for (int j = dof() - 1; j >= 0; --j) {
        const auto n = samples_rad_[j].size();
        out[j] = samples_rad_[j][index % n];
        index /= n;
    }
}

void JointGrid::check_within(const std::vector<JointRange>& ranges) const {
    if (static_cast<int>(ranges.size()) != dof()) throw ContractError("grid dimension differs from chain joints");
    for (int j = 0; j < dof(); ++j) {
        for (double d : samples_deg_[j]) {
            if (d < ranges[j].min_deg - 1e-9 || d > ranges[j].max_deg + 1e-9) {
                std::ostringstream os;
                os << "grid sample " << d << " deg outside range of joint " << j;
                throw RangeError(os.str(), j);
            }
        }
    }
}

JointGrid build_joint_grid(const std::vector<JointRange>& ranges, double step_deg) {
    if (!(step_deg > 0.0) || !std::isfinite(step_deg)) throw ParameterError("joint grid step must be positive");
    std::vector<std::vector<double>> samples;
    samples.reserve(ranges.size());
    for (const auto& r : ranges) {
        // Tolerance so that integer multiples of the step keep the endpoint.
        const auto n = static_cast<std::size_t>(std::floor((r.max_deg - r.min_deg) / step_deg + 1e-9)) + 1;
        std::vector<double> s;
        s.reserve(n);
        for (std::size_t k = 0; k < n; ++k) s.push_back(r.min_deg + static_cast<double>(k) * step_deg);
        samples.push_back(std::move(s));
    }
    return JointGrid(std::move(samples), std::vector<double>(ranges.size(), step_deg));
}

JointGrid build_flexion_grid(const SerialChain& chain, double step_deg) {
    std::vector<JointRange> fe;
    for (int j = 0; j < chain.dof(); ++j) {
        if (chain.flexion()[j]) fe.push_back(chain.ranges()[j]);
    }
    return build_joint_grid(fe, step_deg);
}

}  // namespace handopt
