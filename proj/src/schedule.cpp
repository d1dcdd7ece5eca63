#include "mflq/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "mflq/errors.hpp"

namespace mflq {

CoefficientSchedule CoefficientSchedule::constant(Eigen::MatrixXd value) {
    CoefficientSchedule s;
    s.rule_ = Rule::Constant;
    s.rows_ = value.rows();
    s.cols_ = value.cols();
    s.values_.push_back(std::move(value));
    return s;
}

CoefficientSchedule CoefficientSchedule::exp_discount(Eigen::MatrixXd value, double rate) {
    if (rate < 0.0) throw StructuralError("CoefficientSchedule: discount rate must be >= 0");
    CoefficientSchedule s;
    s.rule_ = Rule::ExpDiscount;
    s.rows_ = value.rows();
    s.cols_ = value.cols();
    s.rate_ = rate;
    s.values_.push_back(std::move(value));
    return s;
}

CoefficientSchedule CoefficientSchedule::tabulated(std::vector<Eigen::MatrixXd> values) {
    if (values.empty()) throw StructuralError("CoefficientSchedule: empty table");
    CoefficientSchedule s;
    s.rule_ = Rule::Tabulated;
    s.rows_ = values.front().rows();
    s.cols_ = values.front().cols();
    for (const auto& v : values)
        if (v.rows() != s.rows_ || v.cols() != s.cols_)
            throw StructuralError("CoefficientSchedule: inconsistent table shapes");
    s.values_ = std::move(values);
    return s;
}

void CoefficientSchedule::check_grid(const TimeGrid& grid, const std::string& name) const {
    if (rule_ == Rule::Tabulated &&
        static_cast<int>(values_.size()) != grid.n_nodes())
        throw StructuralError("CoefficientSchedule " + name + ": table needs " +
                              std::to_string(grid.n_nodes()) + " entries, has " +
                              std::to_string(values_.size()));
}

Eigen::MatrixXd CoefficientSchedule::at(double s, const TimeGrid& grid) const {
    if (!grid.contains(s))
        throw RangeError("CoefficientSchedule: time " + std::to_string(s) + " outside [t0, T]");
    switch (rule_) {
        case Rule::Constant:
            return values_.front();
        case Rule::ExpDiscount:
            return std::exp(-rate_ * (s - grid.t0)) * values_.front();
        case Rule::Tabulated: {
            const double u = (s - grid.t0) / grid.dt();
            int k = static_cast<int>(std::floor(u));
            k = std::clamp(k, 0, grid.n_steps - 1);
            const double w = std::clamp(u - k, 0.0, 1.0);
            if (w == 0.0) return values_[k];
            return (1.0 - w) * values_[k] + w * values_[k + 1];
        }
    }
    throw StructuralError("CoefficientSchedule: corrupt rule");
}

Eigen::MatrixXd CoefficientSchedule::at_node(int k, const TimeGrid& grid) const {
    if (k < 0 || k > grid.n_steps) throw RangeError("CoefficientSchedule: node out of range");
    switch (rule_) {
        case Rule::Constant:
            return values_.front();
        case Rule::ExpDiscount:
            return std::exp(-rate_ * (grid.node(k) - grid.t0)) * values_.front();
        case Rule::Tabulated:
            return values_[static_cast<std::size_t>(k)];
    }
    throw StructuralError("CoefficientSchedule: corrupt rule");
}

double CoefficientSchedule::max_abs_on(const TimeGrid& grid) const {
    double m = 0.0;
    for (int k = 0; k <= grid.n_steps; ++k)
        m = std::max(m, at_node(k, grid).cwiseAbs().maxCoeff());
    return m;
}

double CoefficientSchedule::max_diff_on(const CoefficientSchedule& other, const TimeGrid& grid) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw StructuralError("CoefficientSchedule: shape mismatch in comparison");
    double m = 0.0;
    for (int k = 0; k <= grid.n_steps; ++k)
        m = std::max(m, (at_node(k, grid) - other.at_node(k, grid)).cwiseAbs().maxCoeff());
    return m;
}

}  // namespace mflq
