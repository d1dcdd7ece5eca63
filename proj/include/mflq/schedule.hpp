#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "mflq/grid.hpp"

namespace mflq {

/// Time-dependent coefficient matrix. Three rules cover every model here:
/// a constant matrix, an exponentially discounted matrix e^{-rate (s - t0)} M,
/// and a table of per-node matrices joined by linear interpolation.
class CoefficientSchedule {
public:
    enum class Rule { Constant, ExpDiscount, Tabulated };

    CoefficientSchedule() = default;

    static CoefficientSchedule constant(Eigen::MatrixXd value);
    static CoefficientSchedule exp_discount(Eigen::MatrixXd value, double rate);
    static CoefficientSchedule tabulated(std::vector<Eigen::MatrixXd> values);

    static CoefficientSchedule zero(Eigen::Index rows, Eigen::Index cols) {
        return constant(Eigen::MatrixXd::Zero(rows, cols));
    }

    Rule rule() const { return rule_; }
    Eigen::Index rows() const { return rows_; }
    Eigen::Index cols() const { return cols_; }
    double rate() const { return rate_; }
    const std::vector<Eigen::MatrixXd>& table() const { return values_; }

    /// Value at an arbitrary time; throws RangeError outside [t0, T].
    Eigen::MatrixXd at(double s, const TimeGrid& grid) const;

    /// Value at a grid node, exact for tabulated rules.
    Eigen::MatrixXd at_node(int k, const TimeGrid& grid) const;

    /// Tabulated rules must carry exactly n_nodes entries.
    void check_grid(const TimeGrid& grid, const std::string& name) const;

    /// Max absolute entry over all grid nodes.
    double max_abs_on(const TimeGrid& grid) const;

    /// Max absolute entrywise difference from another schedule over grid nodes.
    double max_diff_on(const CoefficientSchedule& other, const TimeGrid& grid) const;

    bool is_zero_on(const TimeGrid& grid, double tol) const { return max_abs_on(grid) <= tol; }

private:
    Rule rule_ = Rule::Constant;
    Eigen::Index rows_ = 0, cols_ = 0;
    double rate_ = 0.0;
    std::vector<Eigen::MatrixXd> values_;  // one entry unless tabulated
};

}  // namespace mflq
