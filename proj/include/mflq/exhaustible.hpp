#pragma once

#include <vector>

#include "mflq/model.hpp"
#include "mflq/riccati.hpp"
#include "mflq/simulate.hpp"

namespace mflq {

/// Scalar exhaustible-production scenario: reserves deplete at the production
/// rate, prices follow a linear demand schedule v = gamma + delta kbar - k,
/// and profits are discounted at rate mu. With the competition parameter
/// epsilon, gamma = 1/(1+epsilon) and delta = epsilon/(1+epsilon).
struct ExhaustibleParams {
    double mu = 0.0;       // discount rate
    double nu = 0.0;       // idiosyncratic volatility
    double nu0 = 0.0;      // common volatility
    double gamma = 1.0;    // demand intercept, in (0, 1]
    double delta = 0.0;    // market-price weight, in [0, 1)
    double epsilon = 0.0;  // competition parameter when constructed from it
    bool from_epsilon = true;
    double t0 = 0.0;
    double T = 1.0;
    double mean_reserve = 1.0;  // E[x] > 0

    static ExhaustibleParams with_epsilon(double mu, double nu, double nu0, double epsilon,
                                          double t0, double T, double mean_reserve);
    static ExhaustibleParams with_gamma_delta(double mu, double nu, double nu0, double gamma,
                                              double delta, double t0, double T,
                                              double mean_reserve);

    double alpha() const { return gamma / (2.0 * (1.0 - delta)); }
    double beta() const { return delta / (2.0 * (1.0 - delta)); }
    double lambda() const { return mu - (nu * nu + nu0 * nu0); }
    double kappa() const {
        const double a = (1.0 + beta()) * (nu0 * nu0 - mu) * (nu0 * nu0 - mu) + 4.0 * nu * nu;
        return 1.0 + 0.25 * a * T;
    }

    void validate() const;
};

/// The scalar coefficient data of the scenario: B = -1, C = nu, F = nu0,
/// discounted R, Rbar = beta R, r = -alpha R, terminal weight e^{-mu (T-t0)};
/// everything else zero. Passes both the coercivity assumptions and the
/// game-reducibility test.
CoefficientSet to_coefficients(const ExhaustibleParams& p, int n_steps);

/// Closed form of the first Riccati component,
///   p(s) = lambda e^{-mu (s-t0)} / ((lambda+1) e^{lambda (T-s)} - 1)
/// for lambda away from zero and e^{-mu (s-t0)} / (1 + T - s) at lambda = 0
/// (branch switch at |lambda| <= 1e-10).
double closed_form_p(const ExhaustibleParams& p, double s);

/// Closed form of the second component, available only for nu = 0:
///   pi(s) = (1+beta) lambda e^{-mu (s-t0)} / (((1+beta) lambda + 1) e^{lambda (T-s)} - 1),
/// with the lambda = 0 branch (1+beta) e^{-mu (s-t0)} / (1 + beta + T - s).
/// Throws UnsupportedError when nu != 0.
double closed_form_pi(const ExhaustibleParams& p, double s);

/// Market prices per node, reconstructed from the mean production rate via
/// kbar = 2 alpha - (1 + 2 beta) vbar, with the offset-free analytic display
/// emitted alongside for comparison.
struct PriceCurve {
    std::vector<double> s;
    std::vector<std::vector<double>> price_paths;  // [path][node]
    std::vector<double> expected_price;            // across common paths
    std::vector<double> expected_price_se;
    std::vector<double> chi;             // simulated E[X(s)]
    std::vector<double> chi_se;
    std::vector<double> analytic_price;  // display built on the offset-free mean dynamics
};

PriceCurve market_price_curve(const ExhaustibleParams& p, const EnsembleBatch& batch);

/// Horizon bound under which expected reserves stay positive:
///   T - t0 < (1+beta)/kappa ln(1 + kappa E[x]/alpha),
/// plus the mean-reserve curve from the offset-free ODE
///   chi' = -(1/(1+beta)) e^{mu (s-t0)} pi(s) chi - alpha/(1+beta), chi(t0)=E[x],
/// the corrected curve including the backward-offset feedback, and the
/// positivity of pi on the grid.
struct ReserveReport {
    double kappa = 0.0;
    double bound = 0.0;
    bool horizon_ok = false;
    bool pi_positive = false;
    bool chi_nonnegative = false;  // offset-free curve
    std::vector<double> s;
    std::vector<double> chi;            // offset-free mean ODE
    std::vector<double> chi_corrected;  // with the backward-offset term
    std::vector<double> pi;
};

ReserveReport reserve_positivity_check(const ExhaustibleParams& p, int n_steps);

}  // namespace mflq
