#include "mflq/exhaustible.hpp"

#include <cmath>

#include "mflq/errors.hpp"

namespace mflq {

namespace {
constexpr double kLambdaSwitch = 1e-10;
}

ExhaustibleParams ExhaustibleParams::with_epsilon(double mu, double nu, double nu0, double epsilon,
                                                  double t0, double T, double mean_reserve) {
    ExhaustibleParams p;
    p.mu = mu;
    p.nu = nu;
    p.nu0 = nu0;
    p.epsilon = epsilon;
    p.gamma = 1.0 / (1.0 + epsilon);
    p.delta = epsilon / (1.0 + epsilon);
    p.from_epsilon = true;
    p.t0 = t0;
    p.T = T;
    p.mean_reserve = mean_reserve;
    p.validate();
    return p;
}

ExhaustibleParams ExhaustibleParams::with_gamma_delta(double mu, double nu, double nu0,
                                                      double gamma, double delta, double t0,
                                                      double T, double mean_reserve) {
    ExhaustibleParams p;
    p.mu = mu;
    p.nu = nu;
    p.nu0 = nu0;
    p.gamma = gamma;
    p.delta = delta;
    p.epsilon = delta < 1.0 ? delta / (1.0 - delta) : 0.0;
    p.from_epsilon = false;
    p.t0 = t0;
    p.T = T;
    p.mean_reserve = mean_reserve;
    p.validate();
    return p;
}

void ExhaustibleParams::validate() const {
    if (!(mu >= 0.0)) throw StructuralError("ExhaustibleParams: mu must be >= 0");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw StructuralError("ExhaustibleParams: gamma in (0, 1]");
    if (!(delta >= 0.0 && delta < 1.0)) throw StructuralError("ExhaustibleParams: delta in [0, 1)");
    if (from_epsilon && !(epsilon >= 0.0))
        throw StructuralError("ExhaustibleParams: epsilon must be >= 0");
    if (!(T > t0)) throw StructuralError("ExhaustibleParams: T must exceed t0");
    if (!(mean_reserve > 0.0)) throw StructuralError("ExhaustibleParams: E[x] must be positive");
}

CoefficientSet to_coefficients(const ExhaustibleParams& p, int n_steps) {
    p.validate();
    CoefficientSet cs = CoefficientSet::zeros(1, 1, TimeGrid(p.t0, p.T, n_steps));
    auto one = [](double v) { return (Eigen::MatrixXd(1, 1) << v).finished(); };
    cs.B = CoefficientSchedule::constant(one(-1.0));
    cs.C = CoefficientSchedule::constant(one(p.nu));
    cs.F = CoefficientSchedule::constant(one(p.nu0));
    cs.R = CoefficientSchedule::exp_discount(one(1.0), p.mu);
    cs.Rbar = CoefficientSchedule::exp_discount(one(p.beta()), p.mu);
    cs.r = CoefficientSchedule::exp_discount(one(-p.alpha()), p.mu);
    cs.H = one(std::exp(-p.mu * (p.T - p.t0)));
    return cs;
}

double closed_form_p(const ExhaustibleParams& p, double s) {
    if (s < p.t0 || s > p.T) throw RangeError("closed_form_p: s outside [t0, T]");
    const double lam = p.lambda();
    const double disc = std::exp(-p.mu * (s - p.t0));
    if (std::abs(lam) <= kLambdaSwitch) return disc / (1.0 + p.T - s);
    return lam * disc / ((lam + 1.0) * std::exp(lam * (p.T - s)) - 1.0);
}

double closed_form_pi(const ExhaustibleParams& p, double s) {
    if (p.nu != 0.0)
        throw UnsupportedError("closed_form_pi: no closed form unless nu = 0");
    if (s < p.t0 || s > p.T) throw RangeError("closed_form_pi: s outside [t0, T]");
    const double lam = p.lambda();
    const double b = 1.0 + p.beta();
    const double disc = std::exp(-p.mu * (s - p.t0));
    if (std::abs(lam) <= kLambdaSwitch) return b * disc / (b + p.T - s);
    return b * lam * disc / ((b * lam + 1.0) * std::exp(lam * (p.T - s)) - 1.0);
}

PriceCurve market_price_curve(const ExhaustibleParams& p, const EnsembleBatch& batch) {
    if (batch.d != 1 || batch.m != 1)
        throw StructuralError("market_price_curve: scenario is scalar");
    const int n = batch.grid.n_steps;
    const double a = p.alpha(), bcoef = p.beta();

    PriceCurve pc;
    pc.s.resize(n + 1);
    pc.expected_price.assign(n + 1, 0.0);
    pc.expected_price_se.assign(n + 1, 0.0);
    pc.chi.assign(n + 1, 0.0);
    pc.chi_se.assign(n + 1, 0.0);
    pc.price_paths.assign(batch.K, std::vector<double>(n + 1, 0.0));

    for (int j = 0; j <= n; ++j) pc.s[j] = batch.grid.node(j);

    for (int j = 0; j <= n; ++j) {
        double price_sum = 0.0, price_sq = 0.0;
        double chi_sum = 0.0, chi_sq = 0.0;
        for (int k = 0; k < batch.K; ++k) {
            const double vbar = batch.mean_control(k, j)[0];
            const double kbar = 2.0 * a - (1.0 + 2.0 * bcoef) * vbar;
            pc.price_paths[k][j] = kbar;
            price_sum += kbar;
            price_sq += kbar * kbar;
            double xmean = 0.0;
            for (int i = 0; i < batch.M; ++i) xmean += batch.state(k, i, j)[0];
            xmean /= batch.M;
            chi_sum += xmean;
            chi_sq += xmean * xmean;
        }
        const double K = batch.K;
        pc.expected_price[j] = price_sum / K;
        pc.chi[j] = chi_sum / K;
        if (batch.K > 1) {
            pc.expected_price_se[j] = std::sqrt(
                std::max(0.0, (price_sq - price_sum * price_sum / K) / (K - 1.0)) / K);
            pc.chi_se[j] =
                std::sqrt(std::max(0.0, (chi_sq - chi_sum * chi_sum / K) / (K - 1.0)) / K);
        }
    }

    // Offset-free analytic display: the mean-reserve ODE without the offset
    // feedback term drives pi(s) chi(s) + int pi, which maps to a price via
    // the same demand relation. Emitted for side-by-side comparison; it does
    // not enter the simulated estimates above.
    const RiccatiSolution rsol = solve_riccati(to_coefficients(p, n));
    const ReserveReport rr = reserve_positivity_check(p, n);
    pc.analytic_price.assign(n + 1, 0.0);
    const double b1 = 1.0 + bcoef;
    double integral = 0.0;
    double prev = rsol.Pi[0](0, 0);
    for (int j = 0; j <= n; ++j) {
        const double pi_j = rsol.Pi[j](0, 0);
        if (j > 0) {
            integral += 0.5 * batch.grid.dt() * (prev + pi_j);
            prev = pi_j;
        }
        const double emu = std::exp(p.mu * (pc.s[j] - p.t0));
        pc.analytic_price[j] =
            a / b1 - emu * ((1.0 + 2.0 * bcoef) / b1 * pi_j * rr.chi[j] +
                            a * (1.0 + 2.0 * bcoef) / (b1 * b1) * integral);
    }
    return pc;
}

ReserveReport reserve_positivity_check(const ExhaustibleParams& p, int n_steps) {
    p.validate();
    const double a = p.alpha(), bcoef = p.beta();
    const double b1 = 1.0 + bcoef;

    ReserveReport rep;
    rep.kappa = p.kappa();
    rep.bound = b1 / rep.kappa * std::log(1.0 + rep.kappa / a * p.mean_reserve);
    rep.horizon_ok = (p.T - p.t0) < rep.bound;

    const CoefficientSet cs = to_coefficients(p, n_steps);
    const RiccatiSolution rs = solve_riccati(cs);
    const TimeGrid& g = cs.grid;
    const double dt = g.dt();

    rep.s.resize(n_steps + 1);
    rep.pi.resize(n_steps + 1);
    for (int j = 0; j <= n_steps; ++j) {
        rep.s[j] = g.node(j);
        rep.pi[j] = rs.Pi[j](0, 0);
    }
    rep.pi_positive = true;
    for (double v : rep.pi)
        if (!(v > 0.0)) rep.pi_positive = false;

    // chi' = -(1/(1+beta)) e^{mu (s-t0)} pi chi - alpha/(1+beta); the corrected
    // variant adds the backward-offset feedback -(1/(1+beta)) e^{mu (s-t0)} phi.
    auto pi_at = [&](double s) { return rs.Pi_at(s)(0, 0); };
    auto phi_at = [&](double s) { return rs.phi_at(s)(0); };
    auto rhs_plain = [&](double s, double chi) {
        return -std::exp(p.mu * (s - p.t0)) * pi_at(s) * chi / b1 - a / b1;
    };
    auto rhs_corr = [&](double s, double chi) {
        return rhs_plain(s, chi) - std::exp(p.mu * (s - p.t0)) * phi_at(s) / b1;
    };

    rep.chi.assign(n_steps + 1, 0.0);
    rep.chi_corrected.assign(n_steps + 1, 0.0);
    rep.chi[0] = rep.chi_corrected[0] = p.mean_reserve;
    for (int j = 0; j < n_steps; ++j) {
        const double s = g.node(j), sm = s + 0.5 * dt, s1 = g.node(j + 1);
        {
            const double y = rep.chi[j];
            const double k1 = rhs_plain(s, y);
            const double k2 = rhs_plain(sm, y + 0.5 * dt * k1);
            const double k3 = rhs_plain(sm, y + 0.5 * dt * k2);
            const double k4 = rhs_plain(s1, y + dt * k3);
            rep.chi[j + 1] = y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        {
            const double y = rep.chi_corrected[j];
            const double k1 = rhs_corr(s, y);
            const double k2 = rhs_corr(sm, y + 0.5 * dt * k1);
            const double k3 = rhs_corr(sm, y + 0.5 * dt * k2);
            const double k4 = rhs_corr(s1, y + dt * k3);
            rep.chi_corrected[j + 1] = y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
    }
    rep.chi_nonnegative = true;
    for (double v : rep.chi)
        if (v < 0.0) rep.chi_nonnegative = false;
    return rep;
}

}  // namespace mflq
