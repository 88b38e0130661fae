#ifndef ACBOUND_BOUNDS_HPP
#define ACBOUND_BOUNDS_HPP

#include <limits>
#include <span>
#include <vector>

namespace acbound {

// Probability measure on a finite support: nonnegative weights summing to 1
// (tolerance 1e-12).
struct FiniteMeasure {
    std::vector<double> w;
    static FiniteMeasure make(std::vector<double> weights);
    std::size_t support() const { return w.size(); }
};

// K(mu, nu) = sum nu_i g_i log g_i with g = mu/nu; +infinity when mu is not
// absolutely continuous w.r.t. nu. Terms with mu_i = 0 contribute 0.
double kl_divergence(const FiniteMeasure& mu, const FiniteMeasure& nu);

// chi^2(mu, nu) = sum nu_i (g_i - 1)^2, same conventions.
double chi2_divergence(const FiniteMeasure& mu, const FiniteMeasure& nu);

// Fano-type lower bound (1/12) min(1, M e^{-3 chi}); requires M >= 2.
double fano_bound(int M, double chi);

struct FanoOracleResult {
    double chi = 0.0;        // mean KL of Q_1..Q_M against Q_0
    double p_star_min = 1.0; // brute-force minimum over disjoint-event assignments
    double bound = 0.0;      // fano_bound(M, chi)
    bool pass = true;
    bool vacuous = false;    // hypothesis void (chi infinite or above the cap)
};

// Brute-force verification of the Fano-type lemma: enumerate every assignment
// of support points to A_0,...,A_M or none (disjointness by construction),
// minimize p* = max_i Q_i(complement of A_i), and compare with the bound.
// Q holds M+1 measures; supports of size <= 10 and M <= 3 only.
FanoOracleResult fano_oracle_verify(std::span<const FiniteMeasure> Q,
                                    double chi_cap = std::numeric_limits<double>::infinity());

// exp(-n u^2 / (2 (v + R u / 3))): Bernstein tail for an average of centered
// summands with |xi| <= R and variance <= v.
double bernstein_tail(double n, double v, double R, double u);

// delta |-> sum_i c_i delta^{p_i} on (0,1], c_i >= 0.
struct PowerForm {
    struct Term {
        double coef = 0.0;
        double exponent = 0.0;
    };
    std::vector<Term> terms;

    static PowerForm make(std::vector<Term> terms);
    double operator()(double delta) const;
};

// psi_flat(delta) = sup_{sigma in [delta,1]} psi(sigma)/sigma, evaluated
// termwise: c delta^{p-1} for p <= 1, c otherwise. Exact for single-term
// forms; for sums it is the termwise-sup envelope (an upper bound).
double flat_transform(const PowerForm& psi, double delta);

// V_n^t(delta) = 4 [ phi_flat(delta) + sqrt(D2_flat(delta) t/(n delta)) + t/(n delta) ].
double v_n_t(double delta, const PowerForm& D2, const PowerForm& phi_n, double t, double n);

// sigma_n^t = inf{sigma : V_n^t(sigma) <= 1} by bisection on log delta over
// [1e-12, 1]; returns 1 when V(1) > 1. V is nonincreasing for nonnegative
// power forms (validated).
double sigma_n_t(const PowerForm& D2, const PowerForm& phi_n, double t, double n);

// Dense log-spaced grid scan for the same fixed point (independent route).
double sigma_n_t_grid(const PowerForm& D2, const PowerForm& phi_n, double t, double n, long points);

// lambda_n = D n^{-(1+alpha)/(2+alpha+r')}; the alpha = infinity limit of the
// exponent is 1.
double critical_lambda(double n, double alpha, double r_prime, double D);

// c' n^{-(1+alpha)/(2+alpha(1+rho))}, with exponent 1/(1+rho) at alpha = infinity.
double lambda_floor_bayes(double n, double alpha, double rho, double c_prime);

struct AcEnvelopes {
    double upper = 0.0;
    double lower = 0.0;
    double exponent = 0.0; // (2+alpha)/(1+alpha); 1 at alpha = infinity
};

// upper = prefactor exp(-c_upper n lambda^e); lower = (1/12) min(1, 2^{b/16} exp(-c_lower n lambda^e)).
AcEnvelopes ac_envelopes(double n, double lambda, double alpha, double c_upper, double prefactor_upper,
                         double b, double c_lower);

// Power forms of the class-ERM fixed-point analysis: D2(delta) = cD^2 delta^{1/kappa},
// phi_n(delta) = cPhi (delta^{(1-rho)/(2 kappa)} n^{-1/2} + n^{-1/(1+rho)}).
PowerForm class_erm_diameter_form(double kappa, double cD);
PowerForm class_erm_complexity_form(double kappa, double rho, double n, double cPhi);

// c7 (n^{-kappa/(2 kappa - 1 + rho)} + (t/n)^{kappa/(2 kappa - 1)}), the
// closed-form comparator for sigma_n^t.
double sigma_comparator(double n, double t, double kappa, double rho, double c7);

// Theory slope -(1+alpha)/(2+alpha+r') for excess-risk rate fits.
double n_rate_theory(double alpha, double r_prime);

} // namespace acbound

#endif
