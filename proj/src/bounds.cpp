#include "acbound/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace acbound {

FiniteMeasure FiniteMeasure::make(std::vector<double> weights) {
    if (weights.empty()) throw std::invalid_argument("FiniteMeasure: empty support");
    double sum = 0.0;
    for (double wi : weights) {
        if (wi < 0.0) throw std::invalid_argument("FiniteMeasure: negative weight");
        sum += wi;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("FiniteMeasure: weights must sum to 1");
    return FiniteMeasure{std::move(weights)};
}

double kl_divergence(const FiniteMeasure& mu, const FiniteMeasure& nu) {
    if (mu.support() != nu.support()) throw std::invalid_argument("kl_divergence: mismatched supports");
    double kl = 0.0;
    for (std::size_t i = 0; i < mu.w.size(); ++i) {
        if (mu.w[i] == 0.0) continue;
        if (nu.w[i] == 0.0) return std::numeric_limits<double>::infinity();
        kl += mu.w[i] * std::log(mu.w[i] / nu.w[i]);
    }
    return std::max(kl, 0.0);
}

double chi2_divergence(const FiniteMeasure& mu, const FiniteMeasure& nu) {
    if (mu.support() != nu.support()) throw std::invalid_argument("chi2_divergence: mismatched supports");
    double chi2 = 0.0;
    for (std::size_t i = 0; i < mu.w.size(); ++i) {
        if (nu.w[i] == 0.0) {
            if (mu.w[i] > 0.0) return std::numeric_limits<double>::infinity();
            continue;
        }
        const double diff = mu.w[i] - nu.w[i];
        chi2 += diff * diff / nu.w[i];
    }
    return chi2;
}

double fano_bound(int M, double chi) {
    if (M < 2) throw std::invalid_argument("fano_bound: M must be >= 2");
    if (chi < 0.0) throw std::invalid_argument("fano_bound: chi must be nonnegative");
    return std::min(1.0, static_cast<double>(M) * std::exp(-3.0 * chi)) / 12.0;
}

FanoOracleResult fano_oracle_verify(std::span<const FiniteMeasure> Q, double chi_cap) {
    if (Q.size() < 3) throw std::invalid_argument("fano_oracle_verify: need M >= 2 (at least 3 measures)");
    const int M = static_cast<int>(Q.size()) - 1;
    if (M > 3) throw std::invalid_argument("fano_oracle_verify: enumeration too large (M > 3)");
    const std::size_t s = Q[0].support();
    for (const auto& q : Q)
        if (q.support() != s) throw std::invalid_argument("fano_oracle_verify: mismatched supports");
    if (s > 10) throw std::invalid_argument("fano_oracle_verify: enumeration too large (support > 10)");

    FanoOracleResult result;
    double chi = 0.0;
    for (int j = 1; j <= M; ++j) chi += kl_divergence(Q[j], Q[0]);
    chi /= static_cast<double>(M);
    result.chi = chi;
    if (!std::isfinite(chi) || chi > chi_cap) {
        result.vacuous = true; // hypothesis of the lemma is void
        result.pass = true;
        return result;
    }
    result.bound = fano_bound(M, chi);

    // Assignments: each support point goes to one of A_0..A_M or to none.
    const int choices = M + 2;
    long total = 1;
    for (std::size_t p = 0; p < s; ++p) total *= choices;
    std::vector<int> assign(s, 0);
    double best = 1.0;
    for (long a = 0; a < total; ++a) {
        long rest = a;
        for (std::size_t p = 0; p < s; ++p) {
            assign[p] = static_cast<int>(rest % choices);
            rest /= choices;
        }
        double p_star = 0.0;
        for (int i = 0; i <= M; ++i) {
            double inside = 0.0;
            for (std::size_t p = 0; p < s; ++p)
                if (assign[p] == i) inside += Q[i].w[p];
            p_star = std::max(p_star, 1.0 - inside);
            if (p_star >= best) break;
        }
        best = std::min(best, p_star);
    }
    result.p_star_min = best;
    result.pass = result.p_star_min >= result.bound - 1e-12;
    return result;
}

double bernstein_tail(double n, double v, double R, double u) {
    if (!(n > 0.0) || !(v > 0.0) || !(R > 0.0)) throw std::invalid_argument("bernstein_tail: n, v, R must be positive");
    if (u < 0.0) throw std::invalid_argument("bernstein_tail: u must be nonnegative");
    if (u == 0.0) return 1.0;
    return std::exp(-n * u * u / (2.0 * (v + R * u / 3.0)));
}

PowerForm PowerForm::make(std::vector<Term> terms) {
    for (const auto& t : terms)
        if (t.coef < 0.0) throw std::invalid_argument("PowerForm: coefficients must be nonnegative");
    return PowerForm{std::move(terms)};
}

double PowerForm::operator()(double delta) const {
    double value = 0.0;
    for (const auto& t : terms) value += t.coef * std::pow(delta, t.exponent);
    return value;
}

double flat_transform(const PowerForm& psi, double delta) {
    if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("flat_transform: delta must lie in (0,1]");
    double value = 0.0;
    for (const auto& t : psi.terms) {
        if (t.coef < 0.0) throw std::invalid_argument("flat_transform: negative coefficient");
        // sup over [delta,1] of c sigma^{p-1}
        value += t.exponent <= 1.0 ? t.coef * std::pow(delta, t.exponent - 1.0) : t.coef;
    }
    return value;
}

double v_n_t(double delta, const PowerForm& D2, const PowerForm& phi_n, double t, double n) {
    if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("v_n_t: delta must lie in (0,1]");
    if (!(t > 0.0) || !(n >= 1.0)) throw std::invalid_argument("v_n_t: t > 0 and n >= 1 required");
    const double ratio = t / (n * delta);
    return 4.0 * (flat_transform(phi_n, delta) + std::sqrt(flat_transform(D2, delta) * ratio) + ratio);
}

namespace {

void validate_forms(const PowerForm& D2, const PowerForm& phi_n) {
    for (const auto& t : D2.terms)
        if (t.coef < 0.0) throw std::invalid_argument("fixed point undefined: negative coefficient");
    for (const auto& t : phi_n.terms)
        if (t.coef < 0.0) throw std::invalid_argument("fixed point undefined: negative coefficient");
}

} // namespace

double sigma_n_t(const PowerForm& D2, const PowerForm& phi_n, double t, double n) {
    validate_forms(D2, phi_n); // nonnegative coefficients make V nonincreasing
    constexpr double kFloor = 1e-12;
    if (v_n_t(1.0, D2, phi_n, t, n) > 1.0) return 1.0;
    if (v_n_t(kFloor, D2, phi_n, t, n) <= 1.0) return kFloor;
    double lo = std::log(kFloor); // V(lo) > 1
    double hi = 0.0;              // V(hi) <= 1
    while (hi - lo > 1e-9 * std::max(1.0, std::abs(hi))) {
        const double mid = 0.5 * (lo + hi);
        if (v_n_t(std::exp(mid), D2, phi_n, t, n) <= 1.0) hi = mid;
        else lo = mid;
        if (hi - lo < 1e-15) break;
    }
    return std::exp(hi);
}

double sigma_n_t_grid(const PowerForm& D2, const PowerForm& phi_n, double t, double n, long points) {
    validate_forms(D2, phi_n);
    if (points < 2) throw std::invalid_argument("sigma_n_t_grid: need at least 2 points");
    constexpr double kFloor = 1e-12;
    if (v_n_t(1.0, D2, phi_n, t, n) > 1.0) return 1.0;
    const double log_lo = std::log(kFloor);
    // smallest grid delta with V(delta) <= 1, scanning from below
    double best = 1.0;
    for (long i = points - 1; i >= 0; --i) {
        const double delta = std::exp(log_lo * (1.0 - static_cast<double>(i) / (points - 1)));
        if (v_n_t(delta, D2, phi_n, t, n) <= 1.0) best = delta;
        else break; // V nonincreasing: smaller deltas stay above 1
    }
    return best;
}

double critical_lambda(double n, double alpha, double r_prime, double D) {
    if (!(n >= 1.0) || !(D > 0.0) || !(r_prime > 0.0)) throw std::invalid_argument("critical_lambda: positive arguments required");
    const double exponent = std::isinf(alpha) ? 1.0 : (1.0 + alpha) / (2.0 + alpha + r_prime);
    return D * std::pow(n, -exponent);
}

double lambda_floor_bayes(double n, double alpha, double rho, double c_prime) {
    if (!(n >= 1.0) || !(c_prime > 0.0) || !(rho > 0.0)) throw std::invalid_argument("lambda_floor_bayes: positive arguments required");
    const double exponent = std::isinf(alpha) ? 1.0 / (1.0 + rho) : (1.0 + alpha) / (2.0 + alpha * (1.0 + rho));
    return c_prime * std::pow(n, -exponent);
}

AcEnvelopes ac_envelopes(double n, double lambda, double alpha, double c_upper, double prefactor_upper,
                         double b, double c_lower) {
    if (lambda < 0.0 || lambda > 1.0) throw std::invalid_argument("ac_envelopes: lambda must lie in [0,1]");
    AcEnvelopes env;
    env.exponent = std::isinf(alpha) ? 1.0 : (2.0 + alpha) / (1.0 + alpha);
    const double rate = n * std::pow(lambda, env.exponent);
    env.upper = prefactor_upper * std::exp(-c_upper * rate);
    env.lower = std::min(1.0, std::exp2(b / 16.0) * std::exp(-c_lower * rate)) / 12.0;
    return env;
}

PowerForm class_erm_diameter_form(double kappa, double cD) {
    if (!(kappa >= 1.0)) throw std::invalid_argument("class_erm_diameter_form: kappa must be >= 1");
    return PowerForm::make({{cD * cD, 1.0 / kappa}});
}

PowerForm class_erm_complexity_form(double kappa, double rho, double n, double cPhi) {
    if (!(kappa >= 1.0) || !(rho > 0.0) || !(n >= 1.0))
        throw std::invalid_argument("class_erm_complexity_form: invalid parameters");
    return PowerForm::make({{cPhi / std::sqrt(n), (1.0 - rho) / (2.0 * kappa)},
                            {cPhi * std::pow(n, -1.0 / (1.0 + rho)), 0.0}});
}

double sigma_comparator(double n, double t, double kappa, double rho, double c7) {
    return c7 * (std::pow(n, -kappa / (2.0 * kappa - 1.0 + rho)) +
                 std::pow(t / n, kappa / (2.0 * kappa - 1.0)));
}

double n_rate_theory(double alpha, double r_prime) {
    if (std::isinf(alpha)) return -1.0;
    return -(1.0 + alpha) / (2.0 + alpha + r_prime);
}

} // namespace acbound
