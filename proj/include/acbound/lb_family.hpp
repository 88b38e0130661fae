#ifndef ACBOUND_LB_FAMILY_HPP
#define ACBOUND_LB_FAMILY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "acbound/core.hpp"

namespace acbound {

// Smooth plateau bump on [0,1]^d: psi(u) = c2 * prod_j tau(u_j) with
// tau = 0 on [0,1/8] u [7/8,1], tau = 1 on [1/4,3/4], and a smooth
// exponential ramp in between. Infinitely differentiable, equal to c2 exactly
// on the plateau cube and strictly below c2 elsewhere on the support.
struct BumpProfile {
    double c2 = 0.25;

    // Smooth step s: [0,1] -> [0,1] with all derivatives vanishing at 0 and 1.
    static double ramp(double v);
    // Per-axis factor tau(v), v in [0,1].
    static double axis(double v);
    // psi(u); throws if u leaves [0,1]^d.
    double operator()(Coords u) const;
};

struct VgOptions {
    enum class Mode { exhaustive, randomized };
    Mode mode = Mode::exhaustive;
    long budget = 200000;          // candidate draws in randomized mode
    std::uint64_t seed = 0x5eedULL; // randomized mode stream
};

// Greedy Varshamov-Gilbert code: binary vectors (as +-1 entries) with pairwise
// Hamming distance >= min_hamming. Exhaustive mode scans all 2^b vectors in
// ascending integer order (bit j is coordinate j) and keeps greedily, yielding
// a maximal code; its size meets the Gilbert-Varshamov volume bound, hence
// >= 2^{b/8} when min_hamming = ceil(b/8). Randomized mode samples candidates
// and reports whatever size the budget achieves.
std::vector<std::vector<std::int8_t>> vg_greedy(int b, int min_hamming, const VgOptions& opts = {});

struct FamilyParams {
    int d = 1;
    int q = 16;
    double delta = 0.2;
    double alpha = 1.0;
    double C = 0.5;
    double c2 = 0.25;
    std::string code_mode = "exhaustive"; // or "randomized"
    int min_hamming = -1;                 // default ceil(b/8)
    long code_budget = 200000;
    std::uint64_t code_seed = 0x5eedULL;
};

// The finite family {P_sigma} of Section 5.2: q^d grid cells, sign codes from
// the VG construction, regression functions eta_sigma = (1 + phi_sigma)/2 with
// plateau amplitude a = c2 * delta^{1/(1+alpha)}, and the marginal mu* that is
// uniform on the plateau subcubes (mass w = C * delta^{alpha/(1+alpha)} / b
// each) and on the null set A0 (mass 1 - bw).
class LowerBoundFamily {
public:
    struct PairStats {
        int hamming = 0;
        double l2_eta_sq = 0.0; // ||eta_i - eta_j||^2_{L2(mu*)}
        double l1_bayes = 0.0;  // ||f*_i - f*_j||_{L1(mu*)}
        double chi2 = 0.0;      // chi^2(P_i, P_j)
        double kl = 0.0;        // K(P_i, P_j)
    };

    // Parameters and derived constants.
    int d = 1;
    int q = 1;
    long b = 1;
    double delta = 0.0;
    double alpha = 1.0;
    double C = 1.0;
    double c2 = 0.25;
    double a = 0.0;           // c2 * delta^{1/(1+alpha)}
    double w = 0.0;           // C * delta^{alpha/(1+alpha)} / b
    double bw = 0.0;          // total plateau mass
    double cell_excess = 0.0; // a*w, the excess contributed by one flipped cell
    double null_volume = 0.0; // Lebesgue volume of A0 = 1 - (3/4)^d
    double lambda0 = 0.0;     // 16^{-(1+alpha)/alpha} * C * c2
    BumpProfile bump;
    std::vector<std::vector<std::int8_t>> codes;
    std::string id;
    std::vector<std::string> warnings;

    CellGrid grid() const { return CellGrid{d, q}; }
    long num_codes() const { return static_cast<long>(codes.size()); }
    int hamming(int i, int j) const;

    // Smooth pointwise evaluation (1 + sigma_k * delta^{1/(1+alpha)} * psi(qx - k))/2;
    // equals 1/2 on A0. Used for dense verification and Hoelder checks.
    double eta_sigma(int code, Coords x) const;
    // mu*-essential cellwise representation (1/2 off the plateau subcubes).
    RegressionFn eta(int code) const;
    PredictionRule bayes(int code) const;
    // Full descriptor of P_sigma with closed-form hooks attached.
    Distribution distribution(int code) const;

    // X from mu* (plateau cell + uniform, or rejection-sampled A0), then
    // Y ~ Bernoulli(eta_sigma(X)). Deterministic given the seed.
    Dataset sample_dataset(int code, long n, std::uint64_t seed) const;

    double exact_bayes_risk() const; // 1/2 - C*c2*delta/2
    // a*w * #{cells where the rule differs from the Bayes labels}; requires a
    // cellwise rule on this family's grid (throws "use quadrature" otherwise).
    double exact_excess_cellwise(int code, const PredictionRule& rule) const;
    // Same integral for a rule that is piecewise constant on an even grid
    // (d = 1 only): exact interval-overlap arithmetic.
    double exact_excess_grid_rule(int code, const PredictionRule::Grid& rule) const;

    PairStats pairwise_stats(int i, int j) const;

private:
    friend LowerBoundFamily assemble_family(const FamilyParams&, std::vector<std::vector<std::int8_t>>);
    std::vector<std::uint64_t> packed_; // codes packed LSB-first, words_per_code_ each
    int words_per_code_ = 1;
};

LowerBoundFamily build_family(const FamilyParams& params);

// Assembles a family from parameters plus an externally supplied code set
// (deserialization); derived constants are always recomputed.
LowerBoundFamily assemble_family(const FamilyParams& params, std::vector<std::vector<std::int8_t>> codes);

struct CheckEntry {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = true;
};

struct FamilyReport {
    std::vector<CheckEntry> checks;
    std::vector<std::string> warnings;
    bool verdict = true;
};

struct HolderSpec {
    double beta = 1.0;
    double L = 1.0;
};

// Checks eta range, code separation, the (3.2)/(3.3)-style pairwise bounds,
// the margin condition with constant C(2/c2)^alpha against the target, and
// (optionally, beta <= 1) a numeric Hoelder seminorm on a dense grid. Failures
// are listed in the report, never thrown.
FamilyReport verify_family(const LowerBoundFamily& family, const MarginSpec& target,
                           const std::optional<HolderSpec>& holder = std::nullopt);

// q = ceil(c5 * delta^{-1/((1+alpha)*beta)}) from the Hoelder-class lower bound.
int holder_q(double delta, double alpha, double beta, double c5);

} // namespace acbound

#endif
