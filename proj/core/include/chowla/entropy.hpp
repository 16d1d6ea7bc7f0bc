#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "chowla/graphmodel.hpp"
#include "chowla/logmeasure.hpp"
#include "chowla/multfunc.hpp"

namespace chowla {

// A finite distribution over opaque byte-string symbols. Masses are strictly
// positive and sum to 1 up to 1e-12. The map is ordered, so iteration (and
// therefore every entropy sum) has one fixed order.
struct WeightedDist {
    std::map<std::string, double> mass;

    // Throws invalid_argument on empty input, nonpositive masses, or a total
    // off 1 by more than 1e-12.
    static WeightedDist checked(std::map<std::string, double> mass);
};

// An exact joint distribution over symbol pairs with cached marginals.
struct JointDist {
    std::map<std::pair<std::string, std::string>, double> mass;
    WeightedDist x_marginal;
    WeightedDist y_marginal;

    static JointDist checked(std::map<std::pair<std::string, std::string>, double> mass);
};

// Shannon entropy in nats.
double entropy(const WeightedDist& d);
double joint_entropy(const JointDist& j);

// H(X|Y) from the definition: sum over y of P(y) H(X | Y = y). The chain
// rule H(X,Y) = H(X|Y) + H(Y) is a theorem about this implementation, not an
// identity it uses — tests exploit that.
double conditional_entropy(const JointDist& j);

// I(X;Y) = H(X) + H(Y) - H(X,Y).
double mutual_information(const JointDist& j);

// D(p || q); requires support(p) within support(q).
double kl_divergence(const WeightedDist& p, const WeightedDist& q);

// The pattern/residue pair under the logarithmic measure: the X symbol packs
// the lattice-rounded values g_{i,eps^2}(a n + j) for i = 1,2 and j = 1..H;
// the Y symbol packs the residues (n mod p) over the prime window. Requires
// H a multiple of a and H <= 64 (joint alphabet control).
JointDist xh_yh_joint(const MultSpec& g1, const MultSpec& g2, double eps,
                      const CorrelationParams& params, std::uint64_t H, const LogWindow& w,
                      int threads = 1);

// The Y marginal alone, feasible for far larger H than the full joint as
// long as the residue-tuple alphabet (product of the window's primes) stays
// below ~2^20 states.
WeightedDist yh_marginal(const PrimeWindow& pw, const LogWindow& w, int threads = 1);

// The scale ladder H_1 = a H_minus, H_{j+1} = H_j * max(2, floor(C0 ln H_j
// lnlnln H_j)), truncated at cap and at J levels. The clamp at 2 keeps the
// recurrence total for small H, where the unclamped multiplier floors to 0.
struct DecrementSchedule {
    std::uint64_t H_minus = 0;
    double C0 = 1.0;
    int J = 1;
    std::uint64_t a = 1;
    std::vector<std::uint64_t> levels;
};

DecrementSchedule decrement_schedule(std::uint64_t H_minus, double C0, int J, std::uint64_t a,
                                     std::uint64_t cap);

struct MiScanRow {
    std::uint64_t H = 0;
    bool ok = false;         // joint built successfully
    std::string error;       // failure reason when !ok
    double I = 0.0;          // mutual information, nats
    double HX = 0.0;
    double HY = 0.0;
    double threshold = 0.0;  // H / (ln H lnlnln H), or the alternative
    bool meets_threshold = false;
};

struct MiScanResult {
    std::vector<MiScanRow> rows;
    // Index into rows of the first level with I <= threshold, or -1.
    int first_passing = -1;
};

// Walks the schedule, building the joint at every level and comparing I
// against the decrement target. Per-level failures are recorded, not thrown.
// With alt_threshold, the target is eps^10 H / ln H instead.
MiScanResult scan_for_low_mi(const DecrementSchedule& sched, const MultSpec& g1,
                             const MultSpec& g2, double eps, const CorrelationParams& params,
                             const LogWindow& w, int threads = 1, bool alt_threshold = false);

}  // namespace chowla
