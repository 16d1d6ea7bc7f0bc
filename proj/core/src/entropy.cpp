#include "chowla/entropy.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "chowla/errors.hpp"
#include "chowla/kahan.hpp"

namespace chowla {
namespace {

constexpr double kMassTol = 1e-12;

double plogp_sum(const std::map<std::string, double>& mass) {
    kahan_sum acc;
    for (const auto& [sym, m] : mass) acc.add(-m * std::log(m));
    return acc.value();
}

void append_u16(std::string& s, std::uint16_t v) {
    s.push_back(static_cast<char>(v & 0xff));
    s.push_back(static_cast<char>(v >> 8));
}

void append_i16(std::string& s, std::int16_t v) {
    append_u16(s, static_cast<std::uint16_t>(v));
}

}  // namespace

WeightedDist WeightedDist::checked(std::map<std::string, double> mass) {
    if (mass.empty()) throw std::invalid_argument("distribution: empty");
    kahan_sum total;
    for (const auto& [sym, m] : mass) {
        if (!(m > 0.0)) throw std::invalid_argument("distribution: masses must be positive");
        total.add(m);
    }
    if (std::abs(total.value() - 1.0) > kMassTol)
        throw std::invalid_argument("distribution: masses must sum to 1");
    return WeightedDist{std::move(mass)};
}

JointDist JointDist::checked(std::map<std::pair<std::string, std::string>, double> mass) {
    if (mass.empty()) throw std::invalid_argument("joint distribution: empty");
    kahan_sum total;
    std::map<std::string, double> mx, my;
    for (const auto& [key, m] : mass) {
        if (!(m > 0.0)) throw std::invalid_argument("joint distribution: masses must be positive");
        total.add(m);
        mx[key.first] += m;
        my[key.second] += m;
    }
    if (std::abs(total.value() - 1.0) > kMassTol)
        throw std::invalid_argument("joint distribution: masses must sum to 1");
    JointDist j;
    j.mass = std::move(mass);
    j.x_marginal.mass = std::move(mx);
    j.y_marginal.mass = std::move(my);
    return j;
}

double entropy(const WeightedDist& d) {
    if (d.mass.empty()) throw std::invalid_argument("entropy: empty distribution");
    return plogp_sum(d.mass);
}

double joint_entropy(const JointDist& j) {
    if (j.mass.empty()) throw std::invalid_argument("joint_entropy: empty distribution");
    kahan_sum acc;
    for (const auto& [key, m] : j.mass) acc.add(-m * std::log(m));
    return acc.value();
}

double conditional_entropy(const JointDist& j) {
    if (j.mass.empty()) throw std::invalid_argument("conditional_entropy: empty distribution");
    // Group the joint by the conditioning symbol and apply the definition
    // H(X|Y) = sum_y P(y) sum_x P(x|y) log 1/P(x|y) directly.
    std::map<std::string, std::vector<double>> by_y;
    for (const auto& [key, m] : j.mass) by_y[key.second].push_back(m);
    kahan_sum acc;
    for (const auto& [y, parts] : by_y) {
        double py = j.y_marginal.mass.at(y);
        kahan_sum inner;
        for (double m : parts) {
            double cond = m / py;
            inner.add(-cond * std::log(cond));
        }
        acc.add(py * inner.value());
    }
    return acc.value();
}

double mutual_information(const JointDist& j) {
    if (j.mass.empty()) throw std::invalid_argument("mutual_information: empty distribution");
    return entropy(j.x_marginal) + entropy(j.y_marginal) - joint_entropy(j);
}

double kl_divergence(const WeightedDist& p, const WeightedDist& q) {
    if (p.mass.empty() || q.mass.empty()) throw std::invalid_argument("kl_divergence: empty");
    kahan_sum acc;
    for (const auto& [sym, pm] : p.mass) {
        auto it = q.mass.find(sym);
        if (it == q.mass.end())
            throw std::invalid_argument("kl_divergence: support of p must lie inside support of q");
        acc.add(pm * std::log(pm / it->second));
    }
    return acc.value();
}

namespace {

// Symbol encoders for the (X, Y) tally. X packs lattice coordinates of the
// discretised values, one or two int16 per coordinate depending on whether
// the inputs are real; Y packs one little-endian u16 residue per prime.
struct XEncoder {
    double inv_spacing;
    bool real_only;

    void append(std::string& out, cplx z) const {
        // nearbyint matches discretise(): lattice index, ties to even.
        double kr = std::nearbyint(z.real() * inv_spacing);
        append_i16(out, static_cast<std::int16_t>(kr));
        if (!real_only) {
            double ki = std::nearbyint(z.imag() * inv_spacing);
            append_i16(out, static_cast<std::int16_t>(ki));
        }
    }
};

}  // namespace

JointDist xh_yh_joint(const MultSpec& g1, const MultSpec& g2, double eps,
                      const CorrelationParams& params, std::uint64_t H, const LogWindow& w,
                      int threads) {
    validate(params);
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("xh_yh_joint: eps must lie in (0,1)");
    if (H < 1 || H % params.a != 0)
        throw std::invalid_argument("xh_yh_joint: H must be a positive multiple of a");
    if (H > 64)
        throw budget_error("xh_yh_joint: H = " + std::to_string(H) +
                           " exceeds the exact-joint budget of 64");

    PrimeWindow pw = PrimeWindow::build(g1, g2, eps, H, params);
    const std::size_t np = pw.primes.size();
    const double spacing = eps * eps;
    if (1.0 / spacing > 32000.0)
        throw budget_error("xh_yh_joint: eps too small for int16 lattice coordinates");
    XEncoder enc{1.0 / spacing, g1.sign_valued() && g2.sign_valued()};

    using SegMap = std::map<std::pair<std::string, std::string>, double>;
    auto partials = map_segments<SegMap>(
        w.lo + 1, w.x + 1, kScanSegment, threads,
        [&](std::uint64_t, std::uint64_t s, std::uint64_t e) {
            SegMap tally;
            std::uint64_t m_lo = params.a * s + 1;
            std::uint64_t m_hi = params.a * (e - 1) + H + 1;
            ComplexWindow w1 = g1.evaluate_window(m_lo, m_hi);
            ComplexWindow w2 = g2.evaluate_window(m_lo, m_hi);
            std::string xsym, ysym;
            for (std::uint64_t n = s; n < e; ++n) {
                xsym.clear();
                ysym.clear();
                std::uint64_t base = params.a * n;
                for (std::uint64_t j = 1; j <= H; ++j)
                    enc.append(xsym, discretise(w1.at(base + j), eps));
                for (std::uint64_t j = 1; j <= H; ++j)
                    enc.append(xsym, discretise(w2.at(base + j), eps));
                for (std::size_t i = 0; i < np; ++i)
                    append_u16(ysym, static_cast<std::uint16_t>(n % pw.primes[i]));
                tally[{xsym, ysym}] += 1.0 / static_cast<double>(n);
            }
            return tally;
        });

    std::map<std::pair<std::string, std::string>, double> mass;
    for (const auto& part : partials)
        for (const auto& [key, m] : part) mass[key] += m;
    for (auto& [key, m] : mass) m /= w.Z;
    return JointDist::checked(std::move(mass));
}

WeightedDist yh_marginal(const PrimeWindow& pw, const LogWindow& w, int threads) {
    const std::size_t np = pw.primes.size();
    constexpr std::uint64_t kMaxStates = 1ull << 20;
    std::uint64_t M = 1;
    std::vector<std::uint64_t> stride(np);
    for (std::size_t i = 0; i < np; ++i) {
        if (pw.primes[i] > 0xffff)
            throw budget_error("yh_marginal: primes above 2^16 not representable");
        stride[i] = M;
        if (M > kMaxStates / pw.primes[i])
            throw budget_error("yh_marginal: residue alphabet exceeds 2^20 states");
        M *= pw.primes[i];
    }

    using Bins = std::vector<double>;
    auto partials = map_segments<Bins>(
        w.lo + 1, w.x + 1, kScanSegment, threads,
        [&](std::uint64_t, std::uint64_t s, std::uint64_t e) {
            Bins bins(M, 0.0);
            std::vector<std::uint64_t> r(np);
            for (std::size_t i = 0; i < np; ++i) r[i] = s % pw.primes[i];
            for (std::uint64_t n = s; n < e; ++n) {
                std::uint64_t idx = 0;
                for (std::size_t i = 0; i < np; ++i) idx += r[i] * stride[i];
                bins[idx] += 1.0 / static_cast<double>(n);
                for (std::size_t i = 0; i < np; ++i)
                    if (++r[i] == pw.primes[i]) r[i] = 0;
            }
            return bins;
        });

    std::vector<kahan_sum> merged(M);
    for (const auto& bins : partials)
        for (std::uint64_t i = 0; i < M; ++i) merged[i].add(bins[i]);

    std::map<std::string, double> mass;
    for (std::uint64_t idx = 0; idx < M; ++idx) {
        double m = merged[idx].value();
        if (m <= 0.0) continue;
        std::string sym;
        for (std::size_t i = 0; i < np; ++i)
            append_u16(sym, static_cast<std::uint16_t>((idx / stride[i]) % pw.primes[i]));
        mass[std::move(sym)] = m / w.Z;
    }
    return WeightedDist::checked(std::move(mass));
}

DecrementSchedule decrement_schedule(std::uint64_t H_minus, double C0, int J, std::uint64_t a,
                                     std::uint64_t cap) {
    if (H_minus < 2) throw std::invalid_argument("decrement_schedule: H_minus must be >= 2");
    if (!(C0 > 0.0)) throw std::invalid_argument("decrement_schedule: C0 must be positive");
    if (J < 1) throw std::invalid_argument("decrement_schedule: J must be >= 1");
    if (a < 1) throw std::invalid_argument("decrement_schedule: a must be >= 1");
    if (cap < a * H_minus)
        throw std::invalid_argument("decrement_schedule: cap must be >= a * H_minus");

    DecrementSchedule s;
    s.H_minus = H_minus;
    s.C0 = C0;
    s.J = J;
    s.a = a;
    std::uint64_t H = a * H_minus;
    while (static_cast<int>(s.levels.size()) < J && H <= cap) {
        s.levels.push_back(H);
        // The triple log is only meaningful for H > e^e; below that the
        // floor would be 0 or NaN, so the clamp takes over.
        std::uint64_t mult = 2;
        double lnH = std::log(static_cast<double>(H));
        if (lnH > std::exp(1.0)) {
            double m = C0 * lnH * std::log(std::log(lnH));
            if (m > 2.0) mult = static_cast<std::uint64_t>(m);
        }
        if (H > std::numeric_limits<std::uint64_t>::max() / mult) break;
        H *= mult;
    }
    return s;
}

MiScanResult scan_for_low_mi(const DecrementSchedule& sched, const MultSpec& g1,
                             const MultSpec& g2, double eps, const CorrelationParams& params,
                             const LogWindow& w, int threads, bool alt_threshold) {
    MiScanResult res;
    for (std::uint64_t H : sched.levels) {
        MiScanRow row;
        row.H = H;
        double lnH = std::log(static_cast<double>(H));
        if (alt_threshold) {
            row.threshold = std::pow(eps, 10.0) * static_cast<double>(H) / lnH;
        } else {
            row.threshold = static_cast<double>(H) / (lnH * std::log(std::log(lnH)));
        }
        try {
            JointDist j = xh_yh_joint(g1, g2, eps, params, H, w, threads);
            row.ok = true;
            row.I = mutual_information(j);
            row.HX = entropy(j.x_marginal);
            row.HY = entropy(j.y_marginal);
            row.meets_threshold = row.I <= row.threshold;
        } catch (const std::exception& ex) {
            row.ok = false;
            row.error = ex.what();
        }
        if (row.ok && row.meets_threshold && res.first_passing < 0)
            res.first_passing = static_cast<int>(res.rows.size());
        res.rows.push_back(std::move(row));
    }
    return res;
}

}  // namespace chowla
