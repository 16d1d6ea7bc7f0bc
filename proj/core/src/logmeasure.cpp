#include "chowla/logmeasure.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace chowla {
namespace {

// Evaluates f on [lo, hi) as int8 signs. Sign-valued kinds round exactly;
// anything else is rejected upstream.
std::vector<std::int8_t> sign_values(const MultSpec& f, std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::int8_t> out(hi - lo);
    switch (f.kind()) {
        case MultSpec::Kind::Liouville: {
            SignWindow sw = liouville_window(lo, hi);
            for (std::uint64_t n = lo; n < hi; ++n) out[n - lo] = static_cast<std::int8_t>(sw.get(n));
            return out;
        }
        case MultSpec::Kind::Mobius: {
            SignWindow sw = mobius_window(lo, hi);
            for (std::uint64_t n = lo; n < hi; ++n) out[n - lo] = static_cast<std::int8_t>(sw.get(n));
            return out;
        }
        case MultSpec::Kind::MobiusSquared: {
            SignWindow sw = mobius_window(lo, hi);
            for (std::uint64_t n = lo; n < hi; ++n)
                out[n - lo] = static_cast<std::int8_t>(std::abs(sw.get(n)));
            return out;
        }
        default: {
            ComplexWindow cw = f.evaluate_window(lo, hi);
            for (std::uint64_t i = 0; i < cw.values.size(); ++i)
                out[i] = static_cast<std::int8_t>(std::lround(cw.values[i].real()));
            return out;
        }
    }
}

double segment_weight(Weighting weighting, std::uint64_t n) {
    return weighting == Weighting::logarithmic ? 1.0 / static_cast<double>(n) : 1.0;
}

double normalizer(Weighting weighting, const LogWindow& w) {
    return weighting == Weighting::logarithmic ? w.Z : static_cast<double>(w.size());
}

}  // namespace

LogWindow make_log_window(std::uint64_t x, double omega, int threads) {
    if (x < 2) throw std::invalid_argument("log window: x must be >= 2");
    if (!(omega >= 1.0) || !(omega <= static_cast<double>(x)))
        throw std::invalid_argument("log window: need 1 <= omega <= x");
    LogWindow w;
    w.x = x;
    w.omega = omega;
    w.lo = static_cast<std::uint64_t>(static_cast<double>(x) / omega);
    if (w.lo >= x) throw std::invalid_argument("log window: empty window (omega too close to 1)");

    auto partials = map_segments<kahan_sum>(
        w.lo + 1, x + 1, kScanSegment, threads,
        [](std::uint64_t, std::uint64_t s, std::uint64_t e) {
            kahan_sum acc;
            for (std::uint64_t n = s; n < e; ++n) acc.add(1.0 / static_cast<double>(n));
            return acc;
        });
    kahan_sum z;
    for (const auto& part : partials) z.add(part);
    w.Z = z.value();
    return w;
}

void validate(const CorrelationParams& p) {
    if (p.a < 1) throw std::invalid_argument("correlation params: a must be >= 1");
    if (p.h == 0) throw std::invalid_argument("correlation params: h must be nonzero");
}

namespace {

struct SegAccum {
    kahan_csum sum;
    std::uint64_t skipped = 0;
};

}  // namespace

Correlation2Result correlation2(const MultSpec& g1, const MultSpec& g2,
                                const CorrelationParams& p, const LogWindow& w, int threads,
                                Weighting weighting) {
    validate(p);
    const std::int64_t a = static_cast<std::int64_t>(p.a);
    auto partials = map_segments<SegAccum>(
        w.lo + 1, w.x + 1, kScanSegment, threads,
        [&](std::uint64_t, std::uint64_t s, std::uint64_t e) {
            SegAccum acc;
            std::int64_t m1_lo = a * static_cast<std::int64_t>(s) + p.b;
            std::int64_t m1_hi = a * static_cast<std::int64_t>(e - 1) + p.b + 1;
            std::int64_t m2_lo = m1_lo + p.h;
            std::int64_t m2_hi = m1_hi + p.h;
            // Arguments below 1 are skipped (and counted), so clamp the
            // evaluation ranges; an all-skipped segment evaluates nothing.
            ComplexWindow w1, w2;
            if (m1_hi > 1)
                w1 = g1.evaluate_window(static_cast<std::uint64_t>(std::max<std::int64_t>(1, m1_lo)),
                                        static_cast<std::uint64_t>(m1_hi));
            if (m2_hi > 1)
                w2 = g2.evaluate_window(static_cast<std::uint64_t>(std::max<std::int64_t>(1, m2_lo)),
                                        static_cast<std::uint64_t>(m2_hi));
            for (std::uint64_t n = s; n < e; ++n) {
                std::int64_t m1 = a * static_cast<std::int64_t>(n) + p.b;
                std::int64_t m2 = m1 + p.h;
                if (m1 < 1 || m2 < 1) {
                    ++acc.skipped;
                    continue;
                }
                cplx v = w1.at(static_cast<std::uint64_t>(m1)) * w2.at(static_cast<std::uint64_t>(m2));
                acc.sum.add(v * segment_weight(weighting, n));
            }
            return acc;
        });
    kahan_csum total;
    std::uint64_t skipped = 0;
    for (const auto& part : partials) {
        total.add(part.sum);
        skipped += part.skipped;
    }
    cplx raw = total.value();
    return {raw, raw / normalizer(weighting, w), skipped};
}

Correlation3Result correlation3(const MultSpec& g1, const MultSpec& g2, const MultSpec& g3,
                                const std::array<std::int64_t, 3>& shifts, const LogWindow& w,
                                int threads, Weighting weighting) {
    const MultSpec* gs[3] = {&g1, &g2, &g3};
    auto partials = map_segments<SegAccum>(
        w.lo + 1, w.x + 1, kScanSegment, threads,
        [&](std::uint64_t, std::uint64_t s, std::uint64_t e) {
            SegAccum acc;
            ComplexWindow win[3];
            for (int i = 0; i < 3; ++i) {
                std::int64_t mlo = static_cast<std::int64_t>(s) + shifts[i];
                std::int64_t mhi = static_cast<std::int64_t>(e - 1) + shifts[i] + 1;
                if (mhi > 1)
                    win[i] = gs[i]->evaluate_window(
                        static_cast<std::uint64_t>(std::max<std::int64_t>(1, mlo)),
                        static_cast<std::uint64_t>(mhi));
            }
            for (std::uint64_t n = s; n < e; ++n) {
                std::int64_t m0 = static_cast<std::int64_t>(n) + shifts[0];
                std::int64_t m1 = static_cast<std::int64_t>(n) + shifts[1];
                std::int64_t m2 = static_cast<std::int64_t>(n) + shifts[2];
                if (m0 < 1 || m1 < 1 || m2 < 1) {
                    ++acc.skipped;
                    continue;
                }
                cplx v = win[0].at(static_cast<std::uint64_t>(m0)) *
                         win[1].at(static_cast<std::uint64_t>(m1)) *
                         win[2].at(static_cast<std::uint64_t>(m2));
                acc.sum.add(v * segment_weight(weighting, n));
            }
            return acc;
        });
    kahan_csum total;
    std::uint64_t skipped = 0;
    for (const auto& part : partials) {
        total.add(part.sum);
        skipped += part.skipped;
    }
    cplx raw = total.value();
    return {raw, raw / normalizer(weighting, w), skipped};
}

std::size_t SignPatternTally::index_of(const std::vector<int>& pattern) {
    std::size_t idx = 0, base = 1;
    for (int v : pattern) {
        if (v < -1 || v > 1) throw std::invalid_argument("sign pattern: values must be -1, 0, +1");
        idx += static_cast<std::size_t>(v + 1) * base;
        base *= 3;
    }
    return idx;
}

std::vector<int> SignPatternTally::pattern_of(std::size_t index, int k) {
    std::vector<int> out(k);
    for (int i = 0; i < k; ++i) {
        out[i] = static_cast<int>(index % 3) - 1;
        index /= 3;
    }
    return out;
}

SignPatternTally sign_pattern_density(const MultSpec& f, int k, const LogWindow& w, int threads,
                                      Weighting weighting) {
    if (k < 1 || k > 8)
        throw std::invalid_argument("sign_pattern_density: k must lie in [1, 8]");
    if (!f.sign_valued())
        throw std::invalid_argument("sign_pattern_density: f must take values in {-1, 0, +1}");

    std::size_t nbins = 1;
    for (int i = 0; i < k; ++i) nbins *= 3;
    using Bins = std::vector<kahan_sum>;
    auto partials = map_segments<Bins>(
        w.lo + 1, w.x + 1, kScanSegment, threads,
        [&](std::uint64_t, std::uint64_t s, std::uint64_t e) {
            Bins bins(nbins);
            std::vector<std::int8_t> vals =
                sign_values(f, s, e + static_cast<std::uint64_t>(k) - 1);
            for (std::uint64_t n = s; n < e; ++n) {
                std::size_t idx = 0, base = 1;
                for (int i = 0; i < k; ++i) {
                    idx += static_cast<std::size_t>(vals[n - s + i] + 1) * base;
                    base *= 3;
                }
                bins[idx].add(segment_weight(weighting, n));
            }
            return bins;
        });

    SignPatternTally tally;
    tally.k = k;
    tally.density.assign(nbins, 0.0);
    std::vector<kahan_sum> merged(nbins);
    for (const auto& bins : partials)
        for (std::size_t i = 0; i < nbins; ++i) merged[i].add(bins[i]);
    double norm = normalizer(weighting, w);
    for (std::size_t i = 0; i < nbins; ++i) tally.density[i] = merged[i].value() / norm;
    return tally;
}

}  // namespace chowla
