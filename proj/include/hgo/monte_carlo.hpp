#pragma once

#include <cmath>
#include <functional>
#include <future>
#include <stdexcept>
#include <vector>

#include "hgo/quadrature.hpp"
#include "hgo/rng.hpp"

namespace hgo {

struct MCSpec {
    long sample_count = 100000;
    std::uint64_t seed = 0;
    int chunk_count = 8;

    void validate() const {
        if (sample_count < 1) throw std::invalid_argument("MCSpec: sample_count must be >= 1");
        if (chunk_count < 1) throw std::invalid_argument("MCSpec: chunk_count must be >= 1");
        if (sample_count < chunk_count)
            throw std::invalid_argument("MCSpec: sample_count must be >= chunk_count");
    }
};

/// Uniform sampler over a domain of known measure. `draw` must be a pure
/// function of the rng state so results depend only on (seed, index).
template <typename Point>
struct DomainSampler {
    double volume;
    std::function<Point(SampleRng&)> draw;
};

namespace detail {

struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

}  // namespace detail

/// Monte Carlo estimate of the integral of f over the sampler's domain,
/// with a standard-error estimate. Sample i sees a substream derived from
/// (seed, i) alone, and chunk partial sums are reduced in chunk order, so
/// the result is bitwise reproducible for a fixed (seed, chunk_count) no
/// matter how many threads evaluate the chunks. Changing chunk_count only
/// regroups compensated additions.
template <typename Point, typename F>
IntegralResult mc_integrate(const F& f, const DomainSampler<Point>& sampler,
                            const MCSpec& spec, int jobs = 1) {
    spec.validate();
    const long n = spec.sample_count;
    const int chunks = spec.chunk_count;

    struct Partial {
        detail::KahanSum sum, sum_sq;
    };
    auto run_chunk = [&](long begin, long end) {
        Partial p;
        for (long i = begin; i < end; ++i) {
            SampleRng rng(spec.seed, static_cast<std::uint64_t>(i));
            Point x = sampler.draw(rng);
            const double v = f(x);
            p.sum.add(v);
            p.sum_sq.add(v * v);
        }
        return p;
    };

    const long base = n / chunks;
    const long extra = n % chunks;
    std::vector<std::pair<long, long>> ranges;
    ranges.reserve(chunks);
    long at = 0;
    for (int c = 0; c < chunks; ++c) {
        const long len = base + (c < extra ? 1 : 0);
        ranges.emplace_back(at, at + len);
        at += len;
    }

    std::vector<Partial> partials(chunks);
    if (jobs > 1) {
        std::vector<std::future<Partial>> futures;
        futures.reserve(chunks);
        for (auto [b, e] : ranges)
            futures.push_back(std::async(std::launch::async, run_chunk, b, e));
        for (int c = 0; c < chunks; ++c) partials[c] = futures[c].get();
    } else {
        for (int c = 0; c < chunks; ++c) partials[c] = run_chunk(ranges[c].first, ranges[c].second);
    }

    detail::KahanSum sum, sum_sq;
    for (const Partial& p : partials) {
        sum.add(p.sum.sum);
        sum_sq.add(p.sum_sq.sum);
    }

    const double mean = sum.sum / static_cast<double>(n);
    double variance = 0.0;
    if (n > 1) {
        variance = (sum_sq.sum - static_cast<double>(n) * mean * mean) /
                   static_cast<double>(n - 1);
        variance = std::max(variance, 0.0);
    }
    const double stderr_mean = std::sqrt(variance / static_cast<double>(n));
    return {sampler.volume * mean, sampler.volume * stderr_mean, n};
}

}  // namespace hgo
