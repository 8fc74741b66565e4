#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "lwmi/detail/parallel.hpp"
#include "lwmi/detail/rng.hpp"
#include "lwmi/errors.hpp"
#include "lwmi/universe.hpp"

namespace lwmi {

struct McEstimate {
    double value = 0;
    double stderr_ = 0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

// ===========================================================================
// Hit-or-miss Monte Carlo over the bounding box.
//
// Sample i draws its coordinates from a counter-based stream (counter =
// i * N + dim), so the sequence is a pure function of (seed, i). Samples
// are partitioned into 64 fixed shards by index; each shard accumulates
// with compensated summation and shards are combined in shard order.
// The result is bit-identical for any thread count.
//
// The density must be non-negative wherever it contributes: it is evaluated
// at every sampled point inside the member region, and a negative value at
// any such point aborts the run. Points outside the member region never
// reach the density.
// ===========================================================================

namespace detail {

inline constexpr std::uint64_t MC_SHARDS = 64;

struct KahanSum {
    double sum = 0, carry = 0;
    void add(double v) {
        double y = v - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

} // namespace detail

template <class Member, class Density>
McEstimate mc_integrate(const Universe& u, Member&& member, Density&& density, std::uint64_t n,
                        std::uint64_t seed, unsigned threads = 1) {
    if (n < 2) throw input_error("Monte Carlo needs at least 2 samples");
    const std::size_t dims = u.num_reals();
    if (dims == 0) throw input_error("Monte Carlo integration needs real variables");

    std::vector<double> lo(dims), span(dims);
    double vol = 1;
    for (std::size_t j = 0; j < dims; ++j) {
        lo[j] = rat_to_double(u.real(j).lower);
        span[j] = rat_to_double(u.real(j).upper) - lo[j];
        vol *= span[j];
    }

    struct Shard {
        detail::KahanSum g, g2;
    };
    std::vector<Shard> shards(detail::MC_SHARDS);
    std::vector<std::string> shard_error(detail::MC_SHARDS);

    detail::parallel_for(detail::MC_SHARDS, threads, [&](std::size_t s) {
        std::vector<double> x(dims);
        Shard& sh = shards[s];
        for (std::uint64_t i = s; i < n; i += detail::MC_SHARDS) {
            for (std::size_t j = 0; j < dims; ++j)
                x[j] = lo[j] + detail::stream_u01(seed, i * dims + j) * span[j];
            double g = 0.0;
            if (member(x)) {
                g = density(x);
                if (g < 0) {
                    if (shard_error[s].empty())
                        shard_error[s] = "density is negative (" + std::to_string(g) +
                                         ") at a sampled point";
                    return;
                }
            }
            sh.g.add(g);
            sh.g2.add(g * g);
        }
    });
    for (const auto& e : shard_error)
        if (!e.empty()) throw nonnegativity_error(e);

    double s1 = 0, s2 = 0;
    for (const auto& sh : shards) {
        s1 += sh.g.sum;
        s2 += sh.g2.sum;
    }
    const double nn = static_cast<double>(n);
    double mean = s1 / nn;
    double var = (s2 - nn * mean * mean) / (nn - 1);
    if (var < 0) var = 0;

    McEstimate e;
    e.value = vol * mean;
    e.stderr_ = vol * std::sqrt(var / nn);
    e.samples = n;
    e.seed = seed;
    return e;
}

} // namespace lwmi
