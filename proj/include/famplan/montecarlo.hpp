#pragma once

// Monte Carlo simulation of families under a stopping rule.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "famplan/core.hpp"
#include "famplan/random.hpp"

namespace famplan {

inline constexpr count_t default_birth_cap = 10'000'000;

struct FamilyOutcome {
    count_t boys = 0;
    count_t girls = 0;
    count_t total = 0;
    /// X_T = boys/p - girls/(1-p)
    double martingale_terminal = 0.0;
    double girl_share = 0.0;
};

/// Draws births until the rule first holds. `uniform` returns variates in
/// [0,1); a variate below p is a boy.
template <class UniformSource>
FamilyOutcome simulate_family(const Rule& rule, BirthProbability p, UniformSource&& uniform,
                              count_t birth_cap = default_birth_cap) {
    require_nonempty(rule, "simulate_family");
    FamilyOutcome out;
    while (!rule.satisfied_by(out.boys, out.girls)) {
        if (out.total == birth_cap) {
            throw BirthCapError("simulate_family: no stop after " + std::to_string(birth_cap) +
                                " births; p = " + std::to_string(p.boy()) + " is numerically degenerate");
        }
        if (uniform() < p.boy()) {
            ++out.boys;
        } else {
            ++out.girls;
        }
        ++out.total;
    }
    out.martingale_terminal = martingale_value(out.boys, out.girls, p);
    out.girl_share = static_cast<double>(out.girls) / static_cast<double>(out.total);
    return out;
}

struct SimulationSummary {
    count_t samples = 0;
    std::uint64_t seed = 0;
    double mean_boys = 0.0;
    double mean_girls = 0.0;
    double mean_total = 0.0;
    double mean_girl_share = 0.0;
    double mean_martingale = 0.0;
    double se_boys = 0.0;
    double se_girls = 0.0;
    double se_total = 0.0;
    double se_girl_share = 0.0;
    double se_martingale = 0.0;
    /// mean_boys / mean_girls
    double ratio_estimate = 0.0;
    /// Delta-method standard error of ratio_estimate.
    double se_ratio = 0.0;

    friend bool operator==(const SimulationSummary&, const SimulationSummary&) = default;
};

struct SimulationOptions {
    /// 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
    count_t birth_cap = default_birth_cap;
};

namespace detail {

/// Running means and co-moments (Welford), mergeable in a fixed order.
struct MomentAccumulator {
    static constexpr std::size_t dims = 5; // boys, girls, total, girl share, martingale

    double count = 0.0;
    double mean[dims] = {};
    double m2[dims] = {};
    double co_boys_girls = 0.0;

    void add(const FamilyOutcome& f) {
        const double x[dims] = {static_cast<double>(f.boys), static_cast<double>(f.girls),
                                static_cast<double>(f.total), f.girl_share, f.martingale_terminal};
        count += 1.0;
        const double delta_b = x[0] - mean[0];
        for (std::size_t i = 0; i < dims; ++i) {
            const double delta = x[i] - mean[i];
            mean[i] += delta / count;
            m2[i] += delta * (x[i] - mean[i]);
        }
        co_boys_girls += delta_b * (x[1] - mean[1]);
    }

    void merge(const MomentAccumulator& o) {
        if (o.count == 0.0) {
            return;
        }
        const double n = count + o.count;
        const double db = o.mean[0] - mean[0];
        const double dg = o.mean[1] - mean[1];
        co_boys_girls += o.co_boys_girls + db * dg * count * o.count / n;
        for (std::size_t i = 0; i < dims; ++i) {
            const double delta = o.mean[i] - mean[i];
            m2[i] += o.m2[i] + delta * delta * count * o.count / n;
            mean[i] += delta * o.count / n;
        }
        count = n;
    }
};

inline constexpr count_t replicates_per_chunk = 4096;

} // namespace detail

/// Simulates `samples` independent families. Replicate i uses the stream
/// SplitMix64::for_replicate(seed, i); replicates are grouped in fixed chunks
/// whose statistics are merged in chunk order, so the summary is bit-identical
/// for any thread count.
inline SimulationSummary run_simulation(const Rule& rule, BirthProbability p, count_t samples, std::uint64_t seed,
                                        const SimulationOptions& options = {}) {
    require_nonempty(rule, "run_simulation");
    if (samples == 0) {
        throw DomainError("run_simulation: samples must be positive");
    }
    const count_t chunks = (samples + detail::replicates_per_chunk - 1) / detail::replicates_per_chunk;
    std::vector<detail::MomentAccumulator> partial(chunks);

    std::atomic<count_t> next_chunk{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const count_t chunk = next_chunk.fetch_add(1);
            if (chunk >= chunks) {
                return;
            }
            const count_t begin = chunk * detail::replicates_per_chunk;
            const count_t end = std::min(samples, begin + detail::replicates_per_chunk);
            try {
                for (count_t i = begin; i < end; ++i) {
                    auto rng = SplitMix64::for_replicate(seed, i);
                    partial[chunk].add(simulate_family(rule, p, [&rng] { return rng.uniform(); }, options.birth_cap));
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next_chunk = chunks;
                return;
            }
        }
    };

    unsigned threads = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<count_t>(threads, chunks));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    detail::MomentAccumulator total;
    for (const auto& chunk : partial) {
        total.merge(chunk);
    }

    const double n = total.count;
    auto standard_error = [&](std::size_t i) {
        return n > 1.0 ? std::sqrt(total.m2[i] / (n - 1.0) / n) : 0.0;
    };

    SimulationSummary s;
    s.samples = samples;
    s.seed = seed;
    s.mean_boys = total.mean[0];
    s.mean_girls = total.mean[1];
    s.mean_total = total.mean[2];
    s.mean_girl_share = total.mean[3];
    s.mean_martingale = total.mean[4];
    s.se_boys = standard_error(0);
    s.se_girls = standard_error(1);
    s.se_total = standard_error(2);
    s.se_girl_share = standard_error(3);
    s.se_martingale = standard_error(4);
    s.ratio_estimate = s.mean_boys / s.mean_girls;
    if (n > 1.0) {
        const double var_b = total.m2[0] / (n - 1.0);
        const double var_g = total.m2[1] / (n - 1.0);
        const double cov = total.co_boys_girls / (n - 1.0);
        const double r = s.ratio_estimate;
        const double var_ratio = (var_b - 2.0 * r * cov + r * r * var_g) / (s.mean_girls * s.mean_girls * n);
        s.se_ratio = std::sqrt(std::max(0.0, var_ratio));
    }
    return s;
}

} // namespace famplan
