#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "qtj/numerics/big_float.hpp"

namespace qtj
{

/// Fixed reduction granularity. Changing it changes results, so it is not a knob.
inline constexpr std::size_t kSumChunk = 4096;

namespace detail
{
inline std::atomic<unsigned> &worker_setting()
{
    static std::atomic<unsigned> workers{1};
    return workers;
}
} // namespace detail

/// Worker threads used by the summation kernels. Results never depend on it.
inline unsigned worker_count() { return detail::worker_setting().load(); }
inline void set_worker_count(unsigned n) { detail::worker_setting().store(std::max(1U, n)); }

inline unsigned ceil_log2(std::size_t n)
{
    unsigned bits = 0;
    while ((std::size_t{1} << bits) < n)
        ++bits;
    return bits;
}

/// Internal precision for a pipeline reporting at p bits over `count` terms.
inline Precision working_precision(Precision p, std::size_t count) { return p + 32 + ceil_log2(std::max<std::size_t>(count, 1)); }

/// Accumulates K parallel sums over indices [0, count). `add_term(i, acc)`
/// must add the i-th terms into acc[0..K) in place. Indices are summed left to
/// right inside chunks of kSumChunk, and chunk totals are combined left to
/// right, so the result is a fixed function of (count, precision, add_term)
/// regardless of how many workers run the chunks.
template <std::size_t K, class AddTerm>
std::array<BigComplex, K> chunked_accumulate(std::size_t count, Precision p, AddTerm &&add_term)
{
    const std::size_t chunks = (count + kSumChunk - 1) / kSumChunk;
    auto zero = [p] {
        std::array<BigComplex, K> a;
        for (auto &x : a)
            x = BigComplex(p);
        return a;
    };
    std::vector<std::array<BigComplex, K>> partial;
    partial.reserve(chunks);
    for (std::size_t c = 0; c < chunks; ++c)
        partial.push_back(zero());

    auto run_chunk = [&](std::size_t c) {
        const std::size_t lo = c * kSumChunk;
        const std::size_t hi = std::min(count, lo + kSumChunk);
        for (std::size_t i = lo; i < hi; ++i)
            add_term(i, partial[c]);
    };

    const unsigned workers = std::min<std::size_t>(worker_count(), std::max<std::size_t>(chunks, 1));
    if (workers <= 1)
    {
        for (std::size_t c = 0; c < chunks; ++c)
            run_chunk(c);
    }
    else
    {
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
        {
            pool.emplace_back([&, w] {
                try
                {
                    for (std::size_t c = next++; c < chunks; c = next++)
                        run_chunk(c);
                }
                catch (...)
                {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto &t : pool)
            t.join();
        for (auto &e : errors)
            if (e)
                std::rethrow_exception(e);
    }

    auto total = zero();
    for (const auto &chunk : partial)
        for (std::size_t j = 0; j < K; ++j)
            total[j] += chunk[j];
    return total;
}

template <class AddTerm>
BigComplex chunked_sum(std::size_t count, Precision p, AddTerm &&add_term)
{
    return chunked_accumulate<1>(count, p, [&](std::size_t i, std::array<BigComplex, 1> &acc) {
        add_term(i, acc[0]);
    })[0];
}

/// Deterministic sum of an ordered list; all terms must share one precision.
inline BigComplex sum_fixed_order(std::span<const BigComplex> terms, std::optional<Precision> precision = {})
{
    Precision p = precision ? *precision : (terms.empty() ? Precision{64} : terms.front().precision());
    for (const auto &t : terms)
        if (t.precision() != p)
            throw Error(Errc::PrecisionMismatch, "sum_fixed_order: terms at " + std::to_string(t.precision()) +
                                                     " and " + std::to_string(p) + " bits");
    return chunked_sum(terms.size(), p, [&](std::size_t i, BigComplex &acc) { acc += terms[i]; });
}

} // namespace qtj
