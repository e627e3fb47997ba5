//---------------------------------------------------------------------------//
// Copyright 2026 the bstrings authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file bstrings/parallel.hpp
//---------------------------------------------------------------------------//
#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace bstrings
{
//---------------------------------------------------------------------------//
/*!
 * Evaluate fn(i) for i in [0, count) on up to \c threads workers.
 *
 * Results are stored by index, so the output never depends on scheduling.
 * Each call of \c fn must own all of its mutable state (e.g. a replicate
 * stream built from i). The first exception thrown by any worker is
 * rethrown.
 */
template<class T, class F>
std::vector<T> parallel_map(std::uint64_t count, unsigned threads, F const& fn)
{
    std::vector<T> out(count);
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(
        std::min<std::uint64_t>(threads, std::max<std::uint64_t>(count, 1)));

    auto work = [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t i = begin; i < end; ++i)
            out[i] = fn(i);
    };
    if (threads <= 1)
    {
        work(0, count);
        return out;
    }

    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    std::uint64_t chunk = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t)
    {
        std::uint64_t begin = std::min(count, t * chunk);
        std::uint64_t end = std::min(count, begin + chunk);
        pool.emplace_back([&, t, begin, end] {
            try
            {
                work(begin, end);
            }
            catch (...)
            {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool)
        th.join();
    for (auto& e : errors)
    {
        if (e)
            std::rethrow_exception(e);
    }
    return out;
}

//---------------------------------------------------------------------------//
}  // namespace bstrings
