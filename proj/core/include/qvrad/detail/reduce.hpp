#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <thread>
#include <vector>

namespace qvrad::detail {

//! Fixed-shape pairwise tree sum. The tree depends only on the input length,
//! never on how the inputs were produced.
template<class T>
T pairwise_sum(std::span<T const> values)
{
    if (values.empty())
        return T{};
    if (values.size() == 1)
        return values.front();
    std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

template<class T>
T pairwise_sum(std::vector<T> const& values)
{
    return pairwise_sum(std::span<T const>(values));
}

//! Evaluate fn(block) for block in [0, n_blocks) on up to `workers` threads.
//! Results are stored by block index, so the output is independent of the
//! worker count.
template<class T, class Fn>
std::vector<T> map_blocks(std::size_t n_blocks, unsigned workers, Fn&& fn)
{
    std::vector<T> out(n_blocks);
    unsigned n_threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n_blocks)));
    if (n_threads <= 1) {
        for (std::size_t b = 0; b < n_blocks; ++b)
            out[b] = fn(b);
        return out;
    }
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned w = 0; w < n_threads; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t b = w; b < n_blocks; b += n_threads)
                out[b] = fn(b);
        });
    }
    for (auto& t : pool)
        t.join();
    return out;
}

}  // namespace qvrad::detail
