#ifndef OMRING_PARALLEL_HPP
#define OMRING_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace omring
{

// Thread count used when a caller passes 0: OMRING_THREADS if set and
// positive, otherwise 1.
inline unsigned default_thread_count()
{
    if (const char *env = std::getenv("OMRING_THREADS"))
    {
        try
        {
            const int n = std::stoi(env);
            if (n > 0)
                return static_cast<unsigned>(n);
        }
        catch (const std::exception &)
        {
        }
    }
    return 1;
}

// Calls body(k) for k in [0, n). Each index is handled exactly once, so
// results written to per-index slots come out in a deterministic order.
// The first exception thrown by any worker is rethrown.
template <class Body>
void parallel_for(std::size_t n, unsigned threads, Body body)
{
    if (threads == 0)
        threads = default_thread_count();
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1)
    {
        for (std::size_t k = 0; k < n; ++k)
            body(k);
        return;
    }

    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
    {
        pool.emplace_back([&, t] {
            for (std::size_t k = t; k < n; k += threads)
            {
                try
                {
                    body(k);
                }
                catch (...)
                {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto &worker : pool)
        worker.join();
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace omring

#endif
