#pragma once

#include <cstddef>
#include <functional>

namespace fdisc {

/// Worker count used by the Monte Carlo and experiment drivers; 0 means
/// std::thread::hardware_concurrency().
void set_thread_count(unsigned threads);
unsigned thread_count();

/// Runs body(i) for i in [0, count) on up to thread_count() threads.
/// Work items are claimed dynamically; callers must write results into
/// per-index slots and reduce them in index order afterwards.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace fdisc
