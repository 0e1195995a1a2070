#pragma once

#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace radcal::sim {

template <class R>
struct TrialOutcome {
  std::optional<R> value;
  std::string error;  // set when value is empty
};

/// Runs work(i) for i in [0, n) on up to `workers` threads and hands every outcome to
/// sink(i, outcome) on the calling thread in index order. At most `window` results
/// wait for emission at any time, which bounds memory when the sink is slow.
/// Exceptions thrown by work are captured into the outcome; a throwing sink stops
/// the pool and is rethrown.
template <class R, class Work, class Sink>
void run_ordered(std::size_t n, std::size_t workers, std::size_t window, Work&& work, Sink&& sink) {
  auto run_one = [&](std::size_t i) {
    TrialOutcome<R> out;
    try {
      out.value.emplace(work(i));
    } catch (const std::exception& e) {
      out.error = e.what();
    } catch (...) {
      out.error = "unknown failure";
    }
    return out;
  };

  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) sink(i, run_one(i));
    return;
  }
  if (window < workers) window = workers;

  std::mutex mu;
  std::condition_variable cv;
  std::size_t next_claim = 0;
  std::size_t next_emit = 0;
  bool stop = false;
  std::map<std::size_t, TrialOutcome<R>> done;

  auto worker = [&] {
    for (;;) {
      std::size_t i = 0;
      {
        std::unique_lock lk(mu);
        cv.wait(lk, [&] { return stop || next_claim >= n || next_claim < next_emit + window; });
        if (stop || next_claim >= n) return;
        i = next_claim++;
      }
      auto out = run_one(i);
      {
        std::lock_guard lk(mu);
        done.emplace(i, std::move(out));
      }
      cv.notify_all();
    }
  };

  std::exception_ptr sink_error;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);

    while (next_emit < n) {
      TrialOutcome<R> out;
      {
        std::unique_lock lk(mu);
        cv.wait(lk, [&] { return done.count(next_emit) > 0; });
        auto node = done.extract(next_emit);
        out = std::move(node.mapped());
      }
      try {
        sink(next_emit, std::move(out));
      } catch (...) {
        sink_error = std::current_exception();
        std::lock_guard lk(mu);
        stop = true;
      }
      {
        std::lock_guard lk(mu);
        ++next_emit;
      }
      cv.notify_all();
      if (sink_error) break;
    }
  }
  if (sink_error) std::rethrow_exception(sink_error);
}

}  // namespace radcal::sim
