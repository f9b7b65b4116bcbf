#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace reconn {

// Worker count: RECONN_THREADS caps it, hardware concurrency is the default.
inline int resolve_threads(int requested) {
  int n = requested > 0 ? requested
                        : static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("RECONN_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1 && cap < n) n = cap;
  }
  return n;
}

// Minimal persistent pool. Work is handed out as chunk indices pulled from an
// atomic counter; results must be written to per-chunk slots so the caller
// can combine them in a fixed order (determinism does not depend on the
// worker count or scheduling).
class ThreadPool {
 public:
  explicit ThreadPool(int n_workers) : n_workers_(n_workers < 1 ? 1 : n_workers) {
    for (int w = 1; w < n_workers_; ++w)
      threads_.emplace_back([this, w] { worker_loop(w); });
  }

  ~ThreadPool() {
    {
      std::lock_guard<std::mutex> lock(mu_);
      stop_ = true;
    }
    cv_.notify_all();
    for (auto& t : threads_) t.join();
  }

  int workers() const { return n_workers_; }

  void for_chunks(std::size_t n_chunks,
                  const std::function<void(std::size_t, int)>& fn) {
    if (n_chunks == 0) return;
    if (n_workers_ == 1 || n_chunks == 1) {
      for (std::size_t c = 0; c < n_chunks; ++c) fn(c, 0);
      return;
    }
    {
      std::lock_guard<std::mutex> lock(mu_);
      fn_ = &fn;
      next_.store(0);
      pending_ = n_chunks;
      total_ = n_chunks;
      ++generation_;
    }
    cv_.notify_all();
    drain(0);
    std::unique_lock<std::mutex> lock(mu_);
    done_cv_.wait(lock, [this] { return pending_ == 0; });
    fn_ = nullptr;
  }

 private:
  void drain(int worker) {
    const std::function<void(std::size_t, int)>* fn = fn_;
    while (true) {
      const std::size_t c = next_.fetch_add(1);
      if (c >= total_) break;
      (*fn)(c, worker);
      std::lock_guard<std::mutex> lock(mu_);
      if (--pending_ == 0) done_cv_.notify_all();
    }
  }

  void worker_loop(int worker) {
    std::uint64_t seen = 0;
    while (true) {
      {
        std::unique_lock<std::mutex> lock(mu_);
        cv_.wait(lock, [&] { return stop_ || generation_ != seen; });
        if (stop_) return;
        seen = generation_;
      }
      drain(worker);
    }
  }

  int n_workers_;
  std::vector<std::thread> threads_;
  std::mutex mu_;
  std::condition_variable cv_, done_cv_;
  const std::function<void(std::size_t, int)>* fn_ = nullptr;
  std::atomic<std::size_t> next_{0};
  std::size_t pending_ = 0;
  std::size_t total_ = 0;
  std::uint64_t generation_ = 0;
  bool stop_ = false;
};

}  // namespace reconn
