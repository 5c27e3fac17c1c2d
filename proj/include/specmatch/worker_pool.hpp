#pragma once

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace specmatch {

/// Fixed set of worker threads that execute one indexed task batch at a
/// time. run() blocks the calling (coordinator) thread until every task of
/// the batch has finished, which is the only synchronization point.
class WorkerPool {
 public:
  explicit WorkerPool(std::size_t threads);
  ~WorkerPool();
  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  std::size_t size() const { return threads_.size(); }

  /// Runs task(i) for i in [0, count). Task i executes on thread i % size().
  /// The first exception thrown by a task is rethrown here.
  void run(std::size_t count, const std::function<void(std::size_t)>& task);

 private:
  void loop(std::size_t id);

  std::vector<std::thread> threads_;
  std::mutex mu_;
  std::condition_variable wake_;
  std::condition_variable done_;
  const std::function<void(std::size_t)>* task_ = nullptr;
  std::size_t count_ = 0;
  std::size_t generation_ = 0;
  std::size_t pending_ = 0;
  bool stop_ = false;
  std::exception_ptr error_;
};

}  // namespace specmatch
