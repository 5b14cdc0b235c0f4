// Copyright 2026 The pintbs Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include <Eigen/Core>

namespace pintbs {

/// Fixed set of worker threads that fan out over a numbered list of blocks.
///
/// The block list never depends on the worker count, so any reduction that
/// combines per-block partials in block order is bitwise reproducible for
/// every pool size. The calling thread participates; a pool of size 1 spawns
/// no threads at all.
class WorkerPool {
 public:
  explicit WorkerPool(int workers);
  ~WorkerPool();

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  int size() const { return static_cast<int>(threads_.size()) + 1; }

  /// Calls fn(b) for every b in [0, blocks) and returns when all calls are done.
  /// fn must not throw; callers that can fail capture errors per block.
  void run(Eigen::Index blocks, const std::function<void(Eigen::Index)>& fn);

 private:
  void worker_loop();
  void drain();

  std::vector<std::thread> threads_;
  std::mutex mutex_;
  std::condition_variable wake_;
  std::condition_variable done_;
  const std::function<void(Eigen::Index)>* job_ = nullptr;
  Eigen::Index blocks_ = 0;
  std::atomic<Eigen::Index> next_{0};
  std::atomic<Eigen::Index> finished_{0};
  std::size_t generation_ = 0;
  int active_ = 0;
  bool stop_ = false;
};

/// Contiguous row ranges of an nx-by-ny row-major field.
struct RowBlocks {
  static constexpr Eigen::Index kRowsPerBlock = 8;

  Eigen::Index rows;
  Eigen::Index count() const { return (rows + kRowsPerBlock - 1) / kRowsPerBlock; }
  Eigen::Index begin(Eigen::Index b) const { return b * kRowsPerBlock; }
  Eigen::Index end(Eigen::Index b) const { return std::min(rows, (b + 1) * kRowsPerBlock); }
};

}  // namespace pintbs
