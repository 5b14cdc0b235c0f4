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

#include "pintbs/parallel.hpp"

#include <stdexcept>

namespace pintbs {

WorkerPool::WorkerPool(int workers) {
  if (workers < 1) throw std::invalid_argument("WorkerPool: need at least one worker");
  threads_.reserve(static_cast<std::size_t>(workers - 1));
  for (int t = 1; t < workers; ++t) threads_.emplace_back([this] { worker_loop(); });
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard lock(mutex_);
    stop_ = true;
  }
  wake_.notify_all();
  for (auto& t : threads_) t.join();
}

void WorkerPool::drain() {
  for (Eigen::Index b = next_.fetch_add(1); b < blocks_; b = next_.fetch_add(1)) {
    (*job_)(b);
    finished_.fetch_add(1, std::memory_order_acq_rel);
  }
}

void WorkerPool::run(Eigen::Index blocks, const std::function<void(Eigen::Index)>& fn) {
  if (threads_.empty()) {
    for (Eigen::Index b = 0; b < blocks; ++b) fn(b);
    return;
  }
  {
    std::lock_guard lock(mutex_);
    job_ = &fn;
    blocks_ = blocks;
    next_.store(0);
    finished_.store(0);
    ++generation_;
  }
  wake_.notify_all();
  drain();
  std::unique_lock lock(mutex_);
  // Helpers may still be inside drain() holding job_; wait until they leave.
  done_.wait(lock, [&] { return finished_.load() == blocks_ && active_ == 0; });
  job_ = nullptr;
}

void WorkerPool::worker_loop() {
  std::size_t seen = 0;
  std::unique_lock lock(mutex_);
  for (;;) {
    wake_.wait(lock, [&] { return stop_ || generation_ != seen; });
    if (stop_) return;
    seen = generation_;
    ++active_;
    lock.unlock();
    drain();
    lock.lock();
    --active_;
    done_.notify_all();
  }
}

}  // namespace pintbs
