//
// Copyright 2026 The REAP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef REAP_RANDOM_STREAM_H_
#define REAP_RANDOM_STREAM_H_

#include <cstdint>

namespace reap {

// Counter-based uniform source. The k-th draw of a stream depends only on
// (seed, k), so a stream can be re-created at any draw index and independent
// streams can be derived from a master seed without sharing state.
class RandomStream {
 public:
  explicit RandomStream(uint64_t seed, uint64_t start_index = 0);

  // Child stream for a (master seed, stream id) pair, e.g. one per trial.
  static RandomStream Derive(uint64_t master_seed, uint64_t stream_id);

  // Uniform on the open interval (0, 1).
  double NextUniform();

  // Uniform draw at an explicit index; does not advance the stream.
  double UniformAt(uint64_t index) const;

  uint64_t seed() const { return seed_; }
  uint64_t index() const { return index_; }

 private:
  uint64_t seed_;
  uint64_t key_;
  uint64_t index_;
};

// SplitMix64 finalizer.
uint64_t Mix64(uint64_t x);

}  // namespace reap

#endif  // REAP_RANDOM_STREAM_H_
