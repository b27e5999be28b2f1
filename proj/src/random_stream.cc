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

#include "reap/random_stream.h"

namespace reap {
namespace {

constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

}  // namespace

uint64_t Mix64(uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(uint64_t seed, uint64_t start_index)
    : seed_(seed), key_(Mix64(seed)), index_(start_index) {}

RandomStream RandomStream::Derive(uint64_t master_seed, uint64_t stream_id) {
  return RandomStream(Mix64(Mix64(master_seed) ^ Mix64(~stream_id)));
}

double RandomStream::UniformAt(uint64_t index) const {
  const uint64_t bits = Mix64(key_ + index * kGolden);
  // 53 significant bits, offset by half an ulp so 0 and 1 are excluded.
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::NextUniform() { return UniformAt(index_++); }

}  // namespace reap
