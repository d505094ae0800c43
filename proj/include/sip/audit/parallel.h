// Copyright 2026 The Sequence Privacy Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef SIP_AUDIT_PARALLEL_H_
#define SIP_AUDIT_PARALLEL_H_

#include <functional>

namespace sip {

// 0 means one worker per hardware thread.
int ResolveThreads(int requested);

// Calls fn(i) for every i in [0, n) on up to `threads` workers. Indices are
// handed out dynamically; fn must only write to state owned by index i.
void ParallelFor(int n, int threads, const std::function<void(int)>& fn);

}  // namespace sip

#endif  // SIP_AUDIT_PARALLEL_H_
