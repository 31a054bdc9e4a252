// include/cwkws/common/runtime.h

// Copyright 2026  The cwkws Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef CWKWS_COMMON_RUNTIME_H_
#define CWKWS_COMMON_RUNTIME_H_

namespace cwkws {

/// Keeps large activation buffers on the heap instead of fresh mmap pages.
/// Training allocates several MB per sample; without this most of that is
/// page-fault time. Call once from main(); a no-op off glibc.
void TuneAllocator();

}  // namespace cwkws

#endif  // CWKWS_COMMON_RUNTIME_H_
