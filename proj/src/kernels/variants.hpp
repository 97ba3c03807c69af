// Copyright 2026 The addtree Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "addtree/kernels.hpp"

namespace addtree::kernels {

namespace scalar {
void accumulate_tree(const FlatTreeView& tree, const double* columns, std::size_t n_rows,
                     double* out);
extern const KernelTable kTable;
}  // namespace scalar

#if defined(ADDTREE_HAVE_AVX2)
namespace avx2 {
extern const KernelTable kTable;
}
#endif

#if defined(ADDTREE_HAVE_NEON)
namespace neon {
extern const KernelTable kTable;
}
#endif

}  // namespace addtree::kernels
