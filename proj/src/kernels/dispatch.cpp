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

#include <atomic>
#include <string>

#include "addtree/error.hpp"
#include "variants.hpp"

namespace addtree::kernels {
namespace {

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(ADDTREE_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
#if defined(ADDTREE_HAVE_NEON)
      return true;  // baseline on AArch64
#else
      return false;
#endif
  }
  return false;
}

const KernelTable* best_table() {
  for (Isa isa : {Isa::avx2, Isa::neon}) {
    if (cpu_supports(isa)) return table_for(isa);
  }
  return &scalar::kTable;
}

std::atomic<const KernelTable*> g_active{nullptr};

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "unknown";
}

const KernelTable* table_for(Isa isa) {
  if (!cpu_supports(isa)) return nullptr;
  switch (isa) {
    case Isa::scalar:
      return &scalar::kTable;
    case Isa::avx2:
#if defined(ADDTREE_HAVE_AVX2)
      return &avx2::kTable;
#else
      return nullptr;
#endif
    case Isa::neon:
#if defined(ADDTREE_HAVE_NEON)
      return &neon::kTable;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
    if (table_for(isa) != nullptr) out.push_back(isa);
  }
  return out;
}

const KernelTable& active() {
  const KernelTable* table = g_active.load(std::memory_order_acquire);
  if (table == nullptr) {
    table = best_table();
    g_active.store(table, std::memory_order_release);
  }
  return *table;
}

void set_active(Isa isa) {
  const KernelTable* table = table_for(isa);
  if (table == nullptr) {
    throw InvalidArgument("kernel set '" + std::string(to_string(isa)) + "' is not available");
  }
  g_active.store(table, std::memory_order_release);
}

}  // namespace addtree::kernels
