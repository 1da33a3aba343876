// chartkit: digital-twin-aided channel charting toolkit
// Copyright (C) 2026 The chartkit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cblas.h>
#include <cstdlib>
#include <cstring>
#include <string>

#if defined(__linux__)
#include <unistd.h>
#endif

namespace chartkit {

// Some virtualized hosts mask CPUID vendor/model strings, which makes
// OpenBLAS fall back to a pre-AVX kernel even though AVX-512 is available
// (about a 3x slowdown on the training GEMMs). OpenBLAS selects its kernel
// from OPENBLAS_CORETYPE inside an ELF constructor, so the variable must be
// in the environment before the process starts; when we detect the bad
// fallback we re-exec once with the override set.
inline void ensure_fast_blas(char** argv) {
#if defined(__linux__) && defined(__x86_64__)
    if (std::getenv("OPENBLAS_CORETYPE") != nullptr ||
        std::getenv("CHARTKIT_BLAS_REEXEC") != nullptr)
        return;
    const char* core = openblas_get_corename();
    static const char* pre_avx[] = {"Prescott", "Northwood", "Katmai", "Banias",
                                    "Atom",     "Core2",     "Penryn", "Nehalem"};
    bool weak = false;
    for (const char* name : pre_avx)
        weak = weak || (core != nullptr && std::strcmp(core, name) == 0);
    if (!weak)
        return;
    const char* target = nullptr;
    if (__builtin_cpu_supports("avx512f"))
        target = "SKYLAKEX";
    else if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
        target = "HASWELL";
    if (target == nullptr)
        return;
    setenv("OPENBLAS_CORETYPE", target, 1);
    setenv("CHARTKIT_BLAS_REEXEC", "1", 1);
    execv("/proc/self/exe", argv);
    // If exec fails we keep running on the slow kernel.
#else
    (void)argv;
#endif
}

} // namespace chartkit
