// Copyright 2026 The shuffledp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include "shuffledp/simd/kernels.hpp"

namespace shuffledp::simd {
namespace {

std::atomic<const detail::KernelTable*> g_table{nullptr};
std::atomic<Backend> g_backend{Backend::kAuto};

const detail::KernelTable* pick_auto() {
#if SHUFFLEDP_BUILD_AVX2
  const char* force = std::getenv("SHUFFLEDP_FORCE_SCALAR");
  const bool forced_scalar = force != nullptr && force[0] == '1';
  if (!forced_scalar && cpu_supports_avx2()) {
    return &detail::kAvx2Kernels;
  }
#endif
  return &detail::kScalarKernels;
}

const detail::KernelTable& table() {
  const detail::KernelTable* t = g_table.load(std::memory_order_acquire);
  if (t == nullptr) {
    t = pick_auto();
    g_table.store(t, std::memory_order_release);
  }
  return *t;
}

}  // namespace

bool cpu_supports_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

void set_backend(Backend backend) {
  switch (backend) {
    case Backend::kAuto:
      g_table.store(pick_auto(), std::memory_order_release);
      break;
    case Backend::kScalar:
      g_table.store(&detail::kScalarKernels, std::memory_order_release);
      break;
    case Backend::kAvx2:
#if SHUFFLEDP_BUILD_AVX2
      if (!cpu_supports_avx2()) {
        throw std::runtime_error("AVX2 requested but not supported by CPU");
      }
      g_table.store(&detail::kAvx2Kernels, std::memory_order_release);
      break;
#else
      throw std::runtime_error("AVX2 kernels not compiled into this build");
#endif
  }
  g_backend.store(backend, std::memory_order_release);
}

Backend active_backend() {
#if SHUFFLEDP_BUILD_AVX2
  if (&table() == &detail::kAvx2Kernels) return Backend::kAvx2;
#endif
  return Backend::kScalar;
}

std::string_view backend_name() {
  return active_backend() == Backend::kAvx2 ? "avx2" : "scalar";
}

double reduce_max(std::span<const double> x) { return table().reduce_max(x); }

double sum_exp_shifted(std::span<const double> x, double shift) {
  return table().sum_exp_shifted(x, shift);
}

double power_term_max(std::span<const double> log_p,
                      std::span<const double> log_q, double lambda) {
  if (log_p.size() != log_q.size()) {
    throw std::invalid_argument("power_term_max: length mismatch");
  }
  return table().power_term_max(log_p, log_q, lambda);
}

double power_term_sum_exp(std::span<const double> log_p,
                          std::span<const double> log_q, double lambda,
                          double shift) {
  if (log_p.size() != log_q.size()) {
    throw std::invalid_argument("power_term_sum_exp: length mismatch");
  }
  return table().power_term_sum_exp(log_p, log_q, lambda, shift);
}

double log_sum_exp(std::span<const double> x) {
  if (x.empty()) return -std::numeric_limits<double>::infinity();
  const double m = reduce_max(x);
  if (!std::isfinite(m)) return m;
  return m + std::log(sum_exp_shifted(x, m));
}

double log_power_sum(std::span<const double> log_p,
                     std::span<const double> log_q, double lambda) {
  if (log_p.size() != log_q.size()) {
    throw std::invalid_argument("log_power_sum: length mismatch");
  }
  if (log_p.empty()) return -std::numeric_limits<double>::infinity();
  const double m = power_term_max(log_p, log_q, lambda);
  if (!std::isfinite(m)) return m;
  return m + std::log(power_term_sum_exp(log_p, log_q, lambda, m));
}

}  // namespace shuffledp::simd
