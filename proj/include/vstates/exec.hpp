#pragma once

#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace vstates {

// Every hot loop in this library runs through parallel_for so the serial
// reference path and the OpenMP path share the exact same per-index kernel.
// Results are bitwise identical between modes: each index accumulates
// independently and no reduction order changes.
enum class ExecMode { serial, openmp };

inline ExecMode default_exec_mode() {
#ifdef _OPENMP
  return ExecMode::openmp;
#else
  return ExecMode::serial;
#endif
}

inline int hardware_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// Exceptions thrown by the body are captured and rethrown after the loop
// (OpenMP regions must not leak exceptions).
template <class Body>
void parallel_for(int n, ExecMode mode, Body&& body) {
  if (mode == ExecMode::openmp) {
#ifdef _OPENMP
    std::exception_ptr first_error = nullptr;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
      try {
        body(i);
      } catch (...) {
#pragma omp critical(vstates_parallel_for_error)
        if (!first_error) first_error = std::current_exception();
      }
    }
    if (first_error) std::rethrow_exception(first_error);
    return;
#endif
  }
  for (int i = 0; i < n; ++i) body(i);
}

}  // namespace vstates
