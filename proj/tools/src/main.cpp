// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include "mlgcl_cli/cli.hpp"

int main(int argc, char** argv) {
#if defined(__GLIBC__)
  // The N x N loss buffers are reallocated every epoch. Served from mmap they
  // are page-faulted in afresh each time; keeping them on the heap avoids that.
  mallopt(M_MMAP_THRESHOLD, 1 << 30);
  mallopt(M_TRIM_THRESHOLD, 1 << 30);
#endif
  return mlgcl::cli::run(argc, argv, std::cout, std::cerr);
}
