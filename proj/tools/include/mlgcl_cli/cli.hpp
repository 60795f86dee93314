// Copyright 2026 The MLGCL Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

namespace mlgcl::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kCompute = 2, kGradcheck = 3 };

// Entry point of the `mlgcl` binary; writes normal output to `out` and
// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mlgcl::cli
