// Copyright (c) 2026 the ascoli authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace ascoli {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ascoli
