/*
 * Copyright 2026 The rankfair Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace rankfair {

/// Base class of every failure thrown by this library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or configuration: bad split sizes, out-of-range
/// thresholds, malformed config files, broken call preconditions.
class config_error : public error {
 public:
  using error::error;
};

/// Input data that violates a dataset or record invariant. Messages carry a
/// locator (file:line, image_id=..., identity_id=...) whenever one exists.
class data_error : public error {
 public:
  using error::error;
};

/// Filesystem and low-level parse failures.
class io_error : public error {
 public:
  using error::error;
};

}  // namespace rankfair
