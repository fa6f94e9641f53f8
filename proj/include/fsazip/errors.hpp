/**
 * Copyright 2026 the fsazip authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
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

namespace fsazip {

/// Base class for all fsazip errors.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed text input (bad line, bad field, unexpected weight, ...).
class parse_error : public error {
public:
    using error::error;
};

/// Malformed or truncated compressed input.
class corrupt_error : public error {
public:
    using error::error;
};

/// An internal consistency check failed; indicates a bug, not bad input.
class invariant_error : public error {
public:
    using error::error;
};

/// The exact algorithm was asked to run above its size cap.
class too_large_error : public error {
public:
    using error::error;
};

}  // namespace fsazip
