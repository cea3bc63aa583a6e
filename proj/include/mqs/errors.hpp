/**
 * Copyright 2026 The MQSVIS Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
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

namespace mqs {

/// Base class of every error raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Preselection threshold removes all probability mass at working precision.
class DegeneratePreselection : public Error {
public:
    using Error::Error;
};

/// A precomputed table does not reach an index the caller asked for.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Tile partial results do not cover the requested grid.
class MissingTile : public Error {
public:
    MissingTile(long x, long y, const std::string& what)
        : Error(what), x_(x), y_(y) {}
    long x() const noexcept { return x_; }
    long y() const noexcept { return y_; }

private:
    long x_;
    long y_;
};

/// File could not be read, written or parsed.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace mqs
