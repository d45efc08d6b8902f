// Copyright 2026 The dgeofence Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace geofence {

enum class ErrorKind {
    invalid_argument,  // bad configuration or precondition violation
    parse,             // malformed input data
    io,                // unreadable stream / file
    not_found,
    conflict,          // resource exists but is not ready
    infeasible,        // constraints cannot be satisfied
};

std::string_view to_string(ErrorKind kind);

/// Library-wide exception. The kind drives CLI exit codes and HTTP statuses.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, const std::string& what) {
    if (!cond) fail(ErrorKind::invalid_argument, what);
}

}  // namespace geofence
