/*
 * SPDX-FileCopyrightText: Copyright 2026 The ascon-sca authors
 * SPDX-License-Identifier: Apache-2.0
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

namespace sca {

/// Broad failure classes. The command line tool maps these onto exit codes.
enum class ErrorKind {
    Config,    ///< invalid parameters or configuration
    Data,      ///< unreadable, malformed or inconsistent input data
    Numerical, ///< non-finite values, degenerate estimators, divergence
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

inline Error config_error(const std::string &what) {
    return Error(ErrorKind::Config, what);
}
inline Error data_error(const std::string &what) {
    return Error(ErrorKind::Data, what);
}
inline Error numerical_error(const std::string &what) {
    return Error(ErrorKind::Numerical, what);
}

} // namespace sca
