// Copyright 2026 The qsdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qsdp {

// Caller broke a documented precondition (non-Hermitian input, bad shape, ...).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public ContractViolation {
 public:
  using ContractViolation::ContractViolation;
};

// A scalar function was undefined or non-finite at some eigenvalue.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class IllConditionedThreshold : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A named precondition of a simulated subroutine failed.
class PreconditionError : public std::invalid_argument {
 public:
  PreconditionError(std::string name, const std::string& detail)
      : std::invalid_argument(name + ": " + detail), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

// An SDP instance failed validation; what() names the invariant.
class InvalidInstance : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace qsdp
