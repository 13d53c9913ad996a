// Copyright 2026 The Aloha Stability Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ALOHA_ERRORS_HPP_
#define ALOHA_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace aloha {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// Raised when an unsaturated coordinate of p is zero inside a product term.
class PoleError : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class NoSteadyStateFound : public Error {
 public:
  using Error::Error;
};

class NoFeasiblePoint : public Error {
 public:
  NoFeasiblePoint(const std::string& what, double best_violation)
      : Error(what), best_violation_(best_violation) {}
  double best_violation() const noexcept { return best_violation_; }

 private:
  double best_violation_;
};

class NoUnsaturatedPoint : public Error {
 public:
  using Error::Error;
};

class EmptyRegion : public Error {
 public:
  using Error::Error;
};

class EmptyTopology : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Topology invariant violations and file/schema problems.
class TopologyError : public Error {
 public:
  using Error::Error;
};

}  // namespace aloha

#endif  // ALOHA_ERRORS_HPP_
