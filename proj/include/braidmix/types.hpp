// Copyright 2026 The braidmix Authors
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

#ifndef BRAIDMIX_TYPES_HPP_
#define BRAIDMIX_TYPES_HPP_

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace braidmix {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

using Vec2 = Vector2<double>;
using Mat2 = Matrix2<double>;
using Mat3 = Matrix3<double>;

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed braid text or scenario input.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A precondition of an operation does not hold (bad sizes, non-positive
// lengths, Restriction-violating step, infeasible safety margin ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Numerical breakdown: singular systems, points mapped to infinity,
// non-finite samples.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace braidmix

#endif  // BRAIDMIX_TYPES_HPP_
