/*
 * Copyright 2026 The gofbayes Authors
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

#ifndef GOFBAYES_SPECIAL_FUNCTIONS_HPP_
#define GOFBAYES_SPECIAL_FUNCTIONS_HPP_

namespace gofbayes {

// log Gamma(x) for x > 0, evaluated with a Lanczos approximation carried in
// extended precision. Throws std::domain_error for non-positive or
// non-finite arguments.
double ln_gamma_fn(double x);

// Digamma psi(x) for x > 0, via upward recurrence into the asymptotic
// regime. Throws std::domain_error for non-positive arguments.
double digamma(double x);

// Regularized lower incomplete gamma P(a, x) for a > 0, x >= 0.
// Series / continued-fraction split, quadrature path for large a.
double reg_inc_gamma(double a, double x);

// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
double reg_inc_beta(double a, double b, double x);

}  // namespace gofbayes

#endif  // GOFBAYES_SPECIAL_FUNCTIONS_HPP_
