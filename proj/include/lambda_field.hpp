// Copyright 2026 The Lambda-Field Authors
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

#ifndef LAMBDA_FIELD_LAMBDA_FIELD_HPP
#define LAMBDA_FIELD_LAMBDA_FIELD_HPP

#include "lambda_field/bayes_grid.hpp"
#include "lambda_field/geometry.hpp"
#include "lambda_field/intensity.hpp"
#include "lambda_field/io.hpp"
#include "lambda_field/lambda_grid.hpp"
#include "lambda_field/path_risk.hpp"
#include "lambda_field/planner.hpp"
#include "lambda_field/ray_trace.hpp"
#include "lambda_field/sensor.hpp"

#endif  // LAMBDA_FIELD_LAMBDA_FIELD_HPP
