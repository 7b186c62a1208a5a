/*
 * Copyright (C) 2026 The hastings-lab authors
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

#ifndef HASTINGS_HASTINGS_HPP
#define HASTINGS_HASTINGS_HPP

#include "hastings/acceptance.hpp"
#include "hastings/diagnostics.hpp"
#include "hastings/errors.hpp"
#include "hastings/mappings.hpp"
#include "hastings/model.hpp"
#include "hastings/oracle.hpp"
#include "hastings/rng.hpp"
#include "hastings/samplers.hpp"
#include "hastings/symmetric_fn.hpp"

#endif // HASTINGS_HASTINGS_HPP
