/*
 * Copyright 2026 The slasim Authors
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

#include "slasim/config.hpp"
#include "slasim/harness.hpp"
#include "slasim/metrics.hpp"
#include "slasim/model.hpp"
#include "slasim/policy.hpp"
#include "slasim/presets.hpp"
#include "slasim/queueing.hpp"
#include "slasim/rng.hpp"
#include "slasim/sim.hpp"
