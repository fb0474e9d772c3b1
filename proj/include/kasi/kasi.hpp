/*
 * Copyright 2026 The kasi Authors
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

#include "kasi/core.hpp"
#include "kasi/dijkstra.hpp"
#include "kasi/evaluate.hpp"
#include "kasi/gen.hpp"
#include "kasi/io.hpp"
#include "kasi/oracle.hpp"
#include "kasi/solver.hpp"
#include "kasi/vi.hpp"
#include "kasi/witness.hpp"
