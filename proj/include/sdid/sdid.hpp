// Copyright 2026 The sdid Authors
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

#include "sdid/condensation.hpp"
#include "sdid/diagram.hpp"
#include "sdid/diagram_io.hpp"
#include "sdid/errors.hpp"
#include "sdid/factor.hpp"
#include "sdid/graph.hpp"
#include "sdid/inference.hpp"
#include "sdid/mdp.hpp"
#include "sdid/oracle.hpp"
#include "sdid/transform.hpp"
#include "sdid/vpi.hpp"
