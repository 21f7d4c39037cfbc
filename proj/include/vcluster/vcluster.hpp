// Copyright 2026 The vcluster Authors
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

// Umbrella header: the whole library except the CLI layer.

#pragma once

#include "vcluster/autoscaler/autoscaler.hpp"
#include "vcluster/config/loaders.hpp"
#include "vcluster/config/text_format.hpp"
#include "vcluster/core/cluster.hpp"
#include "vcluster/core/error.hpp"
#include "vcluster/core/events.hpp"
#include "vcluster/core/time.hpp"
#include "vcluster/core/types.hpp"
#include "vcluster/core/usage.hpp"
#include "vcluster/hpl/command.hpp"
#include "vcluster/hpl/efficiency.hpp"
#include "vcluster/hpl/input.hpp"
#include "vcluster/hpl/output.hpp"
#include "vcluster/provider/example_profiles.hpp"
#include "vcluster/provider/provider.hpp"
#include "vcluster/provider/sim_provider.hpp"
#include "vcluster/scheduler/queue_state.hpp"
#include "vcluster/scheduler/scheduler.hpp"
#include "vcluster/sim/report.hpp"
#include "vcluster/sim/simulation.hpp"
#include "vcluster/sim/trace.hpp"
#include "vcluster/store/derivation.hpp"
#include "vcluster/store/digest.hpp"
#include "vcluster/store/image.hpp"
#include "vcluster/store/mpi.hpp"
#include "vcluster/store/store.hpp"
