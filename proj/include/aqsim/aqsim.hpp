// Copyright 2026 The aqsim Authors
// SPDX-License-Identifier: Apache-2.0
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

#include "aqsim/cloud/cloud.hpp"
#include "aqsim/mote/adc.hpp"
#include "aqsim/mote/mote.hpp"
#include "aqsim/mote/process.hpp"
#include "aqsim/mote/sample.hpp"
#include "aqsim/mote/signal_model.hpp"
#include "aqsim/net/datagram.hpp"
#include "aqsim/net/lowpan.hpp"
#include "aqsim/net/radio.hpp"
#include "aqsim/net/rpl.hpp"
#include "aqsim/net/rpl_types.hpp"
#include "aqsim/net/stack.hpp"
#include "aqsim/node/border_router.hpp"
#include "aqsim/node/gateway.hpp"
#include "aqsim/node/journal.hpp"
#include "aqsim/scenario/config.hpp"
#include "aqsim/scenario/metrics.hpp"
#include "aqsim/scenario/runner.hpp"
#include "aqsim/serial/framing.hpp"
#include "aqsim/serial/serial_line.hpp"
#include "aqsim/serial/slip.hpp"
#include "aqsim/sim/engine.hpp"
#include "aqsim/sim/rng.hpp"
#include "aqsim/sim/time.hpp"
#include "aqsim/util/bytes.hpp"
