// Copyright 2026 The specsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "engine.hpp"
#include "experiments.hpp"
#include "geth_adapter.hpp"
#include "lock_table.hpp"
#include "manifest.hpp"
#include "metrics.hpp"
#include "ratio.hpp"
#include "report_io.hpp"
#include "trace_io.hpp"
#include "trace_model.hpp"
#include "workload.hpp"
