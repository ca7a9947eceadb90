// Copyright 2026 The nanoscout Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "nanoscout/common.hpp"
#include "nanoscout/vessel.hpp"
#include "nanoscout/flow.hpp"
#include "nanoscout/random.hpp"
#include "nanoscout/kinetics.hpp"
#include "nanoscout/release.hpp"
#include "nanoscout/cell_index.hpp"
#include "nanoscout/detection.hpp"
#include "nanoscout/engine.hpp"
#include "nanoscout/config.hpp"
#include "nanoscout/harness.hpp"
#include "nanoscout/io.hpp"
