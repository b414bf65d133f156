// Copyright 2026 The BHW Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Umbrella header for the whole library.

#include "bhw/combinatorics.hpp"
#include "bhw/coupling.hpp"
#include "bhw/disorder.hpp"
#include "bhw/ed.hpp"
#include "bhw/errors.hpp"
#include "bhw/fs_stream.hpp"
#include "bhw/hermitian.hpp"
#include "bhw/io/config.hpp"
#include "bhw/io/table.hpp"
#include "bhw/model.hpp"
#include "bhw/parallel.hpp"
#include "bhw/qubit.hpp"
#include "bhw/random.hpp"
#include "bhw/stats.hpp"
#include "bhw/thermal.hpp"
#include "bhw/units.hpp"
#include "bhw/wheel.hpp"
