// SPDX-License-Identifier: Apache-2.0
#pragma once

// Umbrella header pulling in the whole library.

#include "gweval/augment.hpp"
#include "gweval/config.hpp"
#include "gweval/csv.hpp"
#include "gweval/errors.hpp"
#include "gweval/evaluate.hpp"
#include "gweval/fusion.hpp"
#include "gweval/geometry.hpp"
#include "gweval/image_io.hpp"
#include "gweval/ingest.hpp"
#include "gweval/matching.hpp"
#include "gweval/metrics.hpp"
#include "gweval/model.hpp"
#include "gweval/parallel.hpp"
#include "gweval/ranking.hpp"
#include "gweval/rational.hpp"
#include "gweval/report.hpp"
#include "gweval/rng.hpp"
#include "gweval/sha256.hpp"
#include "gweval/stats.hpp"
#include "gweval/version.hpp"
