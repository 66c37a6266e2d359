#pragma once

#include "cbt/bdsp.hpp"
#include "cbt/delaunay.hpp"
#include "cbt/error.hpp"
#include "cbt/evaluation.hpp"
#include "cbt/formats.hpp"
#include "cbt/geometry.hpp"
#include "cbt/graph.hpp"
#include "cbt/ingest.hpp"
#include "cbt/svg.hpp"
#include "cbt/synth.hpp"
#include "cbt/tracker.hpp"
