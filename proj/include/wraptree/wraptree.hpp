#pragma once

#include "wraptree/aabb.hpp"
#include "wraptree/bench.hpp"
#include "wraptree/boundary.hpp"
#include "wraptree/diagnostics.hpp"
#include "wraptree/generate.hpp"
#include "wraptree/oracle.hpp"
#include "wraptree/rtree.hpp"
#include "wraptree/serialize.hpp"
#include "wraptree/svg.hpp"
#include "wraptree/vector.hpp"
