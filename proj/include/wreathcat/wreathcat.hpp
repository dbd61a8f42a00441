#pragma once

#include "wreathcat/algebra.hpp"
#include "wreathcat/errors.hpp"
#include "wreathcat/fusion_ring.hpp"
#include "wreathcat/graph.hpp"
#include "wreathcat/io.hpp"
#include "wreathcat/operators.hpp"
#include "wreathcat/partition.hpp"
#include "wreathcat/partition_map.hpp"
#include "wreathcat/rational.hpp"
#include "wreathcat/wreath.hpp"
