#pragma once

#include "zerosum/arith.hpp"
#include "zerosum/group.hpp"
#include "zerosum/sequence.hpp"
#include "zerosum/engine.hpp"
#include "zerosum/records.hpp"
#include "zerosum/bounds.hpp"
#include "zerosum/invariants.hpp"
#include "zerosum/polynomial.hpp"
#include "zerosum/extractor.hpp"
#include "zerosum/cache.hpp"
