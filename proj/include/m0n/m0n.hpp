#pragma once

#include "m0n/basis.hpp"
#include "m0n/cohft.hpp"
#include "m0n/errors.hpp"
#include "m0n/intersection.hpp"
#include "m0n/keel_ring.hpp"
#include "m0n/linalg.hpp"
#include "m0n/monomial.hpp"
#include "m0n/rational.hpp"
#include "m0n/subset.hpp"
#include "m0n/trees.hpp"
#include "m0n/verify.hpp"
