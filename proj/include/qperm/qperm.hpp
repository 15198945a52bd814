#pragma once

#include "qperm/bounds.hpp"
#include "qperm/errors.hpp"
#include "qperm/exact.hpp"
#include "qperm/instances.hpp"
#include "qperm/pairs.hpp"
#include "qperm/permgroup.hpp"
#include "qperm/permutation.hpp"
#include "qperm/qsim.hpp"
#include "qperm/rng.hpp"
#include "qperm/sponge.hpp"
#include "qperm/verify.hpp"
