#pragma once

#include "opball/ball.hpp"
#include "opball/cmat.hpp"
#include "opball/config.hpp"
#include "opball/density.hpp"
#include "opball/error.hpp"
#include "opball/identities.hpp"
#include "opball/matkernel.hpp"
#include "opball/random.hpp"
#include "opball/symmetry.hpp"
#include "opball/transform.hpp"
