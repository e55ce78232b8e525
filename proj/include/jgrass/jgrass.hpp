#ifndef JGRASS_JGRASS_HPP
#define JGRASS_JGRASS_HPP

#include "jgrass/counts.hpp"
#include "jgrass/eig.hpp"
#include "jgrass/errors.hpp"
#include "jgrass/experiments.hpp"
#include "jgrass/intersection.hpp"
#include "jgrass/matrix.hpp"
#include "jgrass/plane.hpp"
#include "jgrass/quaternion.hpp"
#include "jgrass/rng.hpp"
#include "jgrass/structures.hpp"
#include "jgrass/sylvester.hpp"

#endif  // JGRASS_JGRASS_HPP
