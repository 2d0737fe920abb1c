#pragma once

#include "pentaks/constants.hpp"
#include "pentaks/errors.hpp"
#include "pentaks/json_io.hpp"
#include "pentaks/magical.hpp"
#include "pentaks/optimize.hpp"
#include "pentaks/orthograph.hpp"
#include "pentaks/paradoxes.hpp"
#include "pentaks/parallel.hpp"
#include "pentaks/pentagram.hpp"
#include "pentaks/pentagram3.hpp"
#include "pentaks/pentagram4.hpp"
#include "pentaks/random.hpp"
#include "pentaks/spectral.hpp"
