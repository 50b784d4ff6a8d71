#pragma once

#include "fgdual/automorphism.hpp"
#include "fgdual/cylinders.hpp"
#include "fgdual/dual.hpp"
#include "fgdual/errors.hpp"
#include "fgdual/format.hpp"
#include "fgdual/growth.hpp"
#include "fgdual/oracle.hpp"
#include "fgdual/words.hpp"
