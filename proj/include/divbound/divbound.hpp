#pragma once

#include "divbound/error.hpp"
#include "divbound/summation.hpp"
#include "divbound/simplex.hpp"
#include "divbound/io.hpp"
#include "divbound/kernels.hpp"
#include "divbound/measures.hpp"
#include "divbound/families.hpp"
#include "divbound/generators.hpp"
#include "divbound/bounds.hpp"
#include "divbound/corollaries.hpp"
#include "divbound/verify.hpp"
