#pragma once

#include "covlift/error.hpp"
#include "covlift/perm.hpp"
#include "covlift/graph.hpp"
#include "covlift/zpk.hpp"
#include "covlift/homology.hpp"
#include "covlift/fp_solve.hpp"
#include "covlift/search.hpp"
#include "covlift/covering.hpp"
#include "covlift/oracle.hpp"
#include "covlift/petersen.hpp"
