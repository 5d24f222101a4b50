#pragma once

#include "finqm/errors.hpp"
#include "finqm/exactnum.hpp"
#include "finqm/weyl_lattice.hpp"
#include "finqm/repmod.hpp"
#include "finqm/morphism.hpp"
#include "finqm/transform.hpp"
#include "finqm/dirac.hpp"
