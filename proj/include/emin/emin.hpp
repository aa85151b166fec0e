#pragma once

#include "emin/interval.hpp"
#include "emin/rational.hpp"
#include "emin/roots.hpp"
#include "emin/number_field.hpp"
#include "emin/box.hpp"
#include "emin/unit_lattice.hpp"
#include "emin/quadratic_units.hpp"
#include "emin/minima.hpp"
#include "emin/spectrum.hpp"
#include "emin/cm.hpp"
#include "emin/oracle.hpp"
#include "emin/field_io.hpp"
