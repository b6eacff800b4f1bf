#pragma once

#include "cpmin/base.hpp"
#include "cpmin/differentials.hpp"
#include "cpmin/harmonic.hpp"
#include "cpmin/invariants.hpp"
#include "cpmin/io.hpp"
#include "cpmin/medial.hpp"
#include "cpmin/mesh.hpp"
#include "cpmin/minimal.hpp"
#include "cpmin/moebius.hpp"
#include "cpmin/packing.hpp"
