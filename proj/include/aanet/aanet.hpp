#pragma once

#include "aanet/core.hpp"
#include "aanet/edmoga.hpp"
#include "aanet/flightdata.hpp"
#include "aanet/geo.hpp"
#include "aanet/linkmodel.hpp"
#include "aanet/oracle.hpp"
#include "aanet/pathobjectives.hpp"
#include "aanet/simharness.hpp"
