#pragma once

#include "wps/bundles.hpp"
#include "wps/gmodule.hpp"
#include "wps/groebner.hpp"
#include "wps/hom.hpp"
#include "wps/quotient.hpp"
#include "wps/resolution.hpp"
#include "wps/ring.hpp"
#include "wps/scalar.hpp"
#include "wps/sheafops.hpp"
