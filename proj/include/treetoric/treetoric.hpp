#pragma once

#include "errors.hpp"
#include "groebner.hpp"
#include "interpolation.hpp"
#include "oracle.hpp"
#include "order.hpp"
#include "ring.hpp"
#include "span.hpp"
#include "statmodel.hpp"
#include "system.hpp"
#include "tfp.hpp"
#include "tree.hpp"
