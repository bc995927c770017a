#pragma once

#include "orbichow/arith.hpp"
#include "orbichow/matrix.hpp"
#include "orbichow/abelian.hpp"
#include "orbichow/lp.hpp"
#include "orbichow/fan.hpp"
#include "orbichow/stacky.hpp"
#include "orbichow/graded.hpp"
#include "orbichow/chow.hpp"
#include "orbichow/lawrence.hpp"
#include "orbichow/hypertoric.hpp"
#include "orbichow/iso.hpp"
#include "orbichow/json_io.hpp"
