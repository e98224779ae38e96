#pragma once

#include "elimgame/cultures.hpp"
#include "elimgame/error.hpp"
#include "elimgame/experiment.hpp"
#include "elimgame/extremal.hpp"
#include "elimgame/play.hpp"
#include "elimgame/profile.hpp"
#include "elimgame/ratio.hpp"
#include "elimgame/stats.hpp"
#include "elimgame/welfare.hpp"
