#pragma once

#include "ijack/bounds.hpp"
#include "ijack/combinatorics.hpp"
#include "ijack/conditional.hpp"
#include "ijack/errors.hpp"
#include "ijack/hoeffding.hpp"
#include "ijack/index_set.hpp"
#include "ijack/jackknife.hpp"
#include "ijack/mc.hpp"
#include "ijack/model.hpp"
#include "ijack/residuals.hpp"
#include "ijack/rng.hpp"
#include "ijack/version.hpp"
