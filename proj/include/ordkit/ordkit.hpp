#pragma once

#include "ordkit/error.hpp"
#include "ordkit/subset.hpp"
#include "ordkit/poset.hpp"
#include "ordkit/report.hpp"
#include "ordkit/secpsc.hpp"
#include "ordkit/congruence.hpp"
#include "ordkit/completion.hpp"
#include "ordkit/ordinal_sum.hpp"
#include "ordkit/search.hpp"
#include "ordkit/io.hpp"
