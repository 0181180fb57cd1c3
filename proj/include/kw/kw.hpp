#pragma once

#include <kw/error.hpp>
#include <kw/integer.hpp>
#include <kw/algebra.hpp>
#include <kw/rankone.hpp>
#include <kw/subset.hpp>
#include <kw/combinat.hpp>
#include <kw/extension.hpp>
#include <kw/ghat.hpp>
#include <kw/weights.hpp>
