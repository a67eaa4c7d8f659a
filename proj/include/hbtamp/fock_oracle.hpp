#pragma once

#include "hbtamp/fock_space.hpp"
#include "hbtamp/hbt_oracle.hpp"
#include "hbtamp/operator_algebra.hpp"
#include "hbtamp/wick.hpp"
