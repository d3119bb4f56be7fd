#pragma once

#include "nonrecip/error.hpp"
#include "nonrecip/model.hpp"
#include "nonrecip/steady_state.hpp"
#include "nonrecip/response.hpp"
#include "nonrecip/conditions.hpp"
#include "nonrecip/oracle.hpp"
