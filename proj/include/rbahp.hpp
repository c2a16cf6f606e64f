#pragma once

// Core library: hierarchy model, AHP engine and role ranking.
// The CLI (rbahp/cli.hpp) and HTTP service (rbahp/service.hpp) are separate
// headers because they pull in CLI11 and cpp-httplib.

#include "rbahp/ahp.hpp"
#include "rbahp/authorizer.hpp"
#include "rbahp/error.hpp"
#include "rbahp/role_graph.hpp"
#include "rbahp/token.hpp"
