#pragma once

#include <contlogic/certificate.hpp>
#include <contlogic/error.hpp>
#include <contlogic/interp.hpp>
#include <contlogic/logic_core.hpp>
#include <contlogic/rational.hpp>
#include <contlogic/search.hpp>
#include <contlogic/semantics.hpp>
#include <contlogic/structure.hpp>
#include <contlogic/textio.hpp>
