#pragma once

#include "acsim/word.hpp"
#include "acsim/isa.hpp"
#include "acsim/assembler.hpp"
#include "acsim/digest.hpp"
#include "acsim/machine.hpp"
#include "acsim/json_io.hpp"
#include "acsim/narration.hpp"
#include "acsim/minihl.hpp"
#include "acsim/translator.hpp"
#include "acsim/exercises.hpp"
#include "acsim/session.hpp"
