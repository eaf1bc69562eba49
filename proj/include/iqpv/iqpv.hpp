#pragma once

#include "iqpv/adversary.hpp"
#include "iqpv/errors.hpp"
#include "iqpv/gf2.hpp"
#include "iqpv/protocol.hpp"
#include "iqpv/rng.hpp"
#include "iqpv/simulator.hpp"
#include "iqpv/verifier.hpp"
#include "iqpv/xprogram.hpp"
