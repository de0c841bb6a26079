#pragma once

#include "cskpa/errors.hpp"
#include "cskpa/log_count.hpp"
#include "cskpa/random.hpp"
#include "cskpa/keystream.hpp"
#include "cskpa/crypto.hpp"
#include "cskpa/ssp.hpp"
#include "cskpa/ssp_count.hpp"
#include "cskpa/ssp_enumerate.hpp"
#include "cskpa/ehrhart.hpp"
#include "cskpa/predictor.hpp"
#include "cskpa/recovery.hpp"
#include "cskpa/attack_lab.hpp"
#include "cskpa/protocols.hpp"
#include "cskpa/io.hpp"
