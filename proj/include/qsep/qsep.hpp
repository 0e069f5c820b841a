#pragma once

#include "qsep/adversary.hpp"
#include "qsep/detect/brute_force.hpp"
#include "qsep/detect/claw.hpp"
#include "qsep/detect/collision.hpp"
#include "qsep/detect/common.hpp"
#include "qsep/detect/fixedpoint.hpp"
#include "qsep/detect/simple.hpp"
#include "qsep/detect/star.hpp"
#include "qsep/gen/fixedpoint.hpp"
#include "qsep/gen/hspec.hpp"
#include "qsep/gen/multiscale.hpp"
#include "qsep/gen/scales.hpp"
#include "qsep/gen/star.hpp"
#include "qsep/harness/exact.hpp"
#include "qsep/harness/online.hpp"
#include "qsep/harness/trials.hpp"
#include "qsep/harness/verify.hpp"
#include "qsep/instance.hpp"
#include "qsep/io/json_io.hpp"
#include "qsep/io/report.hpp"
#include "qsep/oracle.hpp"
#include "qsep/primes.hpp"
#include "qsep/rng.hpp"
