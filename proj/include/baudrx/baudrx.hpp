#pragma once

// Behavioral multi-lane baud-rate CDR simulator: umbrella header.

#include "baudrx/adapt.hpp"
#include "baudrx/afe.hpp"
#include "baudrx/ctle.hpp"
#include "baudrx/eca.hpp"
#include "baudrx/fdiv.hpp"
#include "baudrx/ilcm.hpp"
#include "baudrx/integral.hpp"
#include "baudrx/lane.hpp"
#include "baudrx/metrics/bathtub.hpp"
#include "baudrx/metrics/eye.hpp"
#include "baudrx/metrics/fft.hpp"
#include "baudrx/metrics/jtol.hpp"
#include "baudrx/metrics/spectrum.hpp"
#include "baudrx/metrics/vem.hpp"
#include "baudrx/mmpd.hpp"
#include "baudrx/pi.hpp"
#include "baudrx/prbs.hpp"
#include "baudrx/rng.hpp"
#include "baudrx/sbr.hpp"
#include "baudrx/sim/config.hpp"
#include "baudrx/sim/experiments.hpp"
#include "baudrx/sim/report.hpp"
#include "baudrx/sim/run.hpp"
#include "baudrx/waveform.hpp"
