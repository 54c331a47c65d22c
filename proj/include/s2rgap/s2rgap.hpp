#pragma once

#include "s2rgap/error.hpp"
#include "s2rgap/tensor.hpp"
#include "s2rgap/histogram.hpp"
#include "s2rgap/profile.hpp"
#include "s2rgap/fid.hpp"
#include "s2rgap/counter_hash.hpp"
#include "s2rgap/reference_encoder.hpp"
#include "s2rgap/srgt.hpp"
#include "s2rgap/pnm.hpp"
#include "s2rgap/manifest.hpp"
#include "s2rgap/report.hpp"
#include "s2rgap/version.hpp"
