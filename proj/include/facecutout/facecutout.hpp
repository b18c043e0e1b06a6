#pragma once

#include "facecutout/clustering.hpp"
#include "facecutout/cutout.hpp"
#include "facecutout/dataset.hpp"
#include "facecutout/error.hpp"
#include "facecutout/geometry.hpp"
#include "facecutout/image.hpp"
#include "facecutout/io.hpp"
#include "facecutout/metrics.hpp"
#include "facecutout/pipeline.hpp"
#include "facecutout/rng.hpp"
#include "facecutout/simmask.hpp"
#include "facecutout/split.hpp"
