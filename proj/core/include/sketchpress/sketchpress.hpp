#pragma once

#include <sketchpress/algorithm.hpp>
#include <sketchpress/analysis.hpp>
#include <sketchpress/archive.hpp>
#include <sketchpress/bounds.hpp>
#include <sketchpress/codec.hpp>
#include <sketchpress/compress.hpp>
#include <sketchpress/datagen.hpp>
#include <sketchpress/error.hpp>
#include <sketchpress/linalg.hpp>
#include <sketchpress/power_iter.hpp>
#include <sketchpress/random.hpp>
#include <sketchpress/row_id.hpp>
#include <sketchpress/sketch.hpp>
#include <sketchpress/snapshot_io.hpp>
#include <sketchpress/svd_sketch.hpp>
#include <sketchpress/types.hpp>
