#pragma once

#include "chordroot/error.hpp"
#include "chordroot/pitch.hpp"
#include "chordroot/score.hpp"
#include "chordroot/eventlist.hpp"
#include "chordroot/musicxml.hpp"
#include "chordroot/chordify.hpp"
#include "chordroot/roots.hpp"
#include "chordroot/context.hpp"
#include "chordroot/treelearn.hpp"
#include "chordroot/report.hpp"
