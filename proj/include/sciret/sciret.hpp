#pragma once

#include "sciret/analytics.hpp"
#include "sciret/bursts.hpp"
#include "sciret/corpus.hpp"
#include "sciret/dates.hpp"
#include "sciret/dumps.hpp"
#include "sciret/keyphrase.hpp"
#include "sciret/pagerank.hpp"
#include "sciret/pipeline.hpp"
#include "sciret/platform.hpp"
#include "sciret/retention.hpp"
#include "sciret/stats.hpp"
#include "sciret/synth.hpp"
#include "sciret/text.hpp"
