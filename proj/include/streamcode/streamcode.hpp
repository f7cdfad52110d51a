#ifndef STREAMCODE_STREAMCODE_HPP
#define STREAMCODE_STREAMCODE_HPP

#include "streamcode/auditor.hpp"
#include "streamcode/channels.hpp"
#include "streamcode/code_spec.hpp"
#include "streamcode/code_spec_json.hpp"
#include "streamcode/column_metrics.hpp"
#include "streamcode/constructions.hpp"
#include "streamcode/field.hpp"
#include "streamcode/matrix.hpp"
#include "streamcode/random.hpp"
#include "streamcode/simulation.hpp"
#include "streamcode/stream_codec.hpp"

#endif  // STREAMCODE_STREAMCODE_HPP
