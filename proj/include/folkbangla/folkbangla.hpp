#pragma once

#include "folkbangla/cli.hpp"
#include "folkbangla/corpus.hpp"
#include "folkbangla/embeddings.hpp"
#include "folkbangla/error.hpp"
#include "folkbangla/evaluation.hpp"
#include "folkbangla/pipeline.hpp"
#include "folkbangla/propp.hpp"
#include "folkbangla/subword.hpp"
#include "folkbangla/summarizer.hpp"
#include "folkbangla/tokenize.hpp"
#include "folkbangla/utf8.hpp"
#include "folkbangla/version.hpp"
