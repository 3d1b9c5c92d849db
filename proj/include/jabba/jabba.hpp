#pragma once

// Joint symbolic aggregate approximation: partitional compression (fork),
// one shared digitization (join), per-series symbol streams.

#include "jabba/clustering.hpp"
#include "jabba/compression.hpp"
#include "jabba/core.hpp"
#include "jabba/digitization.hpp"
#include "jabba/inverse.hpp"
#include "jabba/io.hpp"
#include "jabba/metrics.hpp"
#include "jabba/parallel.hpp"

namespace jabba {

struct JabbaConfig {
    CompressionConfig compression;
    DigitizeConfig digitize;
    unsigned threads = 1;  // 0 = auto-detect
};

struct JabbaFit {
    CompressedBatch batch;
    SymbolicResult symbolic;
};

// The joint approximation: compress all segments (in parallel), digitize the
// concatenated pieces once, split the symbol stream back per segment.
inline JabbaFit jabba_fit(const Dataset& dataset, JabbaConfig cfg) {
    cfg.digitize.tol = cfg.compression.tol;
    JabbaFit fit;
    fit.batch = partitional_compress(dataset, cfg.compression, cfg.threads);
    fit.symbolic = digitize(fit.batch, cfg.digitize);
    return fit;
}

}  // namespace jabba
