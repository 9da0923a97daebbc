#pragma once

#include <map>
#include <string>

namespace dk::metrics {

// One structural readability feature: an occurrence rate per 100 tokens is
// squashed into [0,1]. Penalty features score 1 at rate 0 and fall as the
// construct appears; merit features rise toward 1 with saturation.
struct FeatureSpec {
    double weight = 1.0;
    double shape = 1.0;    // gain for penalties, saturation scale for merits
    bool penalty = true;
};

struct R2iWeights {
    std::string weights_id = "r2i-default-1";
    std::map<std::string, FeatureSpec> features;

    static R2iWeights defaults();
    static R2iWeights from_file(const std::string& path);
};

struct R2IScore {
    double value = 0.0;     // in [0,1]; exactly 0 when parsing fails
    bool parse_ok = false;
    std::map<std::string, double> feature_vector;  // normalized, in [0,1]
    std::string weights_id;
};

// Parses `gen_src` behind a synthesized header; a parse failure scores 0
// (the sample is counted, never dropped). Deterministic for fixed weights.
R2IScore r2i_score(const std::string& gen_src,
                   const R2iWeights& weights = R2iWeights::defaults());

} // namespace dk::metrics
