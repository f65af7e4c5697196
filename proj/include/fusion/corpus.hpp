#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "fusion/ring.hpp"

namespace fusion {

// FRT v1 text format:
//   frt 1
//   rank m
//   dual p1 .. pm        (1-based involution)
//   matrix i             (m times, followed by m rows of m entries)
// '#' starts a comment. Integer entries load in exact mode, decimals in float mode.
FusionData parse_fusion_ring(const std::string& text);
std::string serialize_fusion_ring(const FusionData& fd);

nlohmann::json to_json(const FusionData& fd);
FusionData from_json(const nlohmann::json& j);

struct CorpusEntry {
    std::string id;
    FusionData fd;
    std::string note;
    std::string type;  // empty for non-integral rings
    std::optional<bool> simple;
    std::optional<bool> frobenius_type;
    std::optional<bool> schur;
    std::string group;
    bool simple_frobenius_list = false;  // one of the 34 classified rings
    std::string text;                    // canonical FRT text
};

FusionData cyclic_group_ring(int n);

// embedded appendix rings followed by Z/n for n = 1..12
const std::vector<CorpusEntry>& corpus();
const CorpusEntry* find_entry(const std::string& id);

// Path to an FRT or JSON file, a corpus id, or <id>.frt under $FUSIONFORGE_CORPUS_DIR.
FusionData load_ring(const std::string& spec);

}  // namespace fusion
