#include "malkit/harness/labelmap.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace malkit::harness {

namespace {

int parse_valence(const std::string& v, const std::string& emotion) {
    if (v == "pos") return 1;
    if (v == "neg") return -1;
    throw std::invalid_argument("labelmap entry '" + emotion +
                                "': valence must be pos or neg, got '" + v +
                                "'");
}

int parse_arousal(const std::string& v, const std::string& emotion) {
    if (v == "high") return 1;
    if (v == "low") return -1;
    throw std::invalid_argument("labelmap entry '" + emotion +
                                "': arousal must be high or low, got '" + v +
                                "'");
}

}  // namespace

LabelMap::Quadrant LabelMap::resolve(const std::string& emotion) const {
    auto it = table.find(emotion);
    if (it == table.end())
        throw std::invalid_argument("unmapped emotion: '" + emotion + "'");
    return it->second;
}

LabelMap load_labelmap(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open labelmap: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("labelmap " + path +
                                    " is not valid JSON: " + e.what());
    }
    if (!doc.is_object())
        throw std::invalid_argument("labelmap " + path +
                                    " must be a JSON object");
    LabelMap map;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string& emotion = it.key();
        if (!it.value().is_object() || !it.value().contains("valence") ||
            !it.value().contains("arousal"))
            throw std::invalid_argument(
                "labelmap entry '" + emotion +
                "' needs both 'valence' and 'arousal' keys");
        LabelMap::Quadrant q;
        q.valence = parse_valence(it.value()["valence"].get<std::string>(),
                                  emotion);
        q.arousal = parse_arousal(it.value()["arousal"].get<std::string>(),
                                  emotion);
        map.table[emotion] = q;
    }
    if (map.table.empty())
        throw std::invalid_argument("labelmap " + path + " is empty");
    return map;
}

LabelMap default_labelmap() {
    LabelMap map;
    auto put = [&](const char* name, int v, int a) {
        map.table[name] = {v, a};
    };
    // four-corner anchors
    put("joy", 1, 1);
    put("anger", -1, 1);
    put("sadness", -1, -1);
    put("tenderness", 1, -1);
    // frequent extras; the quadrant placement of several of these is a
    // convention, not a universal truth - override via JSON when it matters
    put("happiness", 1, 1);
    put("surprise", 1, 1);
    put("fear", -1, 1);
    put("disgust", -1, 1);
    put("anxiety", -1, 1);
    put("boredom", -1, -1);
    put("calm", 1, -1);
    put("neutral", 1, -1);
    return map;
}

std::string quadrant_emotion(int valence, int arousal) {
    if (valence == 1 && arousal == 1) return "joy";
    if (valence == -1 && arousal == 1) return "anger";
    if (valence == -1 && arousal == -1) return "sadness";
    if (valence == 1 && arousal == -1) return "tenderness";
    throw std::invalid_argument("quadrant labels must be -1 or +1");
}

}  // namespace malkit::harness
