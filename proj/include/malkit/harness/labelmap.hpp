#ifndef MALKIT_HARNESS_LABELMAP_HPP
#define MALKIT_HARNESS_LABELMAP_HPP

#include <map>
#include <string>

namespace malkit::harness {

// Emotion-name lookup onto the valence/arousal quadrants.
// valence: pos=+1 neg=-1; arousal: high=+1 low=-1.
struct LabelMap {
    struct Quadrant {
        int valence = 0;
        int arousal = 0;
    };
    std::map<std::string, Quadrant> table;

    // Throws naming the emotion when it is not in the table.
    Quadrant resolve(const std::string& emotion) const;
};

// JSON file of the form
//   { "anger": {"valence": "neg", "arousal": "high"}, ... }
LabelMap load_labelmap(const std::string& path);

// Built-in quadrant table for the common four-corner inventories. The
// placements of several emotions are conventional rather than settled;
// pass a JSON file to override.
LabelMap default_labelmap();

// Name of the conventional emotion occupying a quadrant; used when
// synthesizing label files so they round-trip through default_labelmap().
std::string quadrant_emotion(int valence, int arousal);

}  // namespace malkit::harness

#endif  // MALKIT_HARNESS_LABELMAP_HPP
