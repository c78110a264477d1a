#pragma once

#include <cstdint>

namespace beep {

// One action per node per round: beep, listen, or stay idle. An idle node's
// receiver is off, so unlike a listener it observes nothing.
enum class Action : uint8_t { Beep = 0, Listen = 1, Idle = 2 };

// What a node perceives at the end of a round. Listeners get HeardBeep iff at
// least one neighbor beeped (collisions are invisible); beepers and idle
// nodes get Nothing.
enum class Observation : uint8_t { Nothing = 0, Silence = 1, HeardBeep = 2 };

inline char action_char(Action a) {
    switch (a) {
        case Action::Beep: return 'B';
        case Action::Listen: return 'L';
        case Action::Idle: return 'I';
    }
    return '?';
}

inline bool heard(Observation o) { return o == Observation::HeardBeep; }

}  // namespace beep
