#include "beep/primitives.hpp"

#include <algorithm>
#include <stdexcept>

namespace beep {

namespace {
void flag(std::vector<std::string>& flags, int round, const char* what) {
    flags.push_back("round " + std::to_string(round) + ": " + what);
}
}  // namespace

ProgramCoro beep_wave_broadcast(const BeepWaveSpec& spec, BeepWaveResult& out) {
    if (spec.layer < 0 || spec.layer > spec.d_max)
        throw std::invalid_argument("beep_wave_broadcast: layer outside [0, d_max]");
    if (spec.layer == 0 && static_cast<int>(spec.message.size()) != spec.length)
        throw std::invalid_argument("beep_wave_broadcast: source message length mismatch");

    const int total = 3 * (spec.length + spec.d_max);
    out.decoded.assign(spec.length, 0);
    const int delta = spec.layer;

    if (delta == 0) {
        out.decoded = spec.message;
        int round = 0;
        for (int w = 1; w <= spec.length; ++w) {
            // beep the wave, let layer 1 relay it, then check for strays
            ++round;
            if (spec.message[w - 1]) {
                (void)(co_yield Action::Beep);
            } else {
                if (heard(co_yield Action::Listen)) flag(out.flags, round, "beep in a silent wave");
            }
            ++round;
            (void)(co_yield Action::Idle);
            ++round;
            if (heard(co_yield Action::Listen)) flag(out.flags, round, "beep outside relay slot");
        }
        while (round < total) {
            ++round;
            if (heard(co_yield Action::Listen)) flag(out.flags, round, "beep after last wave");
        }
        co_return;
    }

    int round = 0;
    int w = 1;
    while (round < total) {
        const int slot = 3 * (w - 1) + delta;  // wave w front at this layer
        ++round;
        if (w <= spec.length && round == slot) {
            bool bit = heard(co_yield Action::Listen);
            out.decoded[w - 1] = bit;
            ++round;
            if (bit) {
                (void)(co_yield Action::Beep);
            } else {
                if (heard(co_yield Action::Listen))
                    flag(out.flags, round, "beep in relay slot of a silent wave");
            }
            ++round;
            (void)(co_yield Action::Idle);  // neighbors above relay now
            ++w;
        } else {
            if (heard(co_yield Action::Listen)) flag(out.flags, round, "beep outside listening slot");
        }
    }
    co_return;
}

ProgramCoro reverse_beep_wave(const ReverseWaveSpec& spec, ReverseWaveResult& out) {
    if (spec.layer < 0) throw std::invalid_argument("reverse_beep_wave: negative layer");
    const int beep_off = TripletPhase::beep_offset(spec.layer);
    const int trigger_off = TripletPhase::trigger_offset(spec.layer);

    bool relay_pending = false;
    for (int t = 1; t <= spec.triplet_count; ++t) {
        const bool initiating =
            std::find(spec.initiate_at.begin(), spec.initiate_at.end(), t) != spec.initiate_at.end();
        if (initiating || relay_pending) {
            if (initiating) out.participated.push_back({t, true});
            if (relay_pending) out.participated.push_back({t, false});
            relay_pending = false;
            for (int off = 0; off < 3; ++off)
                (void)(co_yield(off == beep_off ? Action::Beep : Action::Idle));
        } else {
            Observation o0 = co_yield Action::Listen;
            Observation o1 = co_yield Action::Listen;
            Observation o2 = co_yield Action::Listen;
            Observation at_trigger = trigger_off == 0 ? o0 : trigger_off == 1 ? o1 : o2;
            if (heard(at_trigger)) relay_pending = true;
        }
    }
    if (relay_pending)
        out.flags.push_back("relay pending after triplet " + std::to_string(spec.triplet_count) +
                            " (budget too small)");
    co_return;
}

ProgramCoro estimate_diameter(const EstimateDiameterSpec& spec, EstimateDiameterResult& out) {
    const int W = spec.word_width;
    if (W < 1) throw std::invalid_argument("estimate_diameter: word_width must be >= 1");

    if (spec.is_source) {
        out.d_v = 0;
        (void)(co_yield Action::Beep);  // step 1
        int step = 1;
        int silent = 0;
        while (silent < 3) {
            Observation o = co_yield Action::Listen;
            ++step;
            if (heard(o))
                silent = 0;
            else
                ++silent;
        }
        const int r = step + 1;  // steps r-3, r-2, r-1 were silent
        out.silence_r = r;
        if (r % 3 != 0) out.flags.push_back("silence window ends at step " + std::to_string(r - 1) +
                                            " but r=" + std::to_string(r) + " is not divisible by 3");
        out.d_max = r / 3 - 1;
        if (out.d_max > (1 << W) - 1)
            out.flags.push_back("d_max does not fit the broadcast word width");

        (void)(co_yield Action::Beep);  // step r: framing marker
        for (int w = 1; w <= W; ++w) {
            (void)(co_yield Action::Idle);  // layer 1 relays the previous wave
            if (heard(co_yield Action::Listen))
                out.flags.push_back("source heard a beep after computing d_max (wave " +
                                    std::to_string(w) + ")");
            const bool bit = (out.d_max >> (W - w)) & 1;
            if (bit) {
                (void)(co_yield Action::Beep);
            } else {
                if (heard(co_yield Action::Listen))
                    out.flags.push_back("source heard a beep in silent wave " + std::to_string(w));
            }
        }
        (void)(co_yield Action::Idle);  // align with the relays' trailing slot
        for (int i = 0; i < out.d_max; ++i) (void)(co_yield Action::Idle);
        co_return;
    }

    // Learn the distance from the outward BFS wave.
    int step = 0;
    while (true) {
        Observation o = co_yield Action::Listen;
        ++step;
        if (heard(o)) break;
    }
    out.d_v = step;
    (void)(co_yield Action::Beep);  // step d_v + 1
    ++step;

    // Relay reverse waves two steps after hearing them; exit on first silence.
    while (true) {
        Observation o = co_yield Action::Listen;  // step d_v + 3k - 1
        ++step;
        (void)(co_yield Action::Idle);  // step d_v + 3k
        ++step;
        if (heard(o)) {
            (void)(co_yield Action::Beep);  // step d_v + 3k + 1
            ++step;
        } else {
            (void)(co_yield Action::Idle);
            ++step;
            break;
        }
    }

    // Receive the d_max broadcast. The marker front passes this layer in a
    // step = d_v - 1 (mod 3); residual relays from layers d_v and d_v - 1 land
    // in the other two residues and are ignored.
    const int marker_residue = (out.d_v + 2) % 3;
    while (true) {
        Observation o = co_yield Action::Listen;
        ++step;
        if (heard(o) && step % 3 == marker_residue) break;
    }
    (void)(co_yield Action::Beep);  // relay the marker
    ++step;
    (void)(co_yield Action::Idle);
    ++step;
    int value = 0;
    for (int w = 1; w <= W; ++w) {
        Observation o = co_yield Action::Listen;  // marker_front + 3w
        ++step;
        const bool bit = heard(o);
        value = (value << 1) | (bit ? 1 : 0);
        if (bit) {
            (void)(co_yield Action::Beep);
        } else {
            if (heard(co_yield Action::Listen))
                out.flags.push_back("beep heard in relay slot of silent wave " + std::to_string(w));
        }
        ++step;
        (void)(co_yield Action::Idle);
        ++step;
    }
    out.d_max = value;
    for (int i = 0; i < out.d_max - out.d_v; ++i) (void)(co_yield Action::Idle);
    co_return;
}

}  // namespace beep
