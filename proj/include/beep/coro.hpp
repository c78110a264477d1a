#pragma once

#include <coroutine>
#include <exception>
#include <optional>
#include <utility>

#include "beep/model.hpp"

namespace beep {

// Round-level node behavior as a coroutine: `obs = co_yield action` emits the
// action for the current round and resumes next round with that round's
// observation. The same type drives step-level fragments (EstimateDiameter),
// where one "round" of the coroutine is one simulated step.
class ProgramCoro {
public:
    struct promise_type {
        Action out{};
        Observation in{};
        std::exception_ptr error;

        ProgramCoro get_return_object() {
            return ProgramCoro{std::coroutine_handle<promise_type>::from_promise(*this)};
        }
        std::suspend_always initial_suspend() noexcept { return {}; }
        std::suspend_always final_suspend() noexcept { return {}; }
        void return_void() {}
        void unhandled_exception() { error = std::current_exception(); }

        struct ObsAwaiter {
            promise_type* p;
            bool await_ready() noexcept { return false; }
            void await_suspend(std::coroutine_handle<>) noexcept {}
            Observation await_resume() noexcept { return p->in; }
        };
        ObsAwaiter yield_value(Action a) {
            out = a;
            return ObsAwaiter{this};
        }
    };

    ProgramCoro() = default;
    explicit ProgramCoro(std::coroutine_handle<promise_type> h) : h_(h) {}
    ProgramCoro(ProgramCoro&& o) noexcept : h_(std::exchange(o.h_, {})) {}
    ProgramCoro& operator=(ProgramCoro&& o) noexcept {
        if (this != &o) {
            destroy();
            h_ = std::exchange(o.h_, {});
        }
        return *this;
    }
    ProgramCoro(const ProgramCoro&) = delete;
    ProgramCoro& operator=(const ProgramCoro&) = delete;
    ~ProgramCoro() { destroy(); }

    // Delivers the previous action's observation and returns the next action,
    // or nullopt once the coroutine has finished.
    std::optional<Action> resume(Observation obs) {
        if (done()) return std::nullopt;
        h_.promise().in = obs;
        h_.resume();
        if (h_.promise().error) std::rethrow_exception(h_.promise().error);
        if (h_.done()) return std::nullopt;
        return h_.promise().out;
    }

    bool done() const { return !h_ || h_.done(); }

private:
    void destroy() {
        if (h_) {
            h_.destroy();
            h_ = {};
        }
    }
    std::coroutine_handle<promise_type> h_;
};

}  // namespace beep
