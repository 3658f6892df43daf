#pragma once

#include <array>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <iosfwd>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ciarisk/registry.hpp"
#include "ciarisk/types.hpp"

namespace ciarisk::monitor_sim {

// One Poisson arrival stream: dimension, target ids, rate and severity mix.
struct GeneratorSpec {
    Dimension dimension = Dimension::availability;
    std::string asset_id;
    std::optional<std::string> hypothesis_id;
    double rate_per_hour = 0.0;
    std::array<double, 3> severity_mix = {1.0, 0.0, 0.0};  // info, medium, high
};

struct Scenario {
    std::string name;
    std::uint64_t seed = 0;
    double duration_seconds = 0.0;
    std::vector<GeneratorSpec> generators;
};

void validate_scenario(const Scenario& scenario);

// Deterministic: identical (scenario, seed) produce byte-identical streams.
// Events come back timestamp-ordered over [0, duration].
std::vector<MonitorEvent> generate(const Scenario& scenario);

// Scenario file: `name:`, `seed:`, `duration:` lines plus one `generator:`
// line per stream (dimension= asset= hypothesis= rate= mix= tokens).
Scenario load_scenario(std::istream& in);
Scenario load_scenario(const std::filesystem::path& path);

// Blocking bounded queue: push blocks when full, pop blocks when empty until
// the producer closes the queue.
template <typename T>
class BoundedQueue {
public:
    explicit BoundedQueue(std::size_t capacity) : capacity_(capacity) {}

    void push(T item) {
        std::unique_lock lock(mutex_);
        not_full_.wait(lock, [&] { return items_.size() < capacity_ || closed_; });
        if (closed_) return;
        items_.push_back(std::move(item));
        not_empty_.notify_one();
    }

    std::optional<T> pop() {
        std::unique_lock lock(mutex_);
        not_empty_.wait(lock, [&] { return !items_.empty() || closed_; });
        if (items_.empty()) return std::nullopt;
        T item = std::move(items_.front());
        items_.pop_front();
        not_full_.notify_one();
        return item;
    }

    void close() {
        std::lock_guard lock(mutex_);
        closed_ = true;
        not_empty_.notify_all();
        not_full_.notify_all();
    }

private:
    std::size_t capacity_;
    std::deque<T> items_;
    bool closed_ = false;
    std::mutex mutex_;
    std::condition_variable not_full_;
    std::condition_variable not_empty_;
};

// Streams the scenario into the queue in timestamp order, then closes it.
void generate_into(const Scenario& scenario, BoundedQueue<MonitorEvent>& queue);

}  // namespace ciarisk::monitor_sim
