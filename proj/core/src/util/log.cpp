#include "parley/util/log.hpp"

#include <atomic>
#include <cstdio>
#include <mutex>

#include "parley/error.hpp"

namespace parley::log {

namespace {
std::atomic<Level> g_level{Level::Warn};
std::mutex g_mutex;
} // namespace

void set_level(Level l) { g_level.store(l); }
Level level() { return g_level.load(std::memory_order_relaxed); }

Level parse_level(std::string_view name) {
    if (name == "debug") return Level::Debug;
    if (name == "info") return Level::Info;
    if (name == "warn") return Level::Warn;
    if (name == "error") return Level::Error;
    if (name == "off") return Level::Off;
    throw InputError(fmt::format("unknown log level '{}'", name));
}

void write(Level l, std::string_view message) {
    static constexpr const char* names[] = {"debug", "info", "warn", "error"};
    if (l == Level::Off) return;
    std::lock_guard lock(g_mutex);
    fmt::print(stderr, "[{}] {}\n", names[static_cast<int>(l)], message);
}

} // namespace parley::log
