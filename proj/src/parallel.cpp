// parallel.cpp

#include "bayesphase/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <string_view>

namespace bayesphase {

unsigned default_workers() {
    if (const char* env = std::getenv("BAYESPHASE_WORKERS")) {
        std::string_view s(env);
        unsigned n = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
        if (ec == std::errc{} && ptr == s.data() + s.size() && n > 0) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace bayesphase
