#include "faa/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace faa::kernels {
namespace {

const Backend* pick_auto() {
#if defined(__x86_64__) || defined(_M_X64)
    if (avx2_available()) return &avx2_backend();
#endif
    return &scalar_backend();
}

const Backend* initial_backend() {
    if (const char* env = std::getenv("FAA_KERNELS")) {
        const std::string name(env);
        if (name == "scalar") return &scalar_backend();
#if defined(__x86_64__) || defined(_M_X64)
        if (name == "avx2" && avx2_available()) return &avx2_backend();
#endif
        // Unknown or unavailable: fall through to auto.
    }
    return pick_auto();
}

std::atomic<const Backend*>& slot() {
    static std::atomic<const Backend*> current{initial_backend()};
    return current;
}

} // namespace

const Backend& active() { return *slot().load(std::memory_order_relaxed); }

bool set_backend(std::string_view name) {
    if (name == "auto") {
        slot().store(pick_auto(), std::memory_order_relaxed);
        return true;
    }
    if (name == "scalar") {
        slot().store(&scalar_backend(), std::memory_order_relaxed);
        return true;
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (name == "avx2" && avx2_available()) {
        slot().store(&avx2_backend(), std::memory_order_relaxed);
        return true;
    }
#endif
    return false;
}

} // namespace faa::kernels
