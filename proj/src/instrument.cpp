#include "fntrs/instrument.hpp"

namespace fntrs {

namespace {
thread_local FntScope* g_active_scope = nullptr;
}

FntScope::FntScope(FntCounter& counter) : counter_(counter), prev_(g_active_scope) {
    g_active_scope = this;
}

FntScope::~FntScope() { g_active_scope = prev_; }

void note_fnt_execution(std::size_t size) noexcept {
    for (FntScope* s = g_active_scope; s != nullptr; s = s->prev_)
        s->counter_.record(size);
}

}  // namespace fntrs
