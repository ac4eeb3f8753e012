#include "steinlab/config.hpp"

#include <atomic>
#include <cstdlib>

namespace steinlab {

namespace {
std::atomic<LogBase> g_base{LogBase::two};
}

void set_log_base(LogBase b) { g_base.store(b, std::memory_order_relaxed); }

LogBase log_base() { return g_base.load(std::memory_order_relaxed); }

void init_log_base_from_env() {
  const char* v = std::getenv("STEIN_LAB_LOG_BASE");
  if (v == nullptr) return;
  std::string s(v);
  if (s == "2") {
    set_log_base(LogBase::two);
  } else if (s == "e" || s == "E") {
    set_log_base(LogBase::e);
  } else {
    throw DomainError("STEIN_LAB_LOG_BASE must be \"2\" or \"e\", got \"" + s + "\"");
  }
}

double ln_of_base() {
  return log_base() == LogBase::two ? 0.6931471805599453094172321214581766 : 1.0;
}

std::string unit_name() { return log_base() == LogBase::two ? "bits" : "nats"; }

}  // namespace steinlab
