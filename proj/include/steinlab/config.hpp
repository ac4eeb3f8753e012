#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace steinlab {

// All divergence and entropy values carry the globally configured log base.
// Default is base 2 (bits); STEIN_LAB_LOG_BASE=e switches to nats.
enum class LogBase { two, e };

void set_log_base(LogBase b);
LogBase log_base();
// Reads STEIN_LAB_LOG_BASE from the environment ("2" or "e"); call once at startup.
void init_log_base_from_env();

// ln(base): divide nats by this to get configured units.
double ln_of_base();
// "bits" or "nats", for CSV headers.
std::string unit_name();

// log in the configured base.
inline double lg(double x) { return std::log(x) / ln_of_base(); }
inline double units_from_nats(double nats) { return nats / ln_of_base(); }
inline double nats_from_units(double u) { return u * ln_of_base(); }

// Tolerance budget, uniform across modules.
inline constexpr double kTolConstruct = 1e-12;   // construction-time normalization
inline constexpr double kTolProperty = 1e-9;     // property tests / drift
inline constexpr double kTolCertificate = 1e-7;  // certificate reproduces value
inline constexpr double kTolMembership = 1e-6;   // hull membership distance

// Infinite divergences are reported as a status plus this sentinel; raw IEEE
// infinities never enter arithmetic paths.
inline constexpr double kInfValue = 1e100;
inline bool is_inf_value(double v) { return v >= kInfValue * 0.5; }

// p*ln(p/q) with the conventions 0*ln(0/q) = 0, 0*ln(0/0) = 0; p*ln(p/0) is the
// caller's infinity case and must be filtered before calling.
inline double xlog_ratio_nats(double p, double q) {
  if (p <= 0.0) return 0.0;
  return p * std::log(p / q);
}

// -x*ln(x), 0 at x = 0.
inline double neg_xlogx_nats(double x) {
  if (x <= 0.0) return 0.0;
  return -x * std::log(x);
}

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace steinlab
