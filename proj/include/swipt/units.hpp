// Power and gain unit conversions. All internal powers are watts,
// all external/reported powers are dBm.
#pragma once

#include <cmath>

namespace swipt {

inline double dbm_to_watt(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w / 1e-3); }

inline double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }
inline double lin_to_db(double lin) { return 10.0 * std::log10(lin); }

} // namespace swipt
