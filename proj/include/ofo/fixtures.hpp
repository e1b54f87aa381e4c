#pragma once

#include "ofo/network.hpp"

namespace ofo {

/// 14-bus medium-voltage feeder modeled on the CIGRE MV benchmark layout:
/// HV slack at bus 0, main MV bus 1 behind the coupling transformer (the PCC),
/// main feeder over buses 2..11 carrying the flexible units and the 1.5 MW
/// wind plant at bus 7, short second feeder over buses 12..13.
/// Base 1 MVA, voltage band 1.0 +/- 5% on all MV buses.
Network cigre_mv_fixture();

/// Small radial low-voltage feeder behind an MV/LV transformer (the PCC).
/// The seed deterministically varies bus count, line data, loads and
/// actuator placement. Seeds 1 and 2 are the two sub-layers used by the
/// dispatch case; seed 2 carries a deliberately tight trunk rating.
Network lv_feeder_fixture(unsigned seed);

} // namespace ofo
