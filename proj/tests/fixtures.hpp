#pragma once

#include "solsched/params.hpp"

namespace solsched::test {

/// The bundled two-state, two-class reference configuration.
inline SystemParams table2_params() {
    SystemParams p;
    p.solar.intensities = {50.0, 200.0};
    p.solar.cloud_mean_diameters = {50.0, 100.0};
    p.solar.wind_speed = 2.0;
    p.solar.panel_area = 0.1;
    p.solar.conversion_efficiency = 0.2;
    p.battery.capacity = 1.0;
    p.battery.unit = 0.05;
    p.traffic.classes = {{10.0, 8, 3}, {5.0, 10, 6}};
    p.economics.grid_price = 2.0;
    p.economics.solar_price = 1.5;
    p.economics.discount_rate = 0.05;
    return p;
}

}  // namespace solsched::test
