#include <stdio.h>

#include "thermalcat/thermalcat.h"

int main(void) {
  tc_scenario* sc = NULL;
  double ratio = 0.0;
  if (tc_scenario_preset("fig2A", &sc) != TC_OK) return 1;
  tc_scenario_free(sc);
  if (tc_heat_capacity_ratio(1.0 / 3.0, &ratio) != TC_OK) return 1;
  printf("thermalcat %s, ratio %.5f\n", tc_version(), ratio);
  return ratio > 0.99 && ratio < 0.992 ? 0 : 1;
}
