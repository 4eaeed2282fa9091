#include "doctest.h"
#include "mecsim/energy.hpp"
#include "mecsim/error.hpp"

using namespace mecsim;

TEST_CASE("local energy") {
  const UdProfile ud{1e9, 1e-28, 0.1};
  const Task t{1e5, 1000.0};
  CHECK(local_energy(ud, t, true) == 0.0);
  CHECK(local_energy(ud, t, false) == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(local_energy(ud, Task{2e5, 1000.0}, false) == doctest::Approx(2.0 * local_energy(ud, t, false)));
}

TEST_CASE("offload energy") {
  CHECK(offload_energy(0.1, 1e6, 2e7, false) == 0.0);
  CHECK(offload_energy(0.1, 1e6, 2e7, true) == doctest::Approx(0.005));
  CHECK(offload_energy(0.1, 1e6, 4e7, true) == doctest::Approx(0.0025));
  CHECK(offload_energy(0.1, 1e6, 0.0, false) == 0.0);
  CHECK_THROWS_AS(offload_energy(0.1, 1e6, 0.0, true), InfeasibleError);
}

TEST_CASE("exactly one energy term is nonzero") {
  const UdProfile ud{1.3e9, 1e-28, 0.2};
  for (double s : {0.0, 1e4, 5e5}) {
    const Task t{s, 1000.0};
    for (bool x : {false, true}) {
      const double el = local_energy(ud, t, x);
      const double eo = offload_energy(ud.transmit_power, s, 1e6, x);
      if (s == 0.0) {
        CHECK(el + eo == 0.0);
      } else {
        CHECK(((el > 0.0) != (eo > 0.0)));
      }
    }
  }
}
