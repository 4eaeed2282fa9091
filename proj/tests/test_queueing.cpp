#include <array>
#include <vector>

#include "doctest.h"
#include "mecsim/error.hpp"
#include "mecsim/queueing.hpp"
#include "mecsim/rng.hpp"

using namespace mecsim;

TEST_CASE("split_arrivals") {
  const std::vector<double> s{2e5, 3e5};
  {
    const std::vector<int> xm{0, 0}, xc{0, 0};
    const Arrivals a = split_arrivals(xm, xc, s);
    CHECK(a.edge == 0.0);
    CHECK(a.cloud == 0.0);
  }
  {
    const std::vector<int> xm{1, 1}, xc{0, 1};
    const Arrivals a = split_arrivals(xm, xc, s);
    CHECK(a.edge == 2e5);
    CHECK(a.cloud == 3e5);
  }
  {
    const std::vector<int> xm{1, 1}, xc{1, 1};
    CHECK(split_arrivals(xm, xc, s).edge == 0.0);
  }
  const std::vector<int> xm{0, 1}, xc{1, 1};
  CHECK_THROWS_AS(split_arrivals(xm, xc, s), ContractError);
}

TEST_CASE("advance_queues examples") {
  const ServerParams p{5e6, 1e6, 5.0, 5.0};
  QueueState s;
  s.q_e = 5e6;
  const QueueState n = advance_queues(s, {2e6, 0.0}, p);
  CHECK(n.q_e == 2e6);

  const QueueState e = advance_queues(QueueState{}, {}, p);
  CHECK(e.q_e == 0.0);
  CHECK(e.q_c == 0.0);
  CHECK(e.z_e == 0.0);
  CHECK(e.z_c == 0.0);

  // Q/A-tilde = 3 against a bound of 5
  QueueState z;
  z.q_e = 3.0;
  const QueueState zn = advance_queues(z, {1.0, 0.0}, p);
  CHECK(zn.delay_e.back() == doctest::Approx(3.0));
  CHECK(zn.z_e == 0.0);
}

TEST_CASE("delay_metrics") {
  CHECK(delay_metrics(QueueState{}).edge == 0.0);
  const ServerParams p{1e9, 1e9, 5.0, 5.0};
  QueueState s;
  for (int i = 0; i < 10; ++i) s = advance_queues(s, {}, p);
  CHECK(delay_metrics(s).edge == 0.0);
  CHECK(delay_metrics(s).cloud == 0.0);

  QueueState c;
  c.delay_e = std::vector<double>(10, 2.0);
  CHECK(delay_metrics(c).edge == doctest::Approx(2.0));
  QueueState d;
  d.delay_e = {1.0, 3.0};
  CHECK(delay_metrics(d).edge == doctest::Approx(2.0));
  CHECK(delay_metrics(d, 1).edge == doctest::Approx(3.0));
}

TEST_CASE("Lyapunov accounting: zero state") {
  const std::array<QueueState, 1> before{};
  const std::array<Arrivals, 1> arr{};
  const std::array<ServerParams, 1> par{ServerParams{1.0, 1.0, 2.0, 2.0}};
  const std::array<QueueState, 1> after{advance_queues(before[0], arr[0], par[0])};
  const LyapunovSnapshot snap = lyapunov_accounting(before, after, arr, par, 0.0, 10.0);
  CHECK(snap.value == 0.0);
  CHECK(snap.drift == 0.0);
  CHECK(snap.bound_b >= 0.0);
  CHECK(snap.holds);
}

TEST_CASE("Lyapunov accounting: hand example holds with equality") {
  std::array<QueueState, 1> before{};
  before[0].q_e = 1.0;
  const std::array<Arrivals, 1> arr{Arrivals{1.0, 0.0}};
  const std::array<ServerParams, 1> par{ServerParams{0.0, 0.0, 0.0, 0.0}};
  const std::array<QueueState, 1> after{advance_queues(before[0], arr[0], par[0])};
  CHECK(after[0].q_e == 2.0);
  CHECK(after[0].z_e == 1.0);
  const LyapunovSnapshot snap = lyapunov_accounting(before, after, arr, par, 0.0, 1.0);
  CHECK(snap.drift == doctest::Approx(2.0));
  CHECK(snap.bound_b == doctest::Approx(1.0));
  CHECK(snap.rhs == doctest::Approx(2.0));
  CHECK(snap.holds);
}

TEST_CASE("Lyapunov inequality on random states") {
  Stream rng(77, 0, Purpose::kFuzz, 0);
  int violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::size_t m = 1 + rng.index(4);
    std::vector<QueueState> before(m);
    std::vector<Arrivals> arr(m);
    std::vector<ServerParams> par(m);
    std::vector<QueueState> after(m);
    for (std::size_t k = 0; k < m; ++k) {
      QueueState& s = before[k];
      s.q_e = rng.bernoulli(0.2) ? 0.0 : rng.uniform(0.0, 50.0);
      s.q_c = rng.bernoulli(0.2) ? 0.0 : rng.uniform(0.0, 50.0);
      s.z_e = rng.uniform(0.0, 20.0);
      s.z_c = rng.uniform(0.0, 20.0);
      s.slots = static_cast<int>(rng.index(100));
      s.hist_e = s.slots == 0 ? 0.0 : rng.uniform(0.0, 200.0);
      s.hist_c = s.slots == 0 ? 0.0 : rng.uniform(0.0, 200.0);
      arr[k] = {rng.bernoulli(0.3) ? 0.0 : rng.uniform(0.0, 10.0),
                rng.bernoulli(0.3) ? 0.0 : rng.uniform(0.0, 10.0)};
      par[k] = {rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0), rng.uniform(0.0, 5.0),
                rng.uniform(0.0, 5.0)};
      after[k] = advance_queues(s, arr[k], par[k]);
    }
    violations += !lyapunov_accounting(before, after, arr, par, rng.uniform(0.0, 3.0), 10.0).holds;
  }
  CHECK(violations == 0);
}

TEST_CASE("queue conservation with no clipping") {
  Stream rng(78, 0, Purpose::kFuzz, 0);
  const ServerParams p{3.0, 2.0, 2.0, 2.0};
  QueueState s;
  s.q_e = 1000.0;
  s.q_c = 1000.0;
  double in_e = 0.0, in_c = 0.0;
  const int n = 200;
  for (int t = 0; t < n; ++t) {
    const Arrivals a{rng.uniform(0.0, 4.0), rng.uniform(0.0, 4.0)};
    in_e += a.edge;
    in_c += a.cloud;
    s = advance_queues(s, a, p);
  }
  CHECK(s.q_e == doctest::Approx(1000.0 + in_e - n * p.edge_service));
  CHECK(s.q_c == doctest::Approx(1000.0 + in_c - n * p.cloud_service));
  CHECK(s.hist_e == doctest::Approx(in_e));
  CHECK(s.slots == n);
  CHECK(s.delay_e.size() == static_cast<std::size_t>(n));
}
