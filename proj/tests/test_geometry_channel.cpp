#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "helpers.hpp"
#include "rismec/channel.hpp"
#include "rismec/geometry.hpp"
#include "rismec/params.hpp"
#include "rismec/rng.hpp"

using namespace rismec;

namespace {

SystemParams reference_params() {
  SystemParams p; // defaults are the reference setup
  return p;
}

}  // namespace

TEST_CASE("place_nodes reproduces the reference layout") {
  SystemParams p = reference_params();
  auto rng = substream(7, "geometry");
  const Geometry geom = place_nodes(p, rng);

  CHECK(geom.ap_position.x == 0.0);
  CHECK(geom.ap_position.y == 0.0);
  CHECK(geom.ris_position.x == Catch::Approx(300.0));
  CHECK(geom.ris_position.y == 0.0);
  REQUIRE(geom.device_positions.size() == 4);

  // cluster center at (280, 0): 20 m from the RIS
  const Vec2 center{280.0, 0.0};
  CHECK(distance(center, geom.ris_position) == Catch::Approx(20.0));
  for (const auto& dev : geom.device_positions) {
    CHECK(distance(dev, center) <= p.r_cluster + 1e-12);
  }
}

TEST_CASE("place_nodes is reproducible for a fixed substream") {
  SystemParams p = reference_params();
  auto rng1 = substream(42, "geometry", 30.0, 5);
  auto rng2 = substream(42, "geometry", 30.0, 5);
  const Geometry a = place_nodes(p, rng1);
  const Geometry b = place_nodes(p, rng2);
  for (int k = 0; k < p.K; ++k) {
    CHECK(a.device_positions[k].x == b.device_positions[k].x);
    CHECK(a.device_positions[k].y == b.device_positions[k].y);
  }
}

TEST_CASE("place_nodes handles the collocated degenerate setup") {
  SystemParams p = reference_params();
  p.d = 0.0;
  p.r_cluster = 0.0;
  auto rng = substream(1, "geometry");
  const Geometry geom = place_nodes(p, rng);
  for (const auto& dev : geom.device_positions) {
    CHECK(dev.x == 0.0);
    CHECK(dev.y == 0.0);
  }
  // direct distance 0 is clamped by the path-loss floor
  CHECK(path_loss(0.0, p.alpha_direct, p.ref_loss) ==
        path_loss(kMinDistanceM, p.alpha_direct, p.ref_loss));
}

TEST_CASE("place_nodes rejects degenerate geometry") {
  SystemParams p = reference_params();
  auto rng = substream(1, "geometry");

  p.d = -1.0;
  CHECK_THROWS_AS(place_nodes(p, rng), std::invalid_argument);

  p = reference_params();
  p.d = p.R; // cluster center on top of the RIS
  p.r_cluster = 0.0;
  CHECK_THROWS_AS(place_nodes(p, rng), std::invalid_argument);
}

TEST_CASE("device positions are uniform in the cluster disc") {
  // Monte-Carlo oracle: mean distance to the center of a uniform draw in a
  // disc of radius r equals 2r/3.
  SystemParams p = reference_params();
  p.K = 1;
  const Vec2 center{p.d, 0.0};
  auto rng = substream(11, "geometry");
  double acc = 0.0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    const Geometry geom = place_nodes(p, rng);
    acc += distance(geom.device_positions[0], center);
  }
  const double mean = acc / draws;
  CHECK(mean == Catch::Approx(2.0 / 3.0 * p.r_cluster).epsilon(0.02));
}

TEST_CASE("path_loss matches its closed form") {
  CHECK(path_loss(1.0, 3.5, 1e-3) == Catch::Approx(1e-3).epsilon(1e-12));
  CHECK(path_loss(10.0, 2.0, 1e-3) == Catch::Approx(1e-5).epsilon(1e-12));
  // hand-computed: 1e-3 * 280^-3.5
  CHECK(path_loss(280.0, 3.5, 1e-3) == Catch::Approx(2.722368370386283e-12).epsilon(1e-12));
}

TEST_CASE("path_loss is monotone and multiplicative") {
  auto rng = substream(3, "pl");
  for (int i = 0; i < 200; ++i) {
    const double a = rng.uniform(0.2, 500.0);
    const double b = a + rng.uniform(0.01, 500.0);
    const double e = rng.uniform(0.5, 4.0);
    CHECK(path_loss(b, e, 1e-3) < path_loss(a, e, 1e-3));
    if (a * b >= kMinDistanceM) {
      CHECK(path_loss(a * b, e, 1.0) ==
            Catch::Approx(path_loss(a, e, 1.0) * path_loss(b, e, 1.0)).epsilon(1e-12));
    }
  }
}

TEST_CASE("reflected-path gain product exceeds the direct-path gain") {
  // Scalar comparison oracle behind the obstructed-direct-link setup: at
  // d = 280 m the cascaded 20 m + 300 m path at exponent 2.2 carries more
  // gain than the 280 m direct path at exponent 3.5.
  const double direct = path_loss(280.0, 3.5, 1e-3);
  const double cascade = path_loss(20.0, 2.2, 1e-3) * path_loss(300.0, 2.2, 1.0);
  CHECK(direct == Catch::Approx(2.722368370386283e-12).epsilon(1e-12));
  CHECK(cascade == Catch::Approx(4.8760398822590586e-12).epsilon(1e-12));
  CHECK(cascade > direct);
}

TEST_CASE("pure-LoS limit gives deterministic channel magnitudes") {
  SystemParams p = reference_params();
  p.rician_k = std::numeric_limits<double>::infinity();
  auto geom_rng = substream(5, "geometry");
  const Geometry geom = place_nodes(p, geom_rng);
  auto chan_rng = substream(5, "channels");
  const ChannelRealization chan = draw_channels(geom, p, chan_rng);

  const double g_amp = std::sqrt(ris_ap_gain(geom, p));
  const double g_phase = 2.0 * RngStream::kPi * p.R / kCarrierWavelengthM;
  for (int n = 0; n < p.N; ++n) {
    for (int m = 0; m < p.M; ++m) {
      CHECK(std::abs(chan.G(m, n)) == Catch::Approx(g_amp).epsilon(1e-12));
      CHECK(std::abs(chan.G(m, n) - std::polar(g_amp, g_phase)) < 1e-12 * g_amp);
    }
  }
  for (int k = 0; k < p.K; ++k) {
    const double amp = std::sqrt(device_ris_gain(geom, p, k));
    for (int n = 0; n < p.N; ++n) {
      CHECK(std::abs(chan.h_dr(n, k)) == Catch::Approx(amp).epsilon(1e-12));
    }
  }
}

TEST_CASE("channel second moments match the assigned path losses") {
  SystemParams p = reference_params();
  p.M = 2;
  p.K = 2;
  p.N = 3;
  auto geom_rng = substream(9, "geometry");
  const Geometry geom = place_nodes(p, geom_rng);

  auto run_moments = [&](double rician_k) {
    SystemParams q = p;
    q.rician_k = rician_k;
    auto rng = substream(9, "channels");
    Eigen::ArrayXd direct_acc = Eigen::ArrayXd::Zero(q.K);
    Eigen::ArrayXd dr_acc = Eigen::ArrayXd::Zero(q.K);
    double g_acc = 0.0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
      const ChannelRealization chan = draw_channels(geom, q, rng);
      for (int k = 0; k < q.K; ++k) {
        direct_acc(k) += chan.h_direct.col(k).squaredNorm() / q.M;
        dr_acc(k) += chan.h_dr.col(k).squaredNorm() / q.N;
      }
      g_acc += chan.G.squaredNorm() / (q.M * q.N);
    }
    for (int k = 0; k < q.K; ++k) {
      CHECK(direct_acc(k) / draws ==
            Catch::Approx(direct_gain(geom, q, k)).epsilon(0.05));
      CHECK(dr_acc(k) / draws == Catch::Approx(device_ris_gain(geom, q, k)).epsilon(0.05));
    }
    CHECK(g_acc / draws == Catch::Approx(ris_ap_gain(geom, q)).epsilon(0.05));
  };

  SECTION("Rician factor 0 (pure Rayleigh)") { run_moments(0.0); }
  SECTION("default Rician factor") { run_moments(p.rician_k); }
}

TEST_CASE("channel draws are reproducible") {
  SystemParams p = reference_params();
  auto geom_rng = substream(1, "geometry");
  const Geometry geom = place_nodes(p, geom_rng);
  auto rng1 = substream(123, "channels", 30.0, 2);
  auto rng2 = substream(123, "channels", 30.0, 2);
  const ChannelRealization a = draw_channels(geom, p, rng1);
  const ChannelRealization b = draw_channels(geom, p, rng2);
  CHECK(a.h_direct == b.h_direct);
  CHECK(a.h_dr == b.h_dr);
  CHECK(a.G == b.G);
}

TEST_CASE("effective_channel composes direct and reflected paths") {
  auto rng = substream(17, "chan");

  SECTION("zero-amplitude coefficients remove the RIS") {
    const auto chan = testutil::random_channel(3, 2, 4, rng);
    const Eigen::MatrixXcd H = effective_channel(chan, Eigen::VectorXcd::Zero(4));
    CHECK((H - chan.h_direct).norm() == 0.0);
  }

  SECTION("scalar composition") {
    ChannelRealization chan;
    chan.h_direct = Eigen::MatrixXcd::Constant(1, 1, std::complex<double>(1.0, 0.0));
    chan.h_dr = Eigen::MatrixXcd::Constant(1, 1, std::complex<double>(1.0, 0.0));
    chan.G = Eigen::MatrixXcd::Constant(1, 1, std::complex<double>(1.0, 0.0));
    const Eigen::MatrixXcd H = effective_channel(chan, Eigen::VectorXcd::Ones(1));
    CHECK(H(0, 0) == std::complex<double>(2.0, 0.0));
  }

  SECTION("matches the elementwise summation oracle") {
    const auto chan = testutil::random_channel(3, 2, 4, rng);
    const auto theta = testutil::random_unit_vector(4, rng);
    const Eigen::MatrixXcd H = effective_channel(chan, theta);
    for (int k = 0; k < 2; ++k) {
      Eigen::VectorXcd expect = chan.h_direct.col(k);
      for (int n = 0; n < 4; ++n) expect += chan.G.col(n) * theta(n) * chan.h_dr(n, k);
      CHECK((H.col(k) - expect).norm() < 1e-12 * expect.norm());
    }
  }

  SECTION("linear in the reflection coefficients") {
    const auto chan = testutil::random_channel(3, 2, 4, rng);
    const auto t1 = testutil::random_unit_vector(4, rng);
    const auto t2 = testutil::random_unit_vector(4, rng);
    const Eigen::MatrixXcd lhs = effective_channel(chan, t1 + t2);
    const Eigen::MatrixXcd rhs =
        effective_channel(chan, t1) + effective_channel(chan, t2) - chan.h_direct;
    CHECK((lhs - rhs).norm() < 1e-12 * rhs.norm());
  }

  SECTION("dimension mismatch is rejected") {
    const auto chan = testutil::random_channel(3, 2, 4, rng);
    CHECK_THROWS_AS(effective_channel(chan, Eigen::VectorXcd::Ones(5)), std::invalid_argument);
  }
}

TEST_CASE("parameter validation rejects out-of-range values") {
  SystemParams p;
  p.M = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = SystemParams{};
  p.alpha_direct = 2.0; // below alpha_ris
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = SystemParams{};
  p.task_bits_min = 2.0;
  p.task_bits_max = 1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = SystemParams{};
  p.noise_power = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = SystemParams{};
  p.rician_k = -0.5;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
