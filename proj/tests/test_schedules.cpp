#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lrdual/errors.hpp"
#include "lrdual/schedules.hpp"

using namespace lrdual;

namespace {

ScheduleSpec make(ScheduleKind kind, std::int64_t T, std::int64_t W, double peak = 1.0, double ratio = 0.0,
                  double rho = 1.0) {
    ScheduleSpec s;
    s.kind = kind;
    s.total_steps = T;
    s.warmup_steps = W;
    s.peak_base_lr = peak;
    s.mup_factor = rho;
    s.decay_ratio = ratio;
    s.params.period_steps = 50;
    s.params.weight_decay = 0.1;
    return s;
}

const ScheduleKind kAllButPiecewise[] = {ScheduleKind::Constant, ScheduleKind::Linear, ScheduleKind::Cosine,
                                         ScheduleKind::InvSqrt,  ScheduleKind::Step,   ScheduleKind::WSD,
                                         ScheduleKind::Cyclic,   ScheduleKind::Rational};

}  // namespace

TEST_CASE("linear decay endpoints and midpoint") {
    const auto s = make(ScheduleKind::Linear, 100, 10);
    CHECK(lr_at(s, 10) == 1.0);
    CHECK(lr_at(s, 100) == 0.0);
    CHECK(lr_at(s, 55) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(lr_at(s, 1) == doctest::Approx(0.1));
}

TEST_CASE("cosine 10x decay is halfway at the decay midpoint") {
    const auto s = make(ScheduleKind::Cosine, 100, 10, 1.0, 0.1);
    CHECK(lr_at(s, 55) == doctest::Approx(0.55).epsilon(1e-15));
    CHECK(lr_at(s, 100) == doctest::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("constant schedule after warmup") {
    const auto curve = lr_curve(make(ScheduleKind::Constant, 3, 1, 0.5));
    REQUIRE(curve.size() == 3);
    CHECK(curve == std::vector<double>{0.5, 0.5, 0.5});
    const auto warm = lr_curve(make(ScheduleKind::Constant, 3, 2, 0.5));
    CHECK(warm == std::vector<double>{0.25, 0.5, 0.5});
}

TEST_CASE("610M-20TPP linear D2Z curve") {
    const auto s = make(ScheduleKind::Linear, 11752, 1175, 1.6e-2, 0.0, 0.125);
    const auto curve = lr_curve(s);
    REQUIRE(curve.size() == 11752);
    CHECK(curve[1174] == s.peak_lr());
    CHECK(curve.back() == 0.0);
    CHECK(warmup_steps_for(11752, 0.1) == 1175);
}

TEST_CASE("WSD cools down over the final 22.5% of steps") {
    auto s = make(ScheduleKind::WSD, 1000, 0);
    s.params.cooldown_fraction = 0.225;
    const auto curve = lr_curve(s);
    for (int t = 1; t <= 775; ++t) CHECK(curve[t - 1] == 1.0);
    CHECK(curve[775] < 1.0);
    CHECK(curve[999] == 0.0);
    for (int t = 777; t <= 1000; ++t) {
        CHECK(curve[t - 1] < curve[t - 2]);
        CHECK(curve[t - 1] == doctest::Approx((1000.0 - t) / 225.0).epsilon(1e-14));
    }
}

TEST_CASE("step schedule drops to 0.1% of peak after 90%") {
    auto s = make(ScheduleKind::Step, 1000, 100, 2.0);
    const auto curve = lr_curve(s);
    CHECK(curve[899] == 2.0);
    for (int t = 901; t <= 1000; ++t) CHECK(curve[t - 1] == 0.001 * 2.0);
}

TEST_CASE("inverse square root continues smoothly from the warmup peak") {
    const auto s = make(ScheduleKind::InvSqrt, 100, 25);
    CHECK(lr_at(s, 25) == 1.0);
    CHECK(lr_at(s, 100) == doctest::Approx(0.5));
    const auto no_warmup = make(ScheduleKind::InvSqrt, 100, 0);
    CHECK(lr_at(no_warmup, 1) == 1.0);
    CHECK(lr_at(no_warmup, 4) == doctest::Approx(0.5));
}

TEST_CASE("cyclic triangle starts descending from peak") {
    auto s = make(ScheduleKind::Cyclic, 300, 0, 1.0, 0.2);
    s.params.period_steps = 100;
    CHECK(lr_at(s, 1) == 1.0);
    CHECK(lr_at(s, 51) == doctest::Approx(0.2));
    CHECK(lr_at(s, 101) == doctest::Approx(1.0));
    CHECK(lr_at(s, 26) < lr_at(s, 2));
}

TEST_CASE("rational closed form matches the recurrence") {
    auto s = make(ScheduleKind::Rational, 200, 20, 0.5);
    s.params.weight_decay = 0.3;
    const auto curve = lr_curve(s);
    double eta = 0.5;
    for (int t = 20; t <= 200; ++t) {
        CHECK(curve[t - 1] == doctest::Approx(eta).epsilon(1e-13));
        eta = eta / (1.0 + eta * 0.3);
    }
}

TEST_CASE("piecewise multipliers") {
    auto s = make(ScheduleKind::Piecewise, 5, 2, 4.0);
    s.params.multipliers = {0.5, 0.25, 0.0};
    CHECK(lr_curve(s) == std::vector<double>{2.0, 4.0, 2.0, 1.0, 0.0});
    s.params.multipliers = {0.5};
    CHECK_THROWS_AS(lr_curve(s), ValidationError);
}

TEST_CASE("mup scaling") {
    CHECK(mup_scale(1.6e-2, 0.125) == doctest::Approx(2.0e-3).epsilon(1e-15));
    CHECK(mup_scale(6.5e-2, 0.125) == doctest::Approx(8.125e-3).epsilon(1e-15));
    CHECK(mup_scale(0.37, 1.0) == 0.37);
    CHECK_THROWS_AS(mup_scale(-1.0, 0.5), ValidationError);
    CHECK_THROWS_AS(mup_scale(1.0, 0.0), ValidationError);
    CHECK_THROWS_AS(mup_scale(1.0, 1.5), ValidationError);
}

TEST_CASE("alpha curve") {
    const auto c = alpha_curve(make(ScheduleKind::Constant, 20, 5, 2e-3), 0.1);
    for (std::size_t t = 5; t < c.size(); ++t) CHECK(c[t] == doctest::Approx(2e-4).epsilon(1e-15));
    for (double a : alpha_curve(make(ScheduleKind::Linear, 20, 5), 0.0)) CHECK(a == 0.0);
    const auto d2z = alpha_curve(make(ScheduleKind::Linear, 100, 10, 2e-3), 0.1);
    CHECK(d2z.back() == 0.0);
    CHECK_THROWS_AS(alpha_curve(make(ScheduleKind::Constant, 5, 0, 2.0), 0.5), DomainError);
}

TEST_CASE("average alpha") {
    CHECK(average_alpha(make(ScheduleKind::Constant, 50, 0, 0.01), 0.1) == doctest::Approx(1e-3).epsilon(1e-14));
    CHECK(average_alpha(make(ScheduleKind::Linear, 100000, 0, 0.01), 0.1) == doctest::Approx(5e-4).epsilon(1e-4));

    // Trapezoid closed form for warmup + linear D2Z (610M, 20 TPP, eta = 2e-3, lambda = 0.1).
    const std::int64_t T = 11752, W = 1175;
    const double peak_alpha = 2e-3 * 0.1;
    const double warm_sum = peak_alpha * ((static_cast<double>(W) * (W + 1) / 2.0) - 1.0) / static_cast<double>(W);
    const double decay_sum = peak_alpha * static_cast<double>(T - W - 1) / 2.0;
    const double closed = (warm_sum + decay_sum) / static_cast<double>(T - 1);
    const double summed = average_alpha(make(ScheduleKind::Linear, T, W, 1.6e-2, 0.0, 0.125), 0.1);
    CHECK(summed == doctest::Approx(closed).epsilon(1e-12));
    CHECK(summed == doctest::Approx(1.0000849542908978e-4).epsilon(1e-12));
    CHECK_THROWS_AS(average_alpha(make(ScheduleKind::Constant, 1, 0), 0.1), ValidationError);
}

TEST_CASE("validation names the offending field") {
    auto s = make(ScheduleKind::Linear, 10, 10);
    try {
        s.validate();
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "warmup_steps");
    }
    s = make(ScheduleKind::Linear, 10, 0, 1.0, 1.5);
    CHECK_THROWS_AS(s.validate(), ValidationError);
    CHECK_THROWS_AS(lr_at(make(ScheduleKind::Linear, 10, 2), 0), RangeError);
    CHECK_THROWS_AS(lr_at(make(ScheduleKind::Linear, 10, 2), 11), RangeError);
    CHECK_THROWS_AS(parse_schedule_kind("triangle"), ValidationError);
    CHECK(parse_schedule_kind("Inv_Sqrt") == ScheduleKind::InvSqrt);
}

TEST_CASE("property: peak, bounds, warmup agreement, monotonicity, muP commutation") {
    std::mt19937_64 gen(7);
    std::uniform_int_distribution<std::int64_t> steps(2, 3000);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::int64_t T = steps(gen);
        const std::int64_t W = static_cast<std::int64_t>(unit(gen) * 0.3 * static_cast<double>(T));
        const double peak = 1e-4 + unit(gen);
        const double rho = 0.05 + 0.95 * unit(gen);
        const double ratio = unit(gen) < 0.3 ? 0.0 : unit(gen);
        std::vector<double> first_warmup;
        for (ScheduleKind kind : kAllButPiecewise) {
            auto s = make(kind, T, W, peak, ratio, rho);
            s.params.period_steps = std::max<std::int64_t>(2, T / 5);
            if (kind == ScheduleKind::WSD && T - static_cast<std::int64_t>(std::ceil(0.225 * T)) < std::max<std::int64_t>(W, 1))
                continue;
            const auto curve = lr_curve(s);
            const double top = s.peak_lr();
            const std::size_t anchor = static_cast<std::size_t>(std::max<std::int64_t>(W, 1)) - 1;
            CHECK(curve[anchor] == top);
            for (double lr : curve) {
                CHECK(lr >= 0.0);
                CHECK(lr <= top);
            }
            std::vector<double> warm(curve.begin(), curve.begin() + W);
            if (first_warmup.empty() && W > 0) first_warmup = warm;
            else if (W > 0) CHECK(warm == first_warmup);

            if (kind == ScheduleKind::Linear || kind == ScheduleKind::Cosine || kind == ScheduleKind::InvSqrt ||
                kind == ScheduleKind::Rational)
                for (std::size_t t = anchor + 1; t < curve.size(); ++t) CHECK(curve[t] <= curve[t - 1]);
            if (kind == ScheduleKind::Linear || kind == ScheduleKind::Cosine)
                CHECK(std::abs(curve.back() - ratio * top) <= 1e-15 * top);

            if (kind != ScheduleKind::Rational) {
                auto base = s;
                base.mup_factor = 1.0;
                const auto unscaled = lr_curve(base);
                for (std::size_t t = 0; t < curve.size(); ++t)
                    CHECK(std::abs(curve[t] - rho * unscaled[t]) <= 4e-16 * curve[t] + 1e-300);
            }
        }
    }
}
