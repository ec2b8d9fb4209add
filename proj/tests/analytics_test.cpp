#include <cbmo/analytics.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace cbmo;
using namespace cbmo::analytics;

namespace {

using Series = std::vector<double>;

template <class F>
ErrorCode error_code(F&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no Error thrown";
    return ErrorCode::InvalidConfig;
}

ObservationTable table_of(std::size_t rows)
{
    ObservationTable t;
    t.columns.push_back({ConceptId::VP, {}});
    for (std::size_t r = 0; r < rows; ++r) {
        t.periods.push_back(std::to_string(2000 + r));
        t.columns[0].values.push_back(static_cast<double>(r));
        t.profit.push_back(static_cast<double>(r * r));
    }
    return t;
}

} // namespace

TEST(Normalize, Examples)
{
    ObservationTable t;
    t.periods = {"a", "b", "c"};
    t.columns = {{ConceptId::VP, {2, 4, 6}}, {ConceptId::TC, {5, 5, 5}}};
    t.profit = {10, 30, 20};
    auto [n, params] = normalize(t);
    EXPECT_EQ(n.columns[0].values, (Series{0, 0.5, 1}));
    EXPECT_EQ(n.columns[1].values, (Series{0, 0, 0}));
    EXPECT_EQ(n.profit, (Series{0, 1, 0.5}));
    EXPECT_EQ(n.periods, t.periods);
    EXPECT_EQ(params.find(ConceptId::VP)->min, 2.0);
    EXPECT_EQ(params.find(ConceptId::VP)->max, 6.0);
    EXPECT_EQ(params.profit.max, 30.0);

    auto [again, params2] = normalize(n);
    EXPECT_EQ(again, n);
}

TEST(Normalize, EmptyTable)
{
    EXPECT_EQ(error_code([] { normalize(ObservationTable{}); }), ErrorCode::EmptyDataset);
}

TEST(NormalizeProperty, BoundsAndInverse)
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    for (int k = 0; k < 50; ++k) {
        ObservationTable t;
        const std::size_t rows = 1 + rng() % 20;
        t.columns = {{ConceptId::VP, {}}, {ConceptId::EM, {}}, {ConceptId::TH, {}}};
        for (std::size_t r = 0; r < rows; ++r) {
            t.periods.push_back(std::to_string(r));
            t.columns[0].values.push_back(u(rng));
            t.columns[1].values.push_back(u(rng) * 1e-6);
            t.columns[2].values.push_back(42.0);
            t.profit.push_back(u(rng));
        }
        auto [n, params] = normalize(t);
        for (const auto& c : n.columns) {
            for (double x : c.values) {
                ASSERT_GE(x, 0.0);
                ASSERT_LE(x, 1.0);
            }
        }
        auto back = inverse_transform(n, params);
        for (std::size_t c = 0; c < t.columns.size(); ++c) {
            for (std::size_t r = 0; r < rows; ++r) {
                const double orig = t.columns[c].values[r];
                ASSERT_NEAR(back.columns[c].values[r], orig, 1e-12 * std::max(1.0, std::abs(orig)));
            }
        }
        auto profit = inverse_profit(n.profit, params);
        for (std::size_t r = 0; r < rows; ++r) {
            ASSERT_NEAR(profit[r], t.profit[r], 1e-12 * std::max(1.0, std::abs(t.profit[r])));
        }
    }
}

TEST(Normalize, ApplyScalerNeedsParameters)
{
    auto t = table_of(3);
    EXPECT_EQ(error_code([&] { apply_scaler(t, ScalerParams{}); }), ErrorCode::MissingColumn);
}

TEST(Split, Examples)
{
    auto [train, test] = split(table_of(10), 0.8);
    EXPECT_EQ(train.rows(), 8u);
    EXPECT_EQ(test.rows(), 2u);
    EXPECT_EQ(test.periods.front(), "2008");
    EXPECT_EQ(test.columns[0].values, (Series{8, 9}));
    EXPECT_EQ(test.profit, (Series{64, 81}));

    auto [a, b] = split(table_of(2), 0.5);
    EXPECT_EQ(a.rows(), 1u);
    EXPECT_EQ(b.rows(), 1u);

    EXPECT_EQ(split(table_of(10), 0.7).first.rows(), 7u);
    EXPECT_EQ(split(table_of(10), 0.75).first.rows(), 8u);
}

TEST(Split, Errors)
{
    EXPECT_EQ(error_code([] { split(table_of(1), 0.5); }), ErrorCode::TooFewRows);
    EXPECT_EQ(error_code([] { split(table_of(3), 0.99); }), ErrorCode::TooFewRows);
    EXPECT_EQ(error_code([] { split(table_of(3), 0.0); }), ErrorCode::InvalidConfig);
    EXPECT_EQ(error_code([] { split(table_of(3), 1.0); }), ErrorCode::InvalidConfig);
}

TEST(Mse, Examples)
{
    EXPECT_EQ(mse(Series{1, 2, 3}, Series{1, 2, 3}), 0.0);
    EXPECT_EQ(mse(Series{0, 0}, Series{1, 1}), 1.0);
    EXPECT_EQ(mse(Series{1, 3}, Series{2, 1}), 2.5);
    EXPECT_EQ(error_code([] { mse(Series{1}, Series{1, 2}); }), ErrorCode::LengthMismatch);
    EXPECT_EQ(error_code([] { mse(Series{}, Series{}); }), ErrorCode::EmptySeries);
}

TEST(RSquared, Examples)
{
    EXPECT_EQ(r_squared(Series{1, 2, 3}, Series{1, 2, 3}), 1.0);
    EXPECT_EQ(r_squared(Series{3, 2, 1}, Series{1, 2, 3}), -3.0);
    EXPECT_NEAR(r_squared(Series{2, 2, 2}, Series{1, 2, 3}), 0.0, 1e-12);
    EXPECT_EQ(error_code([] { r_squared(Series{1, 1}, Series{5, 5}); }), ErrorCode::ConstantActual);
    EXPECT_EQ(error_code([] { r_squared(Series{1, 2}, Series{1, 2, 3}); }), ErrorCode::LengthMismatch);
    EXPECT_EQ(error_code([] { r_squared(Series{1}, Series{1}); }), ErrorCode::TooFewRows);
}

TEST(MetricsProperty, Identities)
{
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-100.0, 100.0);
    for (int k = 0; k < 200; ++k) {
        Series x(2 + rng() % 30);
        Series y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = u(rng);
            y[i] = u(rng);
        }
        ASSERT_EQ(mse(x, x), 0.0);
        ASSERT_GE(mse(x, y), 0.0);
        ASSERT_EQ(r_squared(x, x), 1.0);
        ASSERT_LE(r_squared(y, x), 1.0);

        double mean = 0.0;
        for (double v : x) {
            mean += v;
        }
        mean /= static_cast<double>(x.size());
        ASSERT_NEAR(r_squared(Series(x.size(), mean), x), 0.0, 1e-12);
    }
}

TEST(Evaluate, CombinesBoth)
{
    auto m = evaluate(Series{1, 3}, Series{2, 1});
    EXPECT_EQ(m.mse, 2.5);
    EXPECT_EQ(m.r2, 1.0 - 5.0 / 0.5);
}

TEST(RateOfChange, Examples)
{
    EXPECT_EQ(rate_of_change(Series{100, 103}), Series{0.03});
    EXPECT_EQ(rate_of_change(Series{7, 7, 7, 7}), (Series{0, 0, 0}));
    EXPECT_EQ(rate_of_change(Series{4, 2, -1}), (Series{-0.5, -1.5}));
    EXPECT_EQ(error_code([] { rate_of_change(Series{0, 5}); }), ErrorCode::ZeroBase);
    EXPECT_EQ(error_code([] { rate_of_change(Series{5}); }), ErrorCode::TooFewRows);
    // A zero in the last position is never a base.
    EXPECT_EQ(rate_of_change(Series{5, 0}), Series{-1});
}

TEST(SelectFeatures, DropsConstantColumnsAndKeepsOrder)
{
    ObservationTable t;
    t.periods = {"a", "b"};
    t.columns = {{ConceptId::VP, {1, 2}}, {ConceptId::TC, {3, 3}}, {ConceptId::CAP, {0, 1}}};
    t.profit = {0, 1};
    std::vector<ConceptId> wanted{ConceptId::CAP, ConceptId::TC, ConceptId::VP};
    EXPECT_EQ(select_features(t, wanted), (std::vector<ConceptId>{ConceptId::CAP, ConceptId::VP}));

    std::vector<ConceptId> missing{ConceptId::EM};
    EXPECT_EQ(error_code([&] { select_features(t, missing); }), ErrorCode::MissingColumn);

    std::vector<ConceptId> chosen{ConceptId::CAP, ConceptId::VP};
    EXPECT_EQ(feature_rows(t, chosen), (std::vector<Series>{{0, 1}, {1, 2}}));
}
