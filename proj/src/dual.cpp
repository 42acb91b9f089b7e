#include "lrdual/dual.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "compensated.hpp"
#include "lrdual/errors.hpp"

namespace lrdual {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLogFloor = -745.0;

double safe_log(double a) { return a > 0.0 ? std::log(a) : kNegInf; }

// log(alpha_j) and log(1 - alpha_j) for every index, with exact zeros (alpha_j == 1) flagged separately.
struct LogSurvival {
    std::vector<double> log_alpha;
    std::vector<double> log_keep;  // finite entries only; 0 where alpha == 1
    std::vector<char> annihilates;
};

LogSurvival log_survival(std::span<const double> alphas) {
    const std::size_t n = alphas.size();
    LogSurvival out{std::vector<double>(n), std::vector<double>(n, 0.0), std::vector<char>(n, 0)};
    for (std::size_t j = 0; j < n; ++j) {
        out.log_alpha[j] = safe_log(alphas[j]);
        if (alphas[j] == 1.0)
            out.annihilates[j] = 1;
        else
            out.log_keep[j] = std::log1p(-alphas[j]);
    }
    return out;
}

// Row of length t (0-based indices 0..t-1) built from a suffix sum that never
// subtracts large prefix sums, so small coefficients keep full relative precision.
void fill_row(const LogSurvival& surv, std::size_t t, DualCoefficients& row) {
    row.t = t;
    row.log_c.resize(t);
    detail::CompensatedSum suffix;
    std::size_t zeros = 0;
    for (std::size_t k = t; k-- > 0;) {
        row.log_c[k] = zeros > 0 ? kNegInf : suffix.value() + surv.log_alpha[k];
        if (surv.annihilates[k])
            ++zeros;
        else
            suffix.add(surv.log_keep[k]);
    }
}

}  // namespace

SmoothingSequence::SmoothingSequence(std::vector<double> alphas) : alphas_(std::move(alphas)) {
    if (alphas_.empty()) throw ValidationError("alphas", "smoothing sequence must be non-empty");
    if (alphas_.front() != 1.0) throw DomainError("alpha_1 must equal 1 (initial weights seed the average)");
    for (std::size_t j = 1; j < alphas_.size(); ++j) {
        const double a = alphas_[j];
        if (!(a >= 0.0 && a <= 1.0))
            throw DomainError("alpha_" + std::to_string(j + 1) + " = " + std::to_string(a) + " outside [0, 1]");
    }
}

SmoothingSequence SmoothingSequence::from_schedule(const ScheduleSpec& spec, double weight_decay) {
    const std::vector<double> step_alphas = alpha_curve(spec, weight_decay);
    return from_step_alphas(step_alphas);
}

SmoothingSequence SmoothingSequence::from_step_alphas(std::span<const double> step_alphas) {
    std::vector<double> alphas;
    alphas.reserve(step_alphas.size() + 1);
    alphas.push_back(1.0);
    alphas.insert(alphas.end(), step_alphas.begin(), step_alphas.end());
    return SmoothingSequence(std::move(alphas));
}

SmoothingSequence SmoothingSequence::prefix(std::size_t length) const {
    if (length == 0 || length > alphas_.size()) throw ValidationError("length", "prefix length out of range");
    return SmoothingSequence(std::vector<double>(alphas_.begin(), alphas_.begin() + static_cast<std::ptrdiff_t>(length)));
}

std::vector<double> DualCoefficients::c() const {
    std::vector<double> out(log_c.size());
    for (std::size_t i = 0; i < log_c.size(); ++i) out[i] = log_c[i] < kLogFloor ? 0.0 : std::exp(log_c[i]);
    return out;
}

double DualCoefficients::sum() const {
    detail::CompensatedSum total;
    for (double v : c()) total.add(v);
    return total.value();
}

DualCoefficients coefficients_at(const SmoothingSequence& alphas) {
    const auto surv = log_survival(alphas.values());
    DualCoefficients row;
    fill_row(surv, alphas.size(), row);
    return row;
}

void for_each_coefficient_row(const SmoothingSequence& alphas,
                              const std::function<void(const DualCoefficients&)>& visit) {
    const auto surv = log_survival(alphas.values());
    DualCoefficients row;
    for (std::size_t t = 1; t <= alphas.size(); ++t) {
        fill_row(surv, t, row);
        visit(row);
    }
}

std::vector<DualCoefficients> coefficient_matrix(const SmoothingSequence& alphas) {
    std::vector<DualCoefficients> rows;
    rows.reserve(alphas.size());
    for_each_coefficient_row(alphas, [&](const DualCoefficients& row) { rows.push_back(row); });
    return rows;
}

double log_init_coefficient(const SmoothingSequence& alphas) {
    detail::CompensatedSum sum;
    for (std::size_t j = 1; j < alphas.size(); ++j) {
        if (alphas[j] == 1.0) return kNegInf;
        sum.add(std::log1p(-alphas[j]));
    }
    return sum.value();
}

double init_coefficient(const SmoothingSequence& alphas) {
    const double log_c = log_init_coefficient(alphas);
    return log_c < kLogFloor ? 0.0 : std::exp(log_c);
}

double init_coefficient_approx(double avg_alpha, std::size_t t) {
    if (!(avg_alpha >= 0.0 && avg_alpha < 1.0)) throw DomainError("average alpha must lie in [0, 1)");
    if (t < 1) throw DomainError("step count must be >= 1");
    return std::exp(static_cast<double>(t - 1) * std::log1p(-avg_alpha));
}

double average_alpha(const SmoothingSequence& alphas) {
    if (alphas.size() < 2) return 0.0;
    detail::CompensatedSum sum;
    for (std::size_t j = 1; j < alphas.size(); ++j) sum.add(alphas[j]);
    return sum.value() / static_cast<double>(alphas.size() - 1);
}

double timescale(double lr, double weight_decay) {
    if (weight_decay == 0.0) throw DomainError("weight decay is 0: the averaging timescale is infinite");
    if (!(lr > 0.0)) throw DomainError("timescale needs a positive learning rate");
    if (!(weight_decay > 0.0)) throw DomainError("timescale needs a positive weight decay");
    return 1.0 / (lr * weight_decay);
}

}  // namespace lrdual
