#include "taperspec/functionals.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace taperspec {
namespace {

double parse_double(std::string_view text, std::string_view context) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end)
    throw std::invalid_argument(fmt::format("weight '{}': cannot parse number '{}'", context, text));
  return value;
}

}  // namespace

WeightFunction WeightFunction::constant(double c) {
  const std::string id = c == 1.0 ? "one" : fmt::format("const:{}", c);
  return WeightFunction(WeightKind::constant, id, [c](double) { return std::complex<double>(c, 0.0); }, true,
                        true, std::numeric_limits<double>::infinity());
}

WeightFunction WeightFunction::cosine(int j) {
  if (j < 0) throw std::invalid_argument("cosine weight: j must be >= 0");
  std::vector<double> coefficients(static_cast<std::size_t>(j) + 1, 0.0);
  coefficients[j] = 1.0;
  auto w = cosine_poly(std::move(coefficients));
  w.id_ = fmt::format("cos:{}", j);
  return w;
}

WeightFunction WeightFunction::cosine_poly(std::vector<double> coefficients) {
  if (coefficients.empty()) throw std::invalid_argument("cosine_poly: no coefficients");
  const std::string id = fmt::format("cospoly:{}", fmt::join(coefficients, ","));
  return WeightFunction(
      WeightKind::cosine_poly, id,
      [a = std::move(coefficients)](double lambda) {
        double sum = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j)
          if (a[j] != 0.0) sum += a[j] * std::cos(static_cast<double>(j) * lambda);
        return std::complex<double>(sum, 0.0);
      },
      true, true, std::numeric_limits<double>::infinity());
}

WeightFunction WeightFunction::band(double a, double b) {
  if (!(0.0 <= a && a < b)) throw std::invalid_argument("band weight: need 0 <= a < b");
  return WeightFunction(
      WeightKind::indicator_band, fmt::format("band:{},{}", a, b),
      [a, b](double lambda) {
        const double x = std::abs(lambda);
        return std::complex<double>((a <= x && x <= b) ? 1.0 : 0.0, 0.0);
      },
      true, false, std::numeric_limits<double>::infinity());
}

WeightFunction WeightFunction::custom(Fn fn, std::string id, bool real_valued, bool continuous,
                                      std::optional<double> declared_q) {
  if (!fn) throw std::invalid_argument("custom weight: empty callable");
  return WeightFunction(WeightKind::custom, std::move(id), std::move(fn), real_valued, continuous, declared_q);
}

WeightFunction WeightFunction::parse(std::string_view spec) {
  if (spec == "one") return one();
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos)
    throw std::invalid_argument(fmt::format("unknown weight '{}' (expected one|const:c|cos:j|band:a,b)", spec));
  const auto head = spec.substr(0, colon);
  const auto body = spec.substr(colon + 1);
  if (head == "const") return constant(parse_double(body, spec));
  if (head == "cos") {
    const double j = parse_double(body, spec);
    if (j != std::floor(j) || j < 0) throw std::invalid_argument(fmt::format("weight '{}': j must be a nonnegative integer", spec));
    return cosine(static_cast<int>(j));
  }
  if (head == "band") {
    const auto comma = body.find(',');
    if (comma == std::string_view::npos)
      throw std::invalid_argument(fmt::format("weight '{}': expected band:a,b", spec));
    return band(parse_double(body.substr(0, comma), spec), parse_double(body.substr(comma + 1), spec));
  }
  throw std::invalid_argument(fmt::format("unknown weight '{}' (expected one|const:c|cos:j|band:a,b)", spec));
}

std::vector<FunctionalEstimate> estimate_batch(const PeriodogramGrid& pg, std::span<const WeightFunction> phis,
                                               std::span<const int> ks) {
  if (phis.empty() || phis.size() != ks.size())
    throw std::invalid_argument("estimate_batch: need |phis| == |ks| >= 1");
  const int N = pg.grid.size();
  const double w = pg.grid.weight();
  std::vector<FunctionalEstimate> out;
  out.reserve(phis.size());
  for (std::size_t i = 0; i < phis.size(); ++i) {
    const auto Ik = power(pg, ks[i]);
    std::complex<double> sum{0.0, 0.0};
    for (int j = 0; j < N; ++j) sum += phis[i](pg.grid[j]) * Ik[j];
    FunctionalEstimate est;
    est.value = w * sum;
    est.k = ks[i];
    est.T = pg.T;
    est.grid_N = N;
    est.provenance = Provenance::empirical;
    est.weight_warning = !phis[i].continuous();
    out.push_back(est);
  }
  return out;
}

std::vector<FunctionalEstimate> estimate_batch(const SamplePath& path, const Taper& taper,
                                               std::span<const WeightFunction> phis, std::span<const int> ks,
                                               const FrequencyGrid& grid) {
  return estimate_batch(periodogram_grid(path, taper, grid), phis, ks);
}

FunctionalEstimate estimate(const PeriodogramGrid& pg, const WeightFunction& phi, int k) {
  return estimate_batch(pg, std::span(&phi, 1), std::span(&k, 1)).front();
}

FunctionalEstimate estimate(const SamplePath& path, const Taper& taper, const WeightFunction& phi, int k,
                            const FrequencyGrid& grid) {
  return estimate(periodogram_grid(path, taper, grid), phi, k);
}

}  // namespace taperspec
