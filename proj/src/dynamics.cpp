#include "langevin/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace langevin {

PhaseState PhaseState::zeros(std::size_t dim) {
  return {std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0),
          std::vector<double>(dim, 1.0)};
}

OUCoefficients ou_coefficients(double gamma, double dt, double kBT) {
  if (!(gamma > 0.0) || !(dt > 0.0) || !(kBT > 0.0)) {
    throw DomainError("ou_coefficients: gamma, dt and kBT must be positive");
  }
  const double gdt = gamma * dt;
  OUCoefficients c;
  c.c1 = std::exp(-gdt);
  // 1 - c1 and 1 - c1^2 via expm1.
  c.c2 = -std::expm1(-gdt) / gamma;
  c.c3 = std::sqrt(kBT * -std::expm1(-2.0 * gdt));
  return c;
}

bool is_diverged(const PhaseState& s) {
  const auto bad = [](double v) { return !(std::abs(v) <= kDivergenceThreshold); };
  return std::any_of(s.x.begin(), s.x.end(), bad) || std::any_of(s.p.begin(), s.p.end(), bad);
}

namespace {

StepStatus check(const PhaseState& s) { return is_diverged(s) ? StepStatus::Diverged : StepStatus::Ok; }

StepStatus check_positions(const PhaseState& s) {
  const auto bad = [](double v) { return !(std::abs(v) <= kDivergenceThreshold); };
  return std::any_of(s.x.begin(), s.x.end(), bad) ? StepStatus::Diverged : StepStatus::Ok;
}

}  // namespace

StepContext::StepContext(const Potential& model)
    : model_(&model),
      cached_x_(model.dimension()),
      cached_grad_(model.dimension()),
      noise_(model.dimension()) {}

std::span<const double> StepContext::gradient(std::span<const double> x) {
  if (valid_ && std::equal(x.begin(), x.end(), cached_x_.begin(), cached_x_.end())) {
    return cached_grad_;
  }
  cached_x_.assign(x.begin(), x.end());
  cached_grad_.resize(x.size());
  valid_ = false;
  model_->gradient(x, cached_grad_);
  valid_ = true;
  ++evaluations_;
  return cached_grad_;
}

std::span<double> StepContext::noise(std::size_t n) {
  if (noise_.size() < n) noise_.resize(n);
  return std::span<double>(noise_).first(n);
}

void ColoredNoiseCache::prime(NoiseStream& stream, std::size_t dim) {
  previous_R = stream.normal_vector(dim);
  primed = true;
}

void a_flow(PhaseState& s, double t) {
  for (std::size_t i = 0; i < s.x.size(); ++i) s.x[i] += t * s.p[i] / s.masses[i];
}

void b_flow(PhaseState& s, double t, StepContext& ctx) {
  const auto grad = ctx.gradient(s.x);
  for (std::size_t i = 0; i < s.p.size(); ++i) s.p[i] -= t * grad[i];
}

void o_flow(PhaseState& s, const OUCoefficients& coeffs, NoiseStream& stream, StepContext& ctx) {
  const auto r = ctx.noise(s.p.size());
  stream.fill_normal(r);
  for (std::size_t i = 0; i < s.p.size(); ++i) {
    s.p[i] = coeffs.c1 * s.p[i] + coeffs.c3 * std::sqrt(s.masses[i]) * r[i];
  }
}

SplittingScheme::SplittingScheme(std::string letters, LangevinParams params)
    : letters_(std::move(letters)), params_(params) {
  if (letters_.empty()) throw DomainError("splitting string must not be empty");
  std::array<int, 3> count{};
  for (char c : letters_) {
    switch (c) {
      case 'A': ++count[0]; break;
      case 'B': ++count[1]; break;
      case 'O': ++count[2]; break;
      default:
        throw DomainError(std::string("splitting string may only contain A, B, O; got '") + c + "'");
    }
  }
  if (!(params_.dt > 0.0)) throw DomainError("splitting step dt must be positive");
  for (char c : letters_) {
    const int n = count[c == 'A' ? 0 : c == 'B' ? 1 : 2];
    Op op{c, params_.dt / n, {}};
    if (c == 'O') op.ou = ou_coefficients(params_.gamma, op.duration, params_.kBT);
    ops_.push_back(op);
  }
}

std::vector<double> SplittingScheme::durations() const {
  std::vector<double> out;
  out.reserve(ops_.size());
  for (const Op& op : ops_) out.push_back(op.duration);
  return out;
}

StepStatus SplittingScheme::step(PhaseState& s, StepContext& ctx, NoiseStream& stream) const {
  for (const Op& op : ops_) {
    switch (op.letter) {
      case 'A': a_flow(s, op.duration); break;
      case 'B': b_flow(s, op.duration, ctx); break;
      default: o_flow(s, op.ou, stream, ctx); break;
    }
  }
  return check(s);
}

SplittingScheme compose_splitting(std::string_view letters, LangevinParams params) {
  return SplittingScheme(std::string(letters), params);
}

StepStatus step_baoab(PhaseState& s, StepContext& ctx, const LangevinParams& params,
                      const OUCoefficients& coeffs, NoiseStream& stream) {
  const double dt = params.dt;
  const std::size_t n = s.x.size();
  auto grad = ctx.gradient(s.x);
  for (std::size_t i = 0; i < n; ++i) s.p[i] = s.p[i] - dt * grad[i] / 2;
  for (std::size_t i = 0; i < n; ++i) s.x[i] = s.x[i] + dt * s.p[i] / s.masses[i] / 2;
  const auto r = ctx.noise(n);
  stream.fill_normal(r);
  for (std::size_t i = 0; i < n; ++i) {
    s.p[i] = coeffs.c1 * s.p[i] + coeffs.c3 * std::sqrt(s.masses[i]) * r[i];
  }
  for (std::size_t i = 0; i < n; ++i) s.x[i] = s.x[i] + dt * s.p[i] / s.masses[i] / 2;
  grad = ctx.gradient(s.x);
  for (std::size_t i = 0; i < n; ++i) s.p[i] = s.p[i] - dt * grad[i] / 2;
  return check(s);
}

StepStatus step_aboba(PhaseState& s, StepContext& ctx, const LangevinParams& params,
                      const OUCoefficients& coeffs, NoiseStream& stream) {
  const double dt = params.dt;
  const std::size_t n = s.x.size();
  for (std::size_t i = 0; i < n; ++i) s.x[i] = s.x[i] + dt * s.p[i] / s.masses[i] / 2;
  auto grad = ctx.gradient(s.x);
  for (std::size_t i = 0; i < n; ++i) s.p[i] = s.p[i] - dt * grad[i] / 2;
  const auto r = ctx.noise(n);
  stream.fill_normal(r);
  for (std::size_t i = 0; i < n; ++i) {
    s.p[i] = coeffs.c1 * s.p[i] + coeffs.c3 * std::sqrt(s.masses[i]) * r[i];
  }
  grad = ctx.gradient(s.x);
  for (std::size_t i = 0; i < n; ++i) s.p[i] = s.p[i] - dt * grad[i] / 2;
  for (std::size_t i = 0; i < n; ++i) s.x[i] = s.x[i] + dt * s.p[i] / s.masses[i] / 2;
  return check(s);
}

StepStatus step_spv(PhaseState& s, StepContext& ctx, const LangevinParams& params,
                    const OUCoefficients& coeffs, NoiseStream& stream) {
  const double dt = params.dt;
  const std::size_t n = s.x.size();
  for (std::size_t i = 0; i < n; ++i) s.x[i] = s.x[i] + dt * s.p[i] / s.masses[i] / 2;
  const auto grad = ctx.gradient(s.x);
  const auto r = ctx.noise(n);
  stream.fill_normal(r);
  for (std::size_t i = 0; i < n; ++i) {
    s.p[i] = coeffs.c1 * s.p[i] - coeffs.c2 * grad[i] + coeffs.c3 * std::sqrt(s.masses[i]) * r[i];
  }
  for (std::size_t i = 0; i < n; ++i) s.x[i] = s.x[i] + dt * s.p[i] / s.masses[i] / 2;
  return check(s);
}

StepStatus step_bbk(PhaseState& s, StepContext& ctx, const LangevinParams& params,
                    ColoredNoiseCache& cache, NoiseStream& stream) {
  const double dt = params.dt;
  const double gamma = params.gamma;
  const std::size_t n = s.x.size();
  if (!cache.primed) cache.prime(stream, n);
  // Each half kick carries sqrt(2 dt kBT gamma)/2.
  const double sigma = std::sqrt(2.0 * dt * params.kBT * gamma);
  auto grad = ctx.gradient(s.x);
  for (std::size_t i = 0; i < n; ++i) {
    s.p[i] = (1 - dt * gamma / 2) * s.p[i] - dt * grad[i] / 2 +
             sigma * std::sqrt(s.masses[i]) * cache.previous_R[i] / 2;
  }
  for (std::size_t i = 0; i < n; ++i) s.x[i] = s.x[i] + dt * s.p[i] / s.masses[i];
  stream.fill_normal(cache.previous_R);
  grad = ctx.gradient(s.x);
  for (std::size_t i = 0; i < n; ++i) {
    s.p[i] = (s.p[i] - dt * grad[i] / 2 + sigma * std::sqrt(s.masses[i]) * cache.previous_R[i] / 2) /
             (1 + dt * gamma / 2);
  }
  return check(s);
}

StepStatus step_euler_maruyama(PhaseState& s, StepContext& ctx, double h, double kBT,
                               NoiseStream& stream) {
  const std::size_t n = s.x.size();
  const double scale = std::sqrt(2 * kBT * h);
  const auto grad = ctx.gradient(s.x);
  const auto r = ctx.noise(n);
  stream.fill_normal(r);
  for (std::size_t i = 0; i < n; ++i) {
    s.x[i] = s.x[i] - h * grad[i] / s.masses[i] + scale * r[i] / std::sqrt(s.masses[i]);
  }
  return check_positions(s);
}

StepStatus step_baoab_limit(PhaseState& s, StepContext& ctx, ColoredNoiseCache& cache, double h,
                            double kBT, NoiseStream& stream) {
  const std::size_t n = s.x.size();
  if (!cache.primed) cache.prime(stream, n);
  const double scale = std::sqrt(kBT * h / 2);
  const auto grad = ctx.gradient(s.x);
  const auto r = ctx.noise(n);
  stream.fill_normal(r);
  for (std::size_t i = 0; i < n; ++i) {
    s.x[i] = s.x[i] - h * grad[i] / s.masses[i] +
             scale * (cache.previous_R[i] + r[i]) / std::sqrt(s.masses[i]);
    cache.previous_R[i] = r[i];
  }
  return check_positions(s);
}

namespace {

constexpr std::string_view kSplitPrefix = "split:";

class SchemeIntegrator final : public Integrator {
 public:
  using StepFn = StepStatus (*)(PhaseState&, StepContext&, const LangevinParams&,
                                const OUCoefficients&, NoiseStream&);

  SchemeIntegrator(std::string name, StepFn fn, const LangevinParams& params)
      : Integrator(std::move(name)),
        fn_(fn),
        params_(params),
        coeffs_(ou_coefficients(params.gamma, params.dt, params.kBT)) {}

  StepStatus step(PhaseState& s, StepContext& ctx, NoiseStream& stream) override {
    return fn_(s, ctx, params_, coeffs_, stream);
  }

 private:
  StepFn fn_;
  LangevinParams params_;
  OUCoefficients coeffs_;
};

class BBKIntegrator final : public Integrator {
 public:
  explicit BBKIntegrator(const LangevinParams& params) : Integrator("bbk"), params_(params) {
    if (!(params.dt > 0.0) || !(params.gamma > 0.0) || !(params.kBT > 0.0)) {
      throw DomainError("bbk: dt, gamma and kBT must be positive");
    }
  }

  StepStatus step(PhaseState& s, StepContext& ctx, NoiseStream& stream) override {
    return step_bbk(s, ctx, params_, cache_, stream);
  }

 private:
  LangevinParams params_;
  ColoredNoiseCache cache_;
};

class SplitIntegrator final : public Integrator {
 public:
  SplitIntegrator(std::string name, SplittingScheme scheme)
      : Integrator(std::move(name)), scheme_(std::move(scheme)) {}

  StepStatus step(PhaseState& s, StepContext& ctx, NoiseStream& stream) override {
    return scheme_.step(s, ctx, stream);
  }

 private:
  SplittingScheme scheme_;
};

class EulerMaruyamaIntegrator final : public Integrator {
 public:
  explicit EulerMaruyamaIntegrator(const LangevinParams& params)
      : Integrator("euler-maruyama"), h_(params.dt), kBT_(params.kBT) {}

  bool uses_momenta() const override { return false; }
  StepStatus step(PhaseState& s, StepContext& ctx, NoiseStream& stream) override {
    return step_euler_maruyama(s, ctx, h_, kBT_, stream);
  }

 private:
  double h_;
  double kBT_;
};

class LimitIntegrator final : public Integrator {
 public:
  explicit LimitIntegrator(const LangevinParams& params)
      : Integrator("baoab-limit"), h_(params.dt), kBT_(params.kBT) {}

  bool uses_momenta() const override { return false; }
  StepStatus step(PhaseState& s, StepContext& ctx, NoiseStream& stream) override {
    return step_baoab_limit(s, ctx, cache_, h_, kBT_, stream);
  }

 private:
  double h_;
  double kBT_;
  ColoredNoiseCache cache_;
};

}  // namespace

std::unique_ptr<Integrator> make_integrator(const std::string& method, const LangevinParams& params) {
  if (!(params.dt > 0.0)) throw DomainError("stepsize must be positive");
  if (!(params.kBT > 0.0)) throw DomainError("kBT must be positive");
  if (method == "baoab") return std::make_unique<SchemeIntegrator>(method, &step_baoab, params);
  if (method == "aboba") return std::make_unique<SchemeIntegrator>(method, &step_aboba, params);
  if (method == "spv") return std::make_unique<SchemeIntegrator>(method, &step_spv, params);
  if (method == "bbk") return std::make_unique<BBKIntegrator>(params);
  if (method == "euler-maruyama") return std::make_unique<EulerMaruyamaIntegrator>(params);
  if (method == "baoab-limit") return std::make_unique<LimitIntegrator>(params);
  if (method.starts_with(kSplitPrefix)) {
    return std::make_unique<SplitIntegrator>(
        method, compose_splitting(std::string_view(method).substr(kSplitPrefix.size()), params));
  }
  throw DomainError("unknown method '" + method + "'");
}

bool is_brownian_method(const std::string& method) {
  return method == "euler-maruyama" || method == "baoab-limit";
}

bool is_known_method(const std::string& method) {
  if (method == "baoab" || method == "aboba" || method == "spv" || method == "bbk" ||
      is_brownian_method(method)) {
    return true;
  }
  if (!method.starts_with(kSplitPrefix)) return false;
  const std::string_view letters = std::string_view(method).substr(kSplitPrefix.size());
  return !letters.empty() &&
         std::all_of(letters.begin(), letters.end(), [](char c) { return c == 'A' || c == 'B' || c == 'O'; });
}

}  // namespace langevin
