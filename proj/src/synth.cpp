#include "tripchoice/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "tripchoice/errors.hpp"
#include "tripchoice/mnl.hpp"
#include "tripchoice/mxl.hpp"
#include "tripchoice/utility.hpp"

namespace tripchoice {

namespace {

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t salt, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

double unit(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
}

bool bernoulli(std::mt19937_64& rng, double p) { return unit(rng) < p; }

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unit(rng); }

double normal(std::mt19937_64& rng) { return inverse_normal_cdf(unit(rng)); }

// Lognormal with the given mean and log-scale spread.
double lognormal_mean(std::mt19937_64& rng, double mean, double spread = 0.5) {
  return mean * std::exp(spread * normal(rng) - 0.5 * spread * spread);
}

std::string padded(const char* prefix, std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%04zu", prefix, n + 1);
  return buf;
}

struct ModeProfile {
  double distance_km;
  double ivtt_min;
};

constexpr std::array<ModeProfile, kNumModes> kTripMeans = {{
    {13.5, 20.7},  // car
    {4.2, 13.9},   // bus
    {5.2, 12.6},   // subway
    {32.6, 38.2},  // train
    {0.6, 9.3},    // walk
    {3.0, 12.9},   // bicycle
    {4.0, 15.0},   // e-mobility
}};

void draw_attributes(std::mt19937_64& rng, const PersonProfile& person, bool sp, ChoiceObservation& o) {
  for (Mode m : kAllModes) {
    AlternativeAttributes& a = o.at(m);
    const ModeProfile& mp = kTripMeans[index_of(m)];
    a.distance = lognormal_mean(rng, mp.distance_km);
    a.ivtt = lognormal_mean(rng, mp.ivtt_min);
    switch (m) {
      case Mode::Car:
        a.cost = 0.75 * a.distance + uniform(rng, 0.0, 7.6);
        a.available = person.car_owned;
        break;
      case Mode::Bus:
      case Mode::Subway:
      case Mode::Train: {
        a.cost = uniform(rng, 2.5, 4.0);
        a.walk_access = uniform(rng, 1.0, 15.0);
        const double p = m == Mode::Bus ? 0.9 : m == Mode::Subway ? 0.7 : 0.5;
        a.available = bernoulli(rng, p);
        break;
      }
      case Mode::Walk:
        a.available = true;
        break;
      case Mode::Bicycle:
        a.available = person.bike_owned;
        break;
      case Mode::EMobility:
        a.cost = uniform(rng, 1.0, 6.0);
        a.walk_access = uniform(rng, 1.0, 8.0);
        a.available = sp;
        break;
    }
  }
  if (o.num_available() < 2) o.at(Mode::Bus).available = true;
}

}  // namespace

double gumbel_from_uniform(double u) {
  if (!(u > 0.0 && u < 1.0)) throw NumericError("gumbel_from_uniform: argument outside (0, 1)");
  return -std::log(-std::log(u));
}

std::vector<PersonProfile> generate_population(std::size_t n_persons, const CovariateMarginals& m,
                                               std::uint64_t seed) {
  std::vector<PersonProfile> persons(n_persons);
  std::vector<double> raw(n_persons);
  for (std::size_t n = 0; n < n_persons; ++n) {
    auto rng = stream(seed, 0x5045, n);
    PersonProfile& p = persons[n];
    p.person_id = padded("P", n);
    p.migrant = bernoulli(rng, m.migrant);
    p.full_time = bernoulli(rng, m.full_time);
    p.student = bernoulli(rng, m.student);
    p.child_0_10 = bernoulli(rng, m.child_0_10);
    p.safe = bernoulli(rng, m.safe);
    p.cycling_friendly = bernoulli(rng, m.cycling_friendly);
    p.car_owned = bernoulli(rng, m.car_owned);
    p.bike_owned = bernoulli(rng, m.bike_owned);
    const double mean = p.migrant ? m.integration_mean_migrant : m.integration_mean_native;
    raw[n] = std::clamp(mean + m.integration_spread * normal(rng), 1.0, 10.0);
    p.integration_dims = {raw[n], raw[n], raw[n], raw[n]};
    p.integration_raw = raw[n];
  }
  if (n_persons > 0) {
    const std::vector<double> centred = center_integration(raw);
    for (std::size_t n = 0; n < n_persons; ++n) persons[n].integration_centred = centred[n];
  }
  return persons;
}

Dataset simulate_choices(const std::vector<PersonProfile>& persons, const ParameterVector& true_params,
                         const ModelSpec& spec, const SimulationOptions& options) {
  validate_spec(spec);
  check_params_in_spec(true_params, spec);
  const std::size_t n_sp = spec.joint() ? options.sp_per_person : 0;
  if (n_sp > options.rp_per_person) throw SpecError("more SP than RP observations per person");
  const double mu_sp = spec.joint() ? true_params[ParamId::ScaleSp] : 1.0;

  std::vector<ChoiceObservation> all;
  all.reserve(persons.size() * (options.rp_per_person + n_sp));
  for (std::size_t n = 0; n < persons.size(); ++n) {
    const PersonProfile& person = persons[n];
    auto rng = stream(options.seed, 0x4348, n);
    double beta_time = true_params[ParamId::Time];
    double beta_cost = true_params[ParamId::Cost];
    if (spec.mixed()) {
      const double zt = normal(rng);
      const double zc = normal(rng);
      const RandomCoefficients b = realize_random_params(zt, zc, person.migrant, true_params);
      beta_time = b.beta_time;
      beta_cost = b.beta_cost;
    }

    const std::size_t first = all.size();
    const std::size_t total = options.rp_per_person + n_sp;
    for (std::size_t t = 0; t < total; ++t) {
      const bool sp = t >= options.rp_per_person;
      ChoiceObservation o;
      o.person_id = person.person_id;
      o.obs_id = person.person_id + (sp ? "-SP-" : "-RP-") + padded("", t);
      o.source = sp ? Source::SP : Source::RP;
      o.purpose_work_study = bernoulli(rng, options.work_share);
      o.snow = bernoulli(rng, options.snow_share);
      o.weather = o.snow ? Weather::Snowy : static_cast<Weather>(rng() % 3);
      o.season = static_cast<Season>(rng() % 4);
      o.period = static_cast<Period>(rng() % 5);
      draw_attributes(rng, person, sp, o);

      const double mu = sp ? mu_sp : 1.0;
      double best = -std::numeric_limits<double>::infinity();
      for (Mode m : kAllModes) {
        if (!o.available(m)) continue;
        const AltDesign d = design_row(o, person, spec, m);
        double v = mu * (d.linear_utility(true_params) + beta_time * d.time_s + beta_cost * d.cost_s);
        if (options.noise) v += gumbel_from_uniform(unit(rng));
        if (v > best) {
          best = v;
          o.chosen = m;
        }
      }
      all.push_back(std::move(o));
    }
    // Each SP observation is linked to a distinct RP trip of the same person.
    for (std::size_t s = 0; s < n_sp; ++s) {
      std::size_t pick = first + static_cast<std::size_t>(rng() % options.rp_per_person);
      while (all[pick].sp_trigger) pick = first + (pick - first + 1) % options.rp_per_person;
      all[pick].sp_trigger = true;
    }
  }
  return Dataset(persons, std::move(all));
}

std::vector<RecoveryRow> recovery_report(const ParameterVector& truth, const EstimationResult& estimated) {
  std::vector<RecoveryRow> rows;
  for (const ParameterEstimate& e : estimated.rows) {
    if (!truth.has(e.id)) {
      throw SpecError("recovery report: " + std::string(param_name(e.id)) + " has no true value");
    }
    if (e.frozen) continue;
    RecoveryRow r;
    r.id = e.id;
    r.truth = truth[e.id];
    r.estimate = e.estimate;
    r.bias = e.estimate - r.truth;
    r.z = std::abs(r.bias) / e.robust_se;
    r.flagged = !(r.z <= 3.0);
    rows.push_back(r);
  }
  for (ParamId p : truth.ids()) {
    if (!estimated.row(p)) {
      throw SpecError("recovery report: " + std::string(param_name(p)) + " was not estimated");
    }
  }
  return rows;
}

}  // namespace tripchoice
