#include "tripchoice/utility.hpp"

#include <string>

#include "tripchoice/errors.hpp"

namespace tripchoice {
namespace {

class RowBuilder {
 public:
  RowBuilder(const ModelSpec& spec, AltDesign& row) : spec_(spec), row_(row) {}

  void add(ParamId p, double value) {
    if (!spec_.includes(p)) return;
    row_.terms[row_.num_terms++] = {p, value};
  }

 private:
  const ModelSpec& spec_;
  AltDesign& row_;
};

double b(bool flag) { return flag ? 1.0 : 0.0; }

}  // namespace

double AltDesign::linear_utility(const ParameterVector& params) const {
  double v = 0.0;
  for (const auto& t : linear_terms()) v += params[t.param] * t.value;
  return v;
}

AltDesign design_row(const ChoiceObservation& obs, const PersonProfile& person,
                     const ModelSpec& spec, Mode alt) {
  using P = ParamId;
  if (alt == Mode::EMobility && obs.source == Source::RP) {
    throw SpecError("observation '" + obs.obs_id + "': e-mobility is not an RP alternative");
  }
  const ScaledAttributes x = scale_attributes(obs.at(alt));
  const double integ = person.integration_centred;
  AltDesign row;
  row.alt = alt;
  row.time_s = x.ivtt;
  row.cost_s = is_active(alt) ? 0.0 : x.cost;
  RowBuilder r(spec, row);
  switch (alt) {
    case Mode::Car:
      r.add(P::DistCar, x.distance);
      r.add(P::WorkCar, b(obs.purpose_work_study));
      break;
    case Mode::Bus:
      r.add(P::AscBus, 1.0);
      r.add(P::Access, x.walk);
      r.add(P::DistPt, x.distance);
      r.add(P::ChildPt, b(person.child_0_10));
      r.add(P::IntegPt, integ);
      break;
    case Mode::Subway:
      r.add(P::AscSubway, 1.0);
      r.add(P::Access, x.walk);
      r.add(P::FullTimeSubway, b(person.full_time));
      r.add(P::SafeSubway, b(person.safe));
      r.add(P::ChildPt, b(person.child_0_10));
      r.add(P::MigSubway, b(person.migrant));
      r.add(P::IntegPt, integ);
      break;
    case Mode::Train:
      r.add(P::Access, x.walk);
      r.add(P::StudentTrain, b(person.student));
      r.add(P::DistTrain, x.distance);
      r.add(P::IntegPt, integ);
      break;
    case Mode::Walk:
      r.add(P::AscWalk, 1.0);
      r.add(P::StudentWalk, b(person.student));
      r.add(P::DistActive, x.distance);
      r.add(P::IntegActive, integ);
      r.add(P::SnowActive, b(obs.snow));
      break;
    case Mode::Bicycle:
      r.add(P::AscBike, 1.0);
      r.add(P::CycleBike, b(person.cycling_friendly));
      r.add(P::DistActive, x.distance);
      r.add(P::IntegActive, integ);
      r.add(P::SnowActive, b(obs.snow));
      break;
    case Mode::EMobility:
      r.add(P::AscEmob, 1.0);
      r.add(P::Access, x.walk);
      r.add(P::DistActive, x.distance);
      break;
  }
  return row;
}

void check_params_in_spec(const ParameterVector& params, const ModelSpec& spec) {
  const ParamMask extra = params.present() & ~spec.included;
  if (extra.none()) return;
  std::string msg = "variable not in spec " + spec.name + ":";
  for (std::size_t i = 0; i < kNumParams; ++i) {
    if (extra.test(i)) msg += " " + std::string(param_name(param_at(i)));
  }
  throw SpecError(msg);
}

double systematic_utility(const ChoiceObservation& obs, const PersonProfile& person,
                          const ParameterVector& params, double beta_time, double beta_cost,
                          const ModelSpec& spec, Mode alt) {
  check_params_in_spec(params, spec);
  const AltDesign row = design_row(obs, person, spec, alt);
  return row.linear_utility(params) + beta_time * row.time_s + beta_cost * row.cost_s;
}

double apply_sp_scale(double v, Source source, double mu_sp) {
  return source == Source::SP ? mu_sp * v : v;
}

std::size_t EstimationData::num_observations() const {
  std::size_t n = 0;
  for (const auto& p : persons) n += p.obs.size();
  return n;
}

std::size_t EstimationData::num_sp() const {
  std::size_t n = 0;
  for (const auto& p : persons) {
    for (const auto& o : p.obs) n += o.sp ? 1 : 0;
  }
  return n;
}

EstimationData compile(const Dataset& data, const ModelSpec& spec, const std::vector<bool>& keep) {
  if (!keep.empty() && keep.size() != data.num_observations()) {
    throw DataError("compile: keep mask size mismatch");
  }
  EstimationData out;
  out.spec = spec;
  out.num_persons_total = data.num_persons();
  out.persons.reserve(data.num_persons());
  for (std::size_t n = 0; n < data.num_persons(); ++n) {
    const PersonProfile& person = data.persons()[n];
    CompiledPerson cp;
    cp.person_index = n;
    cp.person_id = person.person_id;
    cp.migrant = person.migrant;
    const std::size_t offset = data.offset_of(n);
    const auto obs = data.observations_of(n);
    for (std::size_t t = 0; t < obs.size(); ++t) {
      const ChoiceObservation& o = obs[t];
      if (!keep.empty() && !keep[offset + t]) continue;
      if (o.source == Source::SP && !spec.joint()) continue;
      CompiledObservation co;
      co.source_index = offset + t;
      co.sp = o.source == Source::SP;
      for (Mode m : kAllModes) {
        if (!o.available(m)) continue;
        if (m == o.chosen) co.chosen = co.alts.size();
        co.alts.push_back(design_row(o, person, spec, m));
      }
      cp.obs.push_back(std::move(co));
    }
    out.persons.push_back(std::move(cp));
  }
  return out;
}

}  // namespace tripchoice
