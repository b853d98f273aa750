#include "tripchoice/joint_rpsp.hpp"

#include <limits>
#include <unordered_map>

#include "tripchoice/errors.hpp"

namespace tripchoice {

namespace {

bool same_profile(const PersonProfile& a, const PersonProfile& b) {
  return a.migrant == b.migrant && a.full_time == b.full_time && a.student == b.student &&
         a.child_0_10 == b.child_0_10 && a.safe == b.safe &&
         a.cycling_friendly == b.cycling_friendly && a.car_owned == b.car_owned &&
         a.bike_owned == b.bike_owned && a.integration_raw == b.integration_raw;
}

}  // namespace

double PooledData::rp_sp_ratio() const {
  if (n_sp == 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(n_rp) / static_cast<double>(n_sp);
}

PooledData pool_rp_sp(const Dataset& rp, const Dataset& sp) {
  std::vector<PersonProfile> persons = rp.persons();
  std::unordered_map<std::string, std::size_t> where;
  for (std::size_t i = 0; i < persons.size(); ++i) where[persons[i].person_id] = i;
  for (const auto& p : sp.persons()) {
    auto it = where.find(p.person_id);
    if (it == where.end()) {
      where[p.person_id] = persons.size();
      persons.push_back(p);
    } else if (!same_profile(persons[it->second], p)) {
      throw DataError("person " + p.person_id + " has different profiles in RP and SP data");
    }
  }

  std::vector<ChoiceObservation> obs;
  obs.reserve(rp.num_observations() + sp.num_observations());
  PooledData out;
  for (const auto& o : rp.observations()) {
    if (o.source != Source::RP) throw DataError("observation " + o.obs_id + " in RP data is tagged SP");
    obs.push_back(o);
  }
  for (const auto& o : sp.observations()) {
    if (o.source != Source::SP) throw DataError("observation " + o.obs_id + " in SP data is tagged RP");
    obs.push_back(o);
  }
  out.n_rp = rp.num_observations();
  out.n_sp = sp.num_observations();
  out.scale_identified = out.n_sp > 0;
  out.data = Dataset(std::move(persons), std::move(obs));
  return out;
}

Dataset balanced_subsample(const Dataset& joint) {
  std::vector<bool> keep(joint.num_observations(), false);
  bool any_linked = false;
  for (std::size_t i = 0; i < joint.num_observations(); ++i) {
    const auto& o = joint.observations()[i];
    if (o.source == Source::SP) {
      keep[i] = true;
    } else if (o.sp_trigger) {
      keep[i] = true;
      any_linked = true;
    }
  }
  if (!any_linked) throw DataError("balanced subsample: no RP observation carries the sp_trigger flag");
  return joint.filter(keep);
}

}  // namespace tripchoice
