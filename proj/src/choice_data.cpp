#include "tripchoice/choice_data.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include "tripchoice/errors.hpp"

namespace tripchoice {

ScaledAttributes scale_attributes(const AlternativeAttributes& raw) {
  return {raw.cost / kCostScale, raw.ivtt / kTimeScale, raw.walk_access / kTimeScale,
          raw.distance / kDistanceScale};
}

AlternativeAttributes unscale_attributes(const ScaledAttributes& s, bool available) {
  return {s.cost * kCostScale, s.ivtt * kTimeScale, s.walk * kTimeScale,
          s.distance * kDistanceScale, available};
}

std::size_t ChoiceObservation::num_available() const {
  return static_cast<std::size_t>(std::count_if(
      attributes.begin(), attributes.end(), [](const auto& a) { return a.available; }));
}

void validate_observation(const ChoiceObservation& obs) {
  const std::string where = "observation '" + obs.obs_id + "'";
  if (!obs.available(obs.chosen)) throw DataError(where + ": chosen unavailable");
  if (obs.num_available() < 2) throw DataError(where + ": fewer than two alternatives available");
  if (obs.source == Source::RP && obs.available(Mode::EMobility)) {
    throw DataError(where + ": e-mobility offered in an RP observation");
  }
  for (Mode m : kAllModes) {
    const auto& a = obs.at(m);
    if (!a.available) continue;
    if (a.cost < 0 || a.ivtt < 0 || a.walk_access < 0 || a.distance < 0) {
      throw DataError(where + ": negative attribute for " + std::string(to_string(m)));
    }
    if (is_active(m) && a.cost != 0.0) {
      throw DataError(where + ": nonzero cost for " + std::string(to_string(m)));
    }
  }
}

Dataset::Dataset(std::vector<PersonProfile> persons, std::vector<ChoiceObservation> observations) {
  std::unordered_map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < persons.size(); ++i) {
    if (!by_id.emplace(persons[i].person_id, i).second) {
      throw DataError("duplicate person_id '" + persons[i].person_id + "'");
    }
  }
  std::vector<std::vector<std::size_t>> groups(persons.size());
  for (std::size_t i = 0; i < observations.size(); ++i) {
    auto it = by_id.find(observations[i].person_id);
    if (it == by_id.end()) {
      throw DataError("observation '" + observations[i].obs_id + "': unknown person_id '" +
                      observations[i].person_id + "'");
    }
    validate_observation(observations[i]);
    groups[it->second].push_back(i);
  }
  for (std::size_t p = 0; p < persons.size(); ++p) {
    if (groups[p].empty()) continue;
    const std::size_t idx = persons_.size();
    index_.emplace(persons[p].person_id, idx);
    offsets_.push_back(observations_.size());
    for (std::size_t i : groups[p]) {
      observations_.push_back(std::move(observations[i]));
      owner_.push_back(idx);
    }
    persons_.push_back(std::move(persons[p]));
  }
  offsets_.push_back(observations_.size());
}

std::span<const ChoiceObservation> Dataset::observations_of(std::size_t person) const {
  return {observations_.data() + offsets_[person], offsets_[person + 1] - offsets_[person]};
}

std::size_t Dataset::person_index(const std::string& person_id) const {
  auto it = index_.find(person_id);
  if (it == index_.end()) throw DataError("unknown person_id '" + person_id + "'");
  return it->second;
}

bool Dataset::has_person(const std::string& person_id) const { return index_.contains(person_id); }

std::size_t Dataset::count(Source s) const {
  return static_cast<std::size_t>(std::count_if(observations_.begin(), observations_.end(),
                                                [s](const auto& o) { return o.source == s; }));
}

Dataset Dataset::filter(const std::vector<bool>& keep) const {
  if (keep.size() != observations_.size()) throw DataError("filter mask size mismatch");
  std::vector<ChoiceObservation> obs;
  for (std::size_t i = 0; i < observations_.size(); ++i) {
    if (keep[i]) obs.push_back(observations_[i]);
  }
  return Dataset(persons_, std::move(obs));
}

std::vector<double> center_integration(std::span<const double> raw) {
  if (raw.empty()) throw DataError("cannot centre integration over an empty person list");
  for (double v : raw) {
    if (!(v >= 1.0 && v <= 10.0)) {
      throw DataError("integration index " + std::to_string(v) + " outside [1, 10]");
    }
  }
  const double mean = std::accumulate(raw.begin(), raw.end(), 0.0) / static_cast<double>(raw.size());
  std::vector<double> out(raw.size());
  std::transform(raw.begin(), raw.end(), out.begin(), [mean](double v) { return v - mean; });
  return out;
}

ModeAvailability build_availability(const PersonProfile& person, const RoutedModes& routed) {
  ModeAvailability a{};
  a[index_of(Mode::Car)] = (person.car_owned || person.car_observed) && routed.car;
  a[index_of(Mode::Bus)] = routed.bus;
  a[index_of(Mode::Subway)] = routed.subway;
  a[index_of(Mode::Train)] = routed.train;
  a[index_of(Mode::Walk)] = routed.walk;
  a[index_of(Mode::Bicycle)] = person.bike_owned;
  if (std::none_of(a.begin(), a.end(), [](bool b) { return b; })) {
    throw DataError("person '" + person.person_id + "': empty choice set");
  }
  return a;
}

namespace {

std::string loc(std::string_view table, std::size_t row) {
  // Header is line 1, so data row i is line i + 2.
  return std::string(table) + " row " + std::to_string(row + 2);
}

std::optional<double> optional_score(const std::vector<std::string>& row,
                                     std::optional<std::size_t> col, const std::string& where) {
  if (!col || row[*col].empty() || row[*col] == "NA") return std::nullopt;
  return parse_double(row[*col], where);
}

}  // namespace

std::vector<PersonProfile> persons_from_table(const Table& persons, bool require_car_observed) {
  constexpr std::string_view kPer = "persons";
  const std::size_t p_id = persons.require_column("person_id", kPer);
  const std::size_t p_mig = persons.require_column("migrant", kPer);
  const std::size_t p_ft = persons.require_column("full_time", kPer);
  const std::size_t p_stu = persons.require_column("student", kPer);
  const std::size_t p_child = persons.require_column("child_0_10", kPer);
  const std::size_t p_safe = persons.require_column("safe", kPer);
  const std::size_t p_cyc = persons.require_column("cyc_friendly", kPer);
  const std::size_t p_car = persons.require_column("car_owned", kPer);
  const auto p_car_obs = require_car_observed
                              ? std::optional(persons.require_column("car_observed", kPer))
                              : persons.column("car_observed");
  const std::size_t p_bike = persons.require_column("bike_owned", kPer);
  const auto p_econ = persons.column("integ_econ");
  const auto p_soc = persons.column("integ_soc");
  const auto p_civic = persons.column("integ_civic");
  const auto p_health = persons.column("integ_health");

  std::vector<PersonProfile> people;
  std::unordered_set<std::string> seen_people;
  for (std::size_t r = 0; r < persons.size(); ++r) {
    const auto& row = persons.rows()[r];
    const std::string where = loc(kPer, r);
    PersonProfile p;
    p.person_id = row[p_id];
    if (!seen_people.insert(p.person_id).second) {
      throw DataError(where + ": duplicate person_id '" + p.person_id + "'");
    }
    p.migrant = parse_bool01(row[p_mig], where);
    p.full_time = parse_bool01(row[p_ft], where);
    p.student = parse_bool01(row[p_stu], where);
    p.child_0_10 = parse_bool01(row[p_child], where);
    p.safe = parse_bool01(row[p_safe], where);
    p.cycling_friendly = parse_bool01(row[p_cyc], where);
    p.car_owned = parse_bool01(row[p_car], where);
    p.car_observed = p_car_obs && parse_bool01(row[*p_car_obs], where);
    p.bike_owned = parse_bool01(row[p_bike], where);
    p.integration_dims = {optional_score(row, p_econ, where), optional_score(row, p_soc, where),
                          optional_score(row, p_civic, where),
                          optional_score(row, p_health, where)};
    try {
      const IntegrationScore score = composite_index(p.integration_dims);
      p.integration_raw = score.value;
      p.integration_reweighted = score.reweighted;
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    }
    people.push_back(std::move(p));
  }
  return people;
}

Dataset load_dataset(const Table& observations, const Table& persons) {
  constexpr std::string_view kObs = "observations";

  std::vector<PersonProfile> people = persons_from_table(persons, true);
  std::unordered_set<std::string> known;
  for (const auto& p : people) known.insert(p.person_id);

  const std::size_t c_person = observations.require_column("person_id", kObs);
  const std::size_t c_obs = observations.require_column("obs_id", kObs);
  const std::size_t c_src = observations.require_column("source", kObs);
  const std::size_t c_alt = observations.require_column("alt", kObs);
  const std::size_t c_avail = observations.require_column("avail", kObs);
  const std::size_t c_chosen = observations.require_column("chosen", kObs);
  const std::size_t c_cost = observations.require_column("cost_cad", kObs);
  const std::size_t c_ivtt = observations.require_column("ivtt_min", kObs);
  const std::size_t c_walk = observations.require_column("walk_min", kObs);
  const std::size_t c_dist = observations.require_column("dist_km", kObs);
  const std::size_t c_ws = observations.require_column("purpose_ws", kObs);
  const std::size_t c_snow = observations.require_column("snow", kObs);
  const std::size_t c_weather = observations.require_column("weather", kObs);
  const std::size_t c_season = observations.require_column("season", kObs);
  const std::size_t c_period = observations.require_column("period", kObs);
  const auto c_trigger = observations.column("sp_trigger");

  struct Pending {
    ChoiceObservation obs;
    std::size_t first_row = 0;
    int chosen_rows = 0;
    std::array<bool, kNumModes> seen{};
  };
  std::vector<Pending> pending;
  std::unordered_map<std::string, std::size_t> by_obs;

  for (std::size_t r = 0; r < observations.size(); ++r) {
    const auto& row = observations.rows()[r];
    const std::string where = loc(kObs, r);
    const std::string& oid = row[c_obs];
    auto [it, inserted] = by_obs.emplace(oid, pending.size());
    if (inserted) {
      Pending p;
      p.first_row = r;
      p.obs.obs_id = oid;
      p.obs.person_id = row[c_person];
      if (!known.contains(p.obs.person_id)) {
        throw DataError(where + ": unknown person_id '" + p.obs.person_id + "'");
      }
      try {
        p.obs.source = parse_source(row[c_src]);
        p.obs.weather = parse_weather(row[c_weather]);
        p.obs.season = parse_season(row[c_season]);
        p.obs.period = parse_period(row[c_period]);
      } catch (const DataError& e) {
        throw DataError(where + ": " + e.what());
      }
      p.obs.purpose_work_study = parse_bool01(row[c_ws], where);
      p.obs.snow = parse_bool01(row[c_snow], where);
      pending.push_back(std::move(p));
    } else if (pending[it->second].obs.person_id != row[c_person]) {
      throw DataError(where + ": observation '" + oid + "' spans two persons");
    }
    Pending& p = pending[it->second];
    Mode alt;
    try {
      alt = parse_mode(row[c_alt]);
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    }
    if (p.seen[index_of(alt)]) {
      throw DataError(where + ": duplicate row for (obs_id '" + oid + "', alt '" +
                      std::string(to_string(alt)) + "')");
    }
    p.seen[index_of(alt)] = true;
    AlternativeAttributes& a = p.obs.at(alt);
    a.available = parse_bool01(row[c_avail], where);
    a.cost = parse_double(row[c_cost], where);
    a.ivtt = parse_double(row[c_ivtt], where);
    a.walk_access = parse_double(row[c_walk], where);
    a.distance = parse_double(row[c_dist], where);
    if (parse_bool01(row[c_chosen], where)) {
      ++p.chosen_rows;
      p.obs.chosen = alt;
      if (!a.available) throw DataError(where + ": chosen unavailable");
    }
    if (c_trigger && !row[*c_trigger].empty() && parse_bool01(row[*c_trigger], where)) {
      p.obs.sp_trigger = true;
    }
  }

  std::vector<ChoiceObservation> obs;
  obs.reserve(pending.size());
  for (auto& p : pending) {
    const std::string where = loc(kObs, p.first_row) + " (obs_id '" + p.obs.obs_id + "')";
    if (p.chosen_rows != 1) {
      throw DataError(where + ": expected exactly one chosen row, found " +
                      std::to_string(p.chosen_rows));
    }
    try {
      validate_observation(p.obs);
    } catch (const DataError& e) {
      throw DataError(where + ": " + e.what());
    }
    obs.push_back(std::move(p.obs));
  }

  Dataset grouped(std::move(people), std::move(obs));
  // Centre over the unique persons that remain after grouping.
  std::vector<PersonProfile> centred = grouped.persons();
  std::vector<double> raw;
  raw.reserve(centred.size());
  for (const auto& p : centred) raw.push_back(p.integration_raw);
  if (!raw.empty()) {
    const auto c = center_integration(raw);
    for (std::size_t i = 0; i < centred.size(); ++i) centred[i].integration_centred = c[i];
  }
  return Dataset(std::move(centred), grouped.observations());
}

Dataset load_dataset(const std::filesystem::path& observations,
                     const std::filesystem::path& persons) {
  if (!std::filesystem::exists(observations)) {
    throw DataError("observations file not found: " + observations.string());
  }
  if (!std::filesystem::exists(persons)) {
    throw DataError("persons file not found: " + persons.string());
  }
  return load_dataset(read_table(observations), read_table(persons));
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

std::string b01(bool b) { return b ? "1" : "0"; }

std::string opt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

}  // namespace

Table observations_table(const Dataset& data) {
  Table t({"person_id", "obs_id", "source", "alt", "avail", "chosen", "cost_cad", "ivtt_min",
           "walk_min", "dist_km", "purpose_ws", "snow", "weather", "season", "period",
           "sp_trigger"},
          {});
  for (const auto& o : data.observations()) {
    for (Mode m : kAllModes) {
      const auto& a = o.at(m);
      if (!a.available) continue;
      t.add_row({o.person_id, o.obs_id, std::string(to_string(o.source)),
                 std::string(to_string(m)), "1", b01(o.chosen == m), fmt(a.cost), fmt(a.ivtt),
                 fmt(a.walk_access), fmt(a.distance), b01(o.purpose_work_study), b01(o.snow),
                 std::string(to_string(o.weather)), std::string(to_string(o.season)),
                 std::string(to_string(o.period)), b01(o.sp_trigger)});
    }
  }
  return t;
}

Table persons_table(const Dataset& data) {
  Table t({"person_id", "migrant", "full_time", "student", "child_0_10", "safe", "cyc_friendly",
           "car_owned", "car_observed", "bike_owned", "integ_econ", "integ_soc", "integ_civic",
           "integ_health"},
          {});
  for (const auto& p : data.persons()) {
    t.add_row({p.person_id, b01(p.migrant), b01(p.full_time), b01(p.student), b01(p.child_0_10),
               b01(p.safe), b01(p.cycling_friendly), b01(p.car_owned), b01(p.car_observed),
               b01(p.bike_owned), opt(p.integration_dims.economic), opt(p.integration_dims.social),
               opt(p.integration_dims.civic), opt(p.integration_dims.health)});
  }
  return t;
}

}  // namespace tripchoice
