#include "tripchoice/pipeline/anchors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>

namespace tripchoice::pipeline {

namespace {

using std::chrono::sys_days;
using std::chrono::sys_seconds;

// Overlap in hours between [a, b) and the daily windows [from, to) in local
// clock minutes; a window with from > to wraps midnight.
double window_hours(sys_seconds a, sys_seconds b, int from, int to, bool weekdays_only) {
  double total = 0.0;
  for (auto day = std::chrono::floor<std::chrono::days>(a) - std::chrono::days(1); day <= b;
       day += std::chrono::days(1)) {
    const unsigned wd = std::chrono::weekday(day).c_encoding();
    if (weekdays_only && (wd == 0 || wd == 6)) continue;
    const sys_seconds ws = day + std::chrono::minutes(from);
    const sys_seconds we = day + std::chrono::minutes(to) + (to <= from ? std::chrono::days(1) : std::chrono::days(0));
    const sys_seconds lo = std::max(a, ws);
    const sys_seconds hi = std::min(b, we);
    if (hi > lo) total += static_cast<double>((hi - lo).count()) / 3600.0;
  }
  return total;
}

// A night belongs to the date on which it starts.
sys_days night_of(sys_seconds t) {
  return std::chrono::floor<std::chrono::days>(t - std::chrono::hours(12));
}

Anchor centroid(const std::vector<StayEpisode>& stays, const std::vector<int>& label, int c) {
  Anchor a;
  for (std::size_t i = 0; i < stays.size(); ++i) {
    if (label[i] != c) continue;
    a.lat += stays[i].lat;
    a.lon += stays[i].lon;
    ++a.stays;
  }
  a.lat /= static_cast<double>(a.stays);
  a.lon /= static_cast<double>(a.stays);
  return a;
}

}  // namespace

std::vector<int> cluster_stays(const std::vector<StayEpisode>& stays, double radius_m, std::size_t min_stays) {
  const std::size_t n = stays.size();
  std::vector<std::vector<std::size_t>> nbr(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (haversine_m(stays[i].lat, stays[i].lon, stays[j].lat, stays[j].lon) <= radius_m) nbr[i].push_back(j);
    }
  }
  std::vector<int> label(n, -1);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (label[i] != -1 || nbr[i].size() < min_stays) continue;
    const int c = next++;
    std::vector<std::size_t> queue{i};
    label[i] = c;
    while (!queue.empty()) {
      const std::size_t p = queue.back();
      queue.pop_back();
      if (nbr[p].size() < min_stays) continue;  // border stay
      for (std::size_t q : nbr[p]) {
        if (label[q] == -1) {
          label[q] = c;
          queue.push_back(q);
        }
      }
    }
  }
  return label;
}

AnchorResult infer_anchors(const std::vector<StayEpisode>& input, const AnchorConfig& cfg) {
  AnchorResult result;
  std::vector<StayEpisode> stays = input;
  std::sort(stays.begin(), stays.end(), [](const auto& a, const auto& b) { return a.start < b.start; });

  std::set<sys_days> days;
  for (const auto& s : stays) {
    days.insert(std::chrono::floor<std::chrono::days>(s.start.local()));
    days.insert(std::chrono::floor<std::chrono::days>(s.end.local()));
  }
  if (static_cast<int>(days.size()) < cfg.min_days) {
    result.flags.push_back("insufficient days");
    return result;
  }
  const std::vector<int> label = cluster_stays(stays, cfg.radius_m, cfg.min_stays);
  const int n_clusters = label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
  if (n_clusters == 0) {
    result.flags.push_back("no stay clusters");
    return result;
  }

  // Night evidence.
  std::vector<double> night_hours(n_clusters, 0.0);
  std::vector<std::set<sys_days>> nights(n_clusters);
  std::set<sys_days> all_nights;
  for (std::size_t i = 0; i < stays.size(); ++i) {
    const double h = window_hours(stays[i].start.local(), stays[i].end.local(), 22 * 60, 7 * 60, false);
    if (h <= 0.0) continue;
    const sys_days nd = night_of(stays[i].end.local() - std::chrono::seconds(1));
    all_nights.insert(nd);
    if (label[i] < 0) continue;
    night_hours[label[i]] += h;
    nights[label[i]].insert(nd);
  }
  // First and last stop of each local day.
  std::map<sys_days, std::pair<std::size_t, std::size_t>> first_last;
  for (std::size_t i = 0; i < stays.size(); ++i) {
    const sys_days d = std::chrono::floor<std::chrono::days>(stays[i].start.local());
    auto [it, inserted] = first_last.emplace(d, std::make_pair(i, i));
    if (!inserted) it->second.second = i;
  }
  std::vector<double> first_last_count(n_clusters, 0.0);
  for (const auto& [d, fl] : first_last) {
    if (label[fl.first] >= 0) first_last_count[label[fl.first]] += 1.0;
    if (label[fl.second] >= 0) first_last_count[label[fl.second]] += 1.0;
  }
  double total_night = 0.0;
  for (double h : night_hours) total_night += h;

  int home = -1;
  double best = 0.0;
  for (int c = 0; c < n_clusters; ++c) {
    const double s = cfg.home_night_hours * (total_night > 0 ? night_hours[c] / total_night : 0.0) +
                     cfg.home_nights * (all_nights.empty() ? 0.0 : static_cast<double>(nights[c].size()) / all_nights.size()) +
                     cfg.home_first_last * first_last_count[c] / (2.0 * static_cast<double>(first_last.size()));
    if (s > best) {
      best = s;
      home = c;
    }
  }
  if (home >= 0) {
    Anchor a = centroid(stays, label, home);
    a.score = best;
    result.home = a;
  } else {
    result.flags.push_back("home undefined");
  }

  // Weekday daytime evidence.
  std::vector<double> day_hours(n_clusters, 0.0);
  std::vector<std::set<sys_days>> workdays(n_clusters);
  std::vector<std::vector<double>> arrivals(n_clusters);
  std::set<sys_days> all_workdays;
  double total_day = 0.0;
  for (std::size_t i = 0; i < stays.size(); ++i) {
    const double h = window_hours(stays[i].start.local(), stays[i].end.local(), 9 * 60, 17 * 60, true);
    if (h <= 0.0) continue;
    const sys_days d = std::chrono::floor<std::chrono::days>(stays[i].start.local());
    all_workdays.insert(d);
    total_day += h;
    if (label[i] < 0) continue;
    day_hours[label[i]] += h;
    workdays[label[i]].insert(d);
    arrivals[label[i]].push_back(stays[i].start.local_minute_of_day());
  }
  int work = -1;
  best = 0.0;
  for (int c = 0; c < n_clusters; ++c) {
    if (c == home || static_cast<int>(workdays[c].size()) < cfg.min_workdays) continue;
    const auto& arr = arrivals[c];
    double mean = 0.0;
    for (double a : arr) mean += a;
    mean /= static_cast<double>(arr.size());
    double var = 0.0;
    for (double a : arr) var += (a - mean) * (a - mean);
    const double sd = arr.size() > 1 ? std::sqrt(var / static_cast<double>(arr.size() - 1)) : 0.0;
    const double regularity = 1.0 - std::min(1.0, sd / 120.0);
    const double s = cfg.work_day_hours * day_hours[c] / total_day +
                     cfg.work_days * static_cast<double>(workdays[c].size()) / all_workdays.size() +
                     cfg.work_regularity * regularity;
    if (s > best) {
      best = s;
      work = c;
    }
  }
  if (work >= 0) {
    Anchor a = centroid(stays, label, work);
    a.score = best;
    result.work = a;
  } else {
    result.flags.push_back("no work regularity");
  }
  return result;
}

std::vector<StayEpisode> stay_episodes(const std::vector<GpsEvent>& events, double min_minutes) {
  std::vector<StayEpisode> out;
  for (const Episode& e : episodes(events)) {
    if (e.kind != EventKind::Stay) continue;
    const double minutes = seconds_between(events[e.first].time, events[e.last].time) / 60.0;
    if (minutes < min_minutes) continue;
    StayEpisode s;
    for (std::size_t i = e.first; i <= e.last; ++i) {
      s.lat += events[i].lat;
      s.lon += events[i].lon;
    }
    const auto n = static_cast<double>(e.last - e.first + 1);
    s.lat /= n;
    s.lon /= n;
    s.start = events[e.first].time;
    s.end = events[e.last].time;
    out.push_back(s);
  }
  return out;
}

}  // namespace tripchoice::pipeline
