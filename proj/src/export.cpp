#include "eigenforce/export.hpp"

#include "eigenforce/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace eigenforce {

using nlohmann::json;

namespace {

std::string csv_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json real(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double real_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

json cplx(Complex z) { return json::array({real(z.real()), real(z.imag())}); }

Complex cplx_from(const json& j) { return {real_from(j.at(0)), real_from(j.at(1))}; }

const char* kind_name(CollisionKind k) {
  switch (k) {
    case CollisionKind::RealAxis: return "real_axis";
    case CollisionKind::Ambiguity: return "ambiguity";
    case CollisionKind::Both: return "both";
  }
  return "real_axis";
}

CollisionKind kind_from(const std::string& s) {
  if (s == "real_axis") return CollisionKind::RealAxis;
  if (s == "ambiguity") return CollisionKind::Ambiguity;
  if (s == "both") return CollisionKind::Both;
  throw Error(ErrorCode::ParseError, "unknown collision kind \"" + s + "\"");
}

bool same(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }
bool same(Complex a, Complex b) { return same(a.real(), b.real()) && same(a.imag(), b.imag()); }

bool same(const ForceBreakdown& a, const ForceBreakdown& b) {
  return same(a.inertial, b.inertial) && same(a.conjugate_term, b.conjugate_term) && same(a.others, b.others) &&
         same(a.total, b.total);
}

}  // namespace

ExportFormat parse_format(std::string_view name) {
  if (name == "csv") return ExportFormat::Csv;
  if (name == "json") return ExportFormat::Json;
  throw Error(ErrorCode::UnsupportedFormat, "unsupported export format \"" + std::string(name) + "\"");
}

void write_csv(const RunRecord& record, std::ostream& out) {
  out << "t,j,re_lambda,im_lambda,re_vel,im_vel,re_acc_total,im_acc_total,re_inertial,im_inertial,"
         "re_conj,im_conj,re_others,im_others,flags\n";
  for (const StepRecord& step : record.steps) {
    for (const TrackedValues& tv : step.tracked) {
      const ForceBreakdown& f = tv.force;
      out << csv_number(step.t) << ',' << tv.j;
      for (Complex z : {tv.lambda, tv.velocity, f.total, f.inertial, f.conjugate_term, f.others}) {
        out << ',' << csv_number(z.real()) << ',' << csv_number(z.imag());
      }
      out << ',' << tv.flags << '\n';
    }
  }
}

json record_to_json(const RunRecord& record, bool include_timestamp) {
  json j;
  const Provenance& p = record.provenance;
  j["provenance"] = {{"scenario", p.scenario}, {"config_hash", p.config_hash}, {"seed", p.seed},
                     {"version", p.version}};
  if (include_timestamp) j["provenance"]["timestamp"] = p.timestamp;
  j["dim"] = record.dim;
  j["tracked_indices"] = record.tracked_indices;
  j["collision_threshold"] = real(record.collision_threshold);
  j["stochastic"] = record.stochastic;

  json steps = json::array();
  for (const StepRecord& s : record.steps) {
    json js;
    js["t"] = real(s.t);
    json ev = json::array();
    for (Index i = 0; i < s.eigenvalues.size(); ++i) ev.push_back(cplx(s.eigenvalues(i)));
    js["eigenvalues"] = std::move(ev);
    js["permutation"] = s.permutation;
    js["partners"] = s.partners;
    json amb = json::array();
    for (const auto& [a, b] : s.ambiguous_pairs) amb.push_back({a, b});
    js["ambiguous_pairs"] = std::move(amb);
    js["match_cost"] = real(s.match_cost);
    js["identity_cost"] = real(s.identity_cost);
    js["trace"] = cplx(s.trace);
    json tracked = json::array();
    for (const TrackedValues& tv : s.tracked) {
      json jt = {{"j", tv.j},
                 {"lambda", cplx(tv.lambda)},
                 {"velocity", cplx(tv.velocity)},
                 {"inertial", cplx(tv.force.inertial)},
                 {"conjugate_term", cplx(tv.force.conjugate_term)},
                 {"others", cplx(tv.force.others)},
                 {"total", cplx(tv.force.total)},
                 {"flags", tv.flags}};
      if (tv.expected_force) jt["expected_force"] = cplx(*tv.expected_force);
      tracked.push_back(std::move(jt));
    }
    js["tracked"] = std::move(tracked);
    steps.push_back(std::move(js));
  }
  j["steps"] = std::move(steps);

  json events = json::array();
  for (const CollisionEvent& e : record.events) {
    events.push_back({{"t_lo", real(e.t_lo)},
                      {"t_hi", real(e.t_hi)},
                      {"first", e.first},
                      {"second", e.second},
                      {"min_imag", real(e.min_imag)},
                      {"kind", kind_name(e.kind)}});
  }
  j["events"] = std::move(events);
  return j;
}

RunRecord record_from_json(const json& j) {
  RunRecord r;
  try {
    const json& p = j.at("provenance");
    r.provenance.scenario = p.at("scenario").get<std::string>();
    r.provenance.config_hash = p.at("config_hash").get<std::uint64_t>();
    r.provenance.seed = p.at("seed").get<std::uint64_t>();
    r.provenance.version = p.at("version").get<std::string>();
    r.provenance.timestamp = p.value("timestamp", std::string());
    r.dim = j.at("dim").get<Index>();
    r.tracked_indices = j.at("tracked_indices").get<std::vector<Index>>();
    r.collision_threshold = real_from(j.at("collision_threshold"));
    r.stochastic = j.at("stochastic").get<bool>();
    for (const json& js : j.at("steps")) {
      StepRecord s;
      s.t = real_from(js.at("t"));
      const json& ev = js.at("eigenvalues");
      s.eigenvalues.resize(static_cast<Index>(ev.size()));
      for (std::size_t i = 0; i < ev.size(); ++i) s.eigenvalues(static_cast<Index>(i)) = cplx_from(ev[i]);
      s.permutation = js.at("permutation").get<std::vector<Index>>();
      s.partners = js.at("partners").get<std::vector<Index>>();
      for (const json& pr : js.at("ambiguous_pairs")) s.ambiguous_pairs.emplace_back(pr.at(0).get<Index>(), pr.at(1).get<Index>());
      s.match_cost = real_from(js.at("match_cost"));
      s.identity_cost = real_from(js.at("identity_cost"));
      s.trace = cplx_from(js.at("trace"));
      for (const json& jt : js.at("tracked")) {
        TrackedValues tv;
        tv.j = jt.at("j").get<Index>();
        tv.lambda = cplx_from(jt.at("lambda"));
        tv.velocity = cplx_from(jt.at("velocity"));
        tv.force.inertial = cplx_from(jt.at("inertial"));
        tv.force.conjugate_term = cplx_from(jt.at("conjugate_term"));
        tv.force.others = cplx_from(jt.at("others"));
        tv.force.total = cplx_from(jt.at("total"));
        tv.flags = jt.at("flags").get<std::uint32_t>();
        if (jt.contains("expected_force")) tv.expected_force = cplx_from(jt.at("expected_force"));
        s.tracked.push_back(std::move(tv));
      }
      r.steps.push_back(std::move(s));
    }
    for (const json& je : j.at("events")) {
      CollisionEvent e;
      e.t_lo = real_from(je.at("t_lo"));
      e.t_hi = real_from(je.at("t_hi"));
      e.first = je.at("first").get<Index>();
      e.second = je.at("second").get<Index>();
      e.min_imag = real_from(je.at("min_imag"));
      e.kind = kind_from(je.at("kind").get<std::string>());
      r.events.push_back(e);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("run record JSON: ") + e.what());
  }
  return r;
}

void export_record(const RunRecord& record, ExportFormat format, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  if (format == ExportFormat::Csv) {
    write_csv(record, out);
  } else {
    out << record_to_json(record).dump(1) << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

RunRecord import_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  return record_from_json(j);
}

bool records_equal(const RunRecord& a, const RunRecord& b, bool compare_timestamp) {
  const Provenance &pa = a.provenance, &pb = b.provenance;
  if (pa.scenario != pb.scenario || pa.config_hash != pb.config_hash || pa.seed != pb.seed ||
      pa.version != pb.version || (compare_timestamp && pa.timestamp != pb.timestamp)) {
    return false;
  }
  if (a.dim != b.dim || a.tracked_indices != b.tracked_indices || !same(a.collision_threshold, b.collision_threshold) ||
      a.stochastic != b.stochastic || a.steps.size() != b.steps.size() || a.events.size() != b.events.size()) {
    return false;
  }
  for (std::size_t k = 0; k < a.steps.size(); ++k) {
    const StepRecord &x = a.steps[k], &y = b.steps[k];
    if (!same(x.t, y.t) || x.eigenvalues.size() != y.eigenvalues.size() || x.permutation != y.permutation ||
        x.partners != y.partners || x.ambiguous_pairs != y.ambiguous_pairs || !same(x.match_cost, y.match_cost) ||
        !same(x.identity_cost, y.identity_cost) || !same(x.trace, y.trace) || x.tracked.size() != y.tracked.size()) {
      return false;
    }
    for (Index i = 0; i < x.eigenvalues.size(); ++i) {
      if (!same(x.eigenvalues(i), y.eigenvalues(i))) return false;
    }
    for (std::size_t q = 0; q < x.tracked.size(); ++q) {
      const TrackedValues &u = x.tracked[q], &v = y.tracked[q];
      if (u.j != v.j || u.flags != v.flags || !same(u.lambda, v.lambda) || !same(u.velocity, v.velocity) ||
          !same(u.force, v.force) || u.expected_force.has_value() != v.expected_force.has_value() ||
          (u.expected_force && !same(*u.expected_force, *v.expected_force))) {
        return false;
      }
    }
  }
  for (std::size_t e = 0; e < a.events.size(); ++e) {
    const CollisionEvent &x = a.events[e], &y = b.events[e];
    if (!same(x.t_lo, y.t_lo) || !same(x.t_hi, y.t_hi) || x.first != y.first || x.second != y.second ||
        !same(x.min_imag, y.min_imag) || x.kind != y.kind) {
      return false;
    }
  }
  return true;
}

}  // namespace eigenforce
