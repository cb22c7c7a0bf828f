#include "slumber/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <ostream>
#include <set>
#include <thread>

#include <json.hpp>

#include "slumber/csv.hpp"
#include "slumber/error.hpp"
#include "slumber/format.hpp"
#include "slumber/synth.hpp"

namespace slumber {
namespace fs = std::filesystem;

namespace {

std::string opt_int(const std::optional<int>& v) {
  return v ? std::to_string(*v) : std::string();
}

std::string opt_num(const std::optional<double>& v) {
  return v ? format_fixed6(*v) : std::string("NA");
}

std::ofstream open_output(const RunConfig& config, const char* name) {
  auto path = config.output_dir / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const char* name) {
  out.flush();
  if (!out) throw Error(ErrorKind::Io, std::string("write failed for ") + name);
}

void prepare_output(const RunConfig& config) {
  if (config.output_dir.empty()) throw Error(ErrorKind::Io, "no output directory (--out)");
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec || !fs::is_directory(config.output_dir))
    throw Error(ErrorKind::Io, "cannot create " + config.output_dir.string());
}

void print_report(const ValidationReport& report, std::ostream& log) {
  for (const auto& issue : report)
    log << (issue.severity == Severity::Error ? "error" : "warning") << ": "
        << (issue.entity_id.empty() ? "" : issue.entity_id + ": ") << issue.message << '\n';
}

/// Loaded, validated dataset plus profiles; shared by the analysis commands.
struct Session {
  Dataset dataset;
  std::vector<CurveProfile> profiles;
  std::map<std::string, const CurveProfile*> by_id;
};

struct DataFailure {};

Session open_session(const RunConfig& config, std::ostream& log, bool need_profiles = true) {
  config.validate();
  if (config.dataset_dir.empty()) throw Error(ErrorKind::Io, "no dataset directory (--dataset)");
  if (!fs::is_directory(config.dataset_dir))
    throw Error(ErrorKind::Io, "dataset directory not found: " + config.dataset_dir.string());
  auto loaded = load_dataset(config.dataset_dir, config.cohort.window_end);
  auto report = validate_dataset(loaded.dataset);
  if (loaded.clipped_rows)
    report.push_back({Severity::Warning, "",
                      std::to_string(loaded.clipped_rows) +
                          " citation rows after window_end ignored"});
  if (has_errors(report)) {
    print_report(report, log);
    throw DataFailure{};
  }
  Session s;
  s.dataset = std::move(loaded.dataset);
  if (need_profiles) {
    std::vector<std::string> warnings;
    s.profiles = compute_profiles(s.dataset, resolve_threads(config.threads), &warnings);
    for (const auto& w : warnings) log << "warning: " << w << '\n';
    for (const auto& p : s.profiles) s.by_id.emplace(p.paper_id, &p);
  }
  return s;
}

int run(std::ostream& log, const std::function<void()>& body) {
  try {
    body();
    return kExitOk;
  } catch (const DataFailure&) {
    return kExitData;
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::Io ? kExitIo : kExitData;
  } catch (const fs::filesystem_error& e) {
    log << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitData;
  }
}

CohortResult cohorts_for(const Session& s, const RunConfig& config) {
  return select_cohorts(s.profiles, config.cohort);
}

std::vector<PatentFlags> flags_for(std::span<const std::string> ids,
                                   const std::map<std::string, PatentIndicators>& ind) {
  std::vector<PatentFlags> out;
  for (const auto& id : ids) out.push_back(patent_flags(ind.at(id)));
  return out;
}

std::vector<PatentIndicators> indicators_for(std::span<const std::string> ids,
                                             const std::map<std::string, PatentIndicators>& ind) {
  std::vector<PatentIndicators> out;
  for (const auto& id : ids) out.push_back(ind.at(id));
  return out;
}

std::vector<PaperRecord> papers_for(std::span<const std::string> ids, const Dataset& ds) {
  std::vector<PaperRecord> out;
  for (const auto& id : ids) out.push_back(ds.papers.at(id));
  return out;
}

}  // namespace

// Computation ------------------------------------------------------------------

std::vector<CurveProfile> compute_profiles(const Dataset& dataset, unsigned threads,
                                           std::vector<std::string>* warnings) {
  std::vector<const CitationSeries*> work;
  for (const auto& [id, s] : dataset.series) {
    if (!dataset.papers.count(id)) continue;
    if (s.total == 0) {
      if (warnings) warnings->push_back(id + ": zero citations, skipped");
      continue;
    }
    if (s.counts.size() < 2) {
      if (warnings) warnings->push_back(id + ": fewer than two observed years, skipped");
      continue;
    }
    work.push_back(&s);
  }
  std::vector<CurveProfile> out(work.size());
  const std::size_t n_threads =
      std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, work.size() / 256));
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < work.size(); ++i) out[i] = profile(*work[i]);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < work.size(); i += n_threads) out[i] = profile(*work[i]);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::map<std::string, PatentIndicators> compute_all_indicators(
    const Dataset& dataset, std::span<const CurveProfile> profiles) {
  std::map<std::string, std::vector<PatentCitationLink>> links_by_paper;
  for (const auto& l : dataset.links) links_by_paper[l.paper_id].push_back(l);
  std::map<std::string, PatentIndicators> out;
  static const std::vector<PatentCitationLink> none;
  for (const auto& p : profiles) {
    auto it = links_by_paper.find(p.paper_id);
    const auto& links = it == links_by_paper.end() ? none : it->second;
    out.emplace(p.paper_id,
                compute_indicators(dataset.papers.at(p.paper_id), p, links, dataset.patents));
  }
  return out;
}

std::vector<IndicatorComparison> build_comparison(std::span<const PatentFlags> group_a,
                                                  std::span<const PatentFlags> group_b,
                                                  const std::string& label_a,
                                                  const std::string& label_b) {
  if (group_a.empty() || group_b.empty())
    throw Error(ErrorKind::InvalidCounts, "comparison groups must be non-empty");
  using Getter = bool (*)(const PatentFlags&);
  const std::pair<const char*, Getter> outcomes[] = {
      {"citing_patent_families", [](const PatentFlags& f) { return f.cited_by_patents; }},
      {"forward_citations_of_earliest_priority_patent",
       [](const PatentFlags& f) { return f.earliest_has_forward_cites; }},
      {"durability_of_patent_citing", [](const PatentFlags& f) { return f.durable; }},
  };
  std::vector<IndicatorComparison> out;
  for (const auto& [name, get] : outcomes) {
    auto count = [&](std::span<const PatentFlags> g) {
      return static_cast<std::int64_t>(std::count_if(g.begin(), g.end(), get));
    };
    const auto ka = count(group_a), kb = count(group_b);
    const auto na = static_cast<std::int64_t>(group_a.size());
    const auto nb = static_cast<std::int64_t>(group_b.size());
    IndicatorComparison c;
    c.indicator = name;
    c.label_a = label_a;
    c.label_b = label_b;
    c.a = stats::proportion_ci(ka, na);
    c.b = stats::proportion_ci(kb, nb);
    if (kb > 0) c.ratio_ab = stats::rate_ratio(ka, na, kb, nb);
    if (ka > 0) c.ratio_ba = stats::rate_ratio(kb, nb, ka, na);
    try {
      auto t = stats::two_proportion_test(ka, na, kb, nb);
      c.z = t.z;
      c.p = t.p_two_sided;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegeneratePool) throw;
    }
    out.push_back(std::move(c));
  }
  return out;
}

// Writers ----------------------------------------------------------------------

void write_profiles_csv(std::ostream& out, std::span<const CurveProfile> profiles) {
  out << "paper_id,pub_year,t_m,total_citations,bcp,turning_t,turning_year,turning_type\n";
  for (const auto& p : profiles) {
    out << csv::escape(p.paper_id) << ',' << p.base_year << ',' << p.t_max << ','
        << p.total_citations << ',' << format_fixed6(p.bcp) << ',' << p.turning_t << ','
        << p.turning_year << ',' << to_string(p.turning_type) << '\n';
  }
}

void write_cohort_csv(std::ostream& out, const CohortResult& r) {
  out << "paper_id,rank,bcp,cohort\n";
  const std::set<std::string> dr(r.dr_set.begin(), r.dr_set.end());
  const std::set<std::string> ir(r.ir_set.begin(), r.ir_set.end());
  for (std::size_t i = 0; i < r.ranked.size(); ++i) {
    const auto& p = r.ranked[i];
    // When the cohorts overlap (tiny pools) the delayed label wins.
    const char* label = dr.count(p.paper_id) ? "DR" : ir.count(p.paper_id) ? "IR" : "NONE";
    out << csv::escape(p.paper_id) << ',' << i + 1 << ',' << format_fixed6(p.bcp) << ','
        << label << '\n';
  }
}

void write_indicators_csv(std::ostream& out,
                          const std::map<std::string, PatentIndicators>& indicators) {
  out << "paper_id,n_families,earliest_filing_year,latest_filing_year,durability_years,"
         "forward_cites_of_earliest,first_citation_lag,relative_timing,timing_class\n";
  for (const auto& [id, ind] : indicators) {
    out << csv::escape(id) << ',' << ind.n_families << ',' << opt_int(ind.earliest_filing_year)
        << ',' << opt_int(ind.latest_filing_year) << ',' << ind.durability_years << ','
        << ind.forward_cites_of_earliest << ',' << opt_int(ind.first_citation_lag) << ','
        << opt_int(ind.relative_timing) << ','
        << (ind.n_families ? std::string(to_string(timing_classification(ind))) : "") << '\n';
  }
}

void write_comparison_csv(std::ostream& out, std::span<const IndicatorComparison> rows) {
  out << "indicator,group,yes,no,rate,ci_low,ci_high,rate_ratio,z,p\n";
  for (const auto& c : rows) {
    auto row = [&](const std::string& label, const stats::ProportionSummary& s,
                   const std::optional<double>& ratio, std::optional<double> z) {
      out << c.indicator << ',' << csv::escape(label) << ',' << s.successes << ','
          << s.trials - s.successes << ',' << format_fixed6(s.rate) << ','
          << format_fixed6(s.ci_low) << ',' << format_fixed6(s.ci_high) << ','
          << opt_num(ratio) << ',' << opt_num(z) << ',' << opt_num(c.p) << '\n';
    };
    row(c.label_a, c.a, c.ratio_ab, c.z);
    row(c.label_b, c.b, c.ratio_ba, c.z ? std::optional<double>(-*c.z) : std::nullopt);
  }
}

void write_matrix_csv(std::ostream& out, const InteractionMatrix& m) {
  out << "field_of_study,wipo_field_id,wipo_field_name,weight\n";
  for (const auto& [key, weight] : m.cells) {
    const auto& [field, id] = key;
    auto name = m.wipo_fields.count(id) ? m.wipo_fields.at(id).name : std::string();
    out << csv::escape(field) << ',' << id << ',' << csv::escape(name) << ',' << weight << '\n';
  }
}

void write_marginals_csv(std::ostream& out, const InteractionMatrix& m) {
  out << "axis,key,name,weight\n";
  for (const auto& [field, w] : m.row_totals)
    out << "field_of_study," << csv::escape(field) << ',' << csv::escape(field) << ',' << w << '\n';
  for (const auto& [id, w] : m.column_totals) {
    auto name = m.wipo_fields.count(id) ? m.wipo_fields.at(id).name : std::string();
    out << "wipo_field," << id << ',' << csv::escape(name) << ',' << w << '\n';
  }
}

void write_trend_csv_header(std::ostream& out) {
  out << "cohort,mode,window_start,window_end,mean_lag,n_obs\n";
}

void write_trend_rows(std::ostream& out, const std::string& cohort, const std::string& mode,
                      const stats::WindowedTrend& trend) {
  for (const auto& w : trend)
    out << cohort << ',' << mode << ',' << w.start << ',' << w.end << ','
        << format_fixed6(w.mean) << ',' << w.n_obs << '\n';
}

// Commands ---------------------------------------------------------------------

int cmd_validate(const RunConfig& config, std::ostream& log) {
  bool failed = false;
  int code = run(log, [&] {
    if (config.dataset_dir.empty()) throw Error(ErrorKind::Io, "no dataset directory (--dataset)");
    if (!fs::is_directory(config.dataset_dir))
      throw Error(ErrorKind::Io, "dataset directory not found: " + config.dataset_dir.string());
    auto loaded = load_dataset(config.dataset_dir, config.cohort.window_end);
    auto report = validate_dataset(loaded.dataset);
    if (loaded.clipped_rows)
      report.push_back({Severity::Warning, "",
                        std::to_string(loaded.clipped_rows) +
                            " citation rows after window_end ignored"});
    print_report(report, log);
    if (!config.output_dir.empty()) {
      prepare_output(config);
      auto out = open_output(config, "validation.csv");
      out << "severity,entity_id,message\n";
      for (const auto& i : report)
        out << (i.severity == Severity::Error ? "error" : "warning") << ','
            << csv::escape(i.entity_id) << ',' << csv::escape(i.message) << '\n';
      finish(out, "validation.csv");
    }
    failed = has_errors(report);
    log << report.size() << " issue(s)" << (failed ? ", dataset invalid" : ", dataset valid")
        << '\n';
  });
  if (code == kExitOk && failed) return kExitData;
  return code;
}

int cmd_profile(const RunConfig& config, std::ostream& log) {
  return run(log, [&] {
    auto s = open_session(config, log);
    prepare_output(config);
    auto out = open_output(config, "profiles.csv");
    write_profiles_csv(out, s.profiles);
    finish(out, "profiles.csv");
  });
}

int cmd_cohort(const RunConfig& config, std::ostream& log) {
  return run(log, [&] {
    auto s = open_session(config, log);
    auto cohorts = cohorts_for(s, config);
    prepare_output(config);
    auto out = open_output(config, "cohorts.csv");
    write_cohort_csv(out, cohorts);
    finish(out, "cohorts.csv");

    std::vector<std::pair<std::string, std::int64_t>> totals;
    for (const auto& r : cohorts.ranked)
      totals.emplace_back(r.paper_id, s.by_id.at(r.paper_id)->total_citations);
    auto pct = citation_percentile(totals);
    const std::set<std::string> dr(cohorts.dr_set.begin(), cohorts.dr_set.end());
    const std::set<std::string> ir(cohorts.ir_set.begin(), cohorts.ir_set.end());
    auto pout = open_output(config, "percentiles.csv");
    pout << "paper_id,total_citations,percentile,cohort\n";
    for (const auto& [id, total] : totals)
      pout << csv::escape(id) << ',' << total << ',' << format_fixed6(pct.at(id)) << ','
           << (dr.count(id) ? "DR" : ir.count(id) ? "IR" : "NONE") << '\n';
    finish(pout, "percentiles.csv");
    log << cohorts.eligible_count << " eligible, " << cohorts.dr_set.size() << " DR, "
        << cohorts.ir_set.size() << " IR\n";
  });
}

int cmd_patents(const RunConfig& config, std::ostream& log) {
  return run(log, [&] {
    auto s = open_session(config, log);
    auto ind = compute_all_indicators(s.dataset, s.profiles);
    prepare_output(config);
    auto out = open_output(config, "indicators.csv");
    write_indicators_csv(out, ind);
    finish(out, "indicators.csv");
  });
}

int cmd_table1(const RunConfig& config, std::ostream& log) {
  return run(log, [&] {
    auto s = open_session(config, log);
    auto cohorts = cohorts_for(s, config);
    auto ind = compute_all_indicators(s.dataset, s.profiles);
    auto rows = build_comparison(flags_for(cohorts.dr_set, ind), flags_for(cohorts.ir_set, ind),
                                 "DR", "IR");
    for (const auto& r : rows) {
      if (!r.z) log << "warning: " << r.indicator << ": DegeneratePool, no test\n";
      if (!r.ratio_ab) log << "warning: " << r.indicator << ": ZeroBaseline, no rate ratio\n";
    }
    prepare_output(config);
    auto out = open_output(config, "comparison.csv");
    write_comparison_csv(out, rows);
    finish(out, "comparison.csv");
  });
}

int cmd_lag_trend(const RunConfig& config, std::ostream& log) {
  return run(log, [&] {
    auto s = open_session(config, log);
    auto cohorts = cohorts_for(s, config);
    auto ind = compute_all_indicators(s.dataset, s.profiles);
    prepare_output(config);
    auto trend = open_output(config, "lag_trend.csv");
    auto summary = open_output(config, "lag_summary.csv");
    write_trend_csv_header(trend);
    summary << "cohort,mode,n,min,max,median,sd\n";

    struct Job {
      const char* cohort;
      const std::vector<std::string>* ids;
      LagMode mode;
      const char* mode_name;
    };
    const Job jobs[] = {
        {"DR", &cohorts.dr_set, LagMode::PubToFirstPatent, "pub_to_first_patent"},
        {"IR", &cohorts.ir_set, LagMode::FirstPatentToTurning, "first_patent_to_turning"},
    };
    for (const auto& job : jobs) {
      auto lags = lag_series(indicators_for(*job.ids, ind), job.mode);
      std::vector<stats::YearValue> points;
      std::vector<double> values;
      for (const auto& l : lags) {
        points.push_back({l.pub_year, static_cast<double>(l.lag)});
        values.push_back(l.lag);
      }
      write_trend_rows(trend, job.cohort, job.mode_name,
                       stats::moving_window_mean(points, config.window_width));
      if (values.empty()) {
        log << "warning: " << job.cohort << " cohort has no patent-linked papers\n";
        continue;
      }
      auto sum = stats::summary_stats(values);
      summary << job.cohort << ',' << job.mode_name << ',' << sum.n << ','
              << format_fixed6(sum.min) << ',' << format_fixed6(sum.max) << ','
              << format_fixed6(sum.median) << ',' << opt_num(sum.sd) << '\n';
    }
    finish(trend, "lag_trend.csv");
    finish(summary, "lag_summary.csv");
  });
}

int cmd_interactions(const RunConfig& config, std::ostream& log) {
  return run(log, [&] {
    auto s = open_session(config, log);
    auto cohorts = cohorts_for(s, config);
    auto ind = compute_all_indicators(s.dataset, s.profiles);
    prepare_output(config);
    auto dist_out = open_output(config, "field_distribution.csv");
    dist_out << "cohort,field_of_study,papers,percent,total_papers,total_assignments\n";
    for (const auto& [label, ids] :
         {std::pair{"DR", &cohorts.dr_set}, std::pair{"IR", &cohorts.ir_set}}) {
      auto papers = papers_for(*ids, s.dataset);
      auto dist = field_distribution(papers);
      for (const auto& [field, n] : dist.counts)
        dist_out << label << ',' << csv::escape(field) << ',' << n << ','
                 << format_fixed6(dist.percent(field)) << ',' << dist.total_papers << ','
                 << dist.total_assignments << '\n';

      auto build = interaction_matrix(papers, ind, s.dataset.patents, s.dataset.concordance);
      for (const auto& w : build.warnings) log << "warning: " << w << '\n';
      const std::string suffix = std::string("_") + label + ".csv";
      auto mname = "interactions" + suffix;
      auto margname = "marginals" + suffix;
      auto mout = open_output(config, mname.c_str());
      write_matrix_csv(mout, build.matrix);
      finish(mout, mname.c_str());
      auto gout = open_output(config, margname.c_str());
      write_marginals_csv(gout, build.matrix);
      finish(gout, margname.c_str());
    }
    finish(dist_out, "field_distribution.csv");
  });
}

int cmd_aagr(const RunConfig& config, std::ostream& log) {
  return run(log, [&] {
    auto s = open_session(config, log);
    auto cohorts = cohorts_for(s, config);
    prepare_output(config);
    auto out = open_output(config, "aagr.csv");
    out << "paper_id,cohort,base_year,end_year,method,value_percent,skipped_years\n";
    for (const auto& [label, ids] :
         {std::pair{"DR", &cohorts.dr_set}, std::pair{"IR", &cohorts.ir_set}}) {
      for (const auto& id : *ids) {
        const auto& prof = *s.by_id.at(id);
        const auto& series = s.dataset.series.at(id);
        if (prof.turning_year >= series.end_year()) {
          log << "warning: " << id << ": turning year at window end, no AAGR\n";
          continue;
        }
        std::vector<std::pair<Year, double>> yearly;
        for (int t = 0; t <= series.t_max(); ++t)
          yearly.emplace_back(series.base_year + t,
                              static_cast<double>(series.counts[static_cast<std::size_t>(t)]));
        for (auto method : config.aagr_methods) {
          try {
            auto r = stats::aagr(yearly, prof.turning_year, series.end_year(), method);
            out << csv::escape(id) << ',' << label << ',' << r.base_year << ',' << r.end_year
                << ',' << to_string(method) << ',' << format_fixed6(r.value_percent) << ','
                << r.skipped_years << '\n';
          } catch (const Error& e) {
            if (e.kind() != ErrorKind::AllDenominatorsZero && e.kind() != ErrorKind::ZeroBase)
              throw;
            log << "warning: " << id << ": " << e.what() << '\n';
          }
        }
      }
    }
    finish(out, "aagr.csv");
  });
}

int cmd_flag_contexts(const RunConfig& config, std::ostream& log) {
  return run(log, [&] {
    auto s = open_session(config, log, false);
    const auto& terms =
        config.negative_terms.empty() ? default_negative_terms() : config.negative_terms;
    std::vector<CitationContextRecord> contexts;
    if (s.dataset.contexts) contexts = *s.dataset.contexts;
    else log << "warning: no " << dataset_files::kContexts << " in dataset\n";
    auto flagged = flag_citation_contexts(contexts, terms);
    prepare_output(config);
    auto out = open_output(config, "flagged_contexts.jsonl");
    for (const auto& f : flagged) {
      nlohmann::json j = {{"citing_id", f.record.citing_id},
                          {"cited_paper_id", f.record.cited_paper_id},
                          {"year", f.record.year},
                          {"sentence", f.record.sentence},
                          {"matched_terms", f.matched_terms}};
      out << j.dump() << '\n';
    }
    finish(out, "flagged_contexts.jsonl");
    log << flagged.size() << " of " << contexts.size() << " contexts flagged\n";
  });
}

int cmd_synth(const SynthSpec& spec, const fs::path& out_dir, std::ostream& log) {
  return run(log, [&] {
    if (out_dir.empty()) throw Error(ErrorKind::Io, "no output directory (--out)");
    auto data = synth::generate(spec);
    synth::write_dataset(data, out_dir);
    log << data.papers.size() << " papers, " << data.patents.size() << " patent families, "
        << data.links.size() << " links written to " << out_dir.string() << '\n';
  });
}

}  // namespace slumber
