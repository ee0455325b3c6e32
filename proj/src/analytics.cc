#include "lectureqg/analytics.h"

#include <sstream>

#include "lectureqg/error.h"
#include "lectureqg/util.h"

namespace lqg {

using json = nlohmann::json;

namespace {

constexpr QuestionType kAllTypes[] = {QuestionType::kSaq, QuestionType::kBlq,
                                      QuestionType::kGfq, QuestionType::kMcq};

json optional_int(const std::optional<int>& v) {
  return v ? json(*v) : json(nullptr);
}

std::string csv_int(const std::optional<int>& v) {
  return v ? std::to_string(*v) : "";
}

}  // namespace

void VerdictCounts::add(Verdict v) {
  switch (v) {
    case Verdict::kGood: ++good; break;
    case Verdict::kAverage: ++average; break;
    case Verdict::kBad: ++bad; break;
  }
}

int round_percent(int64_t part, int64_t total) {
  if (total <= 0 || part < 0 || part > total) {
    throw Error(ErrorCode::kInvalidArgument, "bad percentage operands");
  }
  // floor(100 * part / total + 1/2) in integers.
  return static_cast<int>((200 * part + total) / (2 * total));
}

RatingSummary summarize_counts(const std::map<QuestionType, VerdictCounts>& c) {
  RatingSummary out;
  for (QuestionType t : kAllTypes) {
    TypeSummary s;
    auto it = c.find(t);
    if (it != c.end()) s.counts = it->second;
    const int64_t n = s.counts.total();
    if (n > 0) {
      s.good_pct = round_percent(s.counts.good, n);
      s.average_pct = round_percent(s.counts.average, n);
      s.bad_pct = round_percent(s.counts.bad, n);
      s.acceptable_pct = round_percent(s.counts.good + s.counts.average, n);
    }
    out.by_type[t] = s;
  }
  return out;
}

RatingSummary summarize_ratings(const std::vector<Rating>& ratings) {
  std::map<QuestionType, VerdictCounts> counts;
  for (const Rating& r : ratings) counts[r.qtype].add(r.verdict);
  return summarize_counts(counts);
}

KeywordLengthHistogram keyword_length_histogram(
    const std::vector<QuestionSet>& sets, const std::vector<Rating>& ratings) {
  std::map<std::string, Verdict> verdict_of;
  for (const Rating& r : effective_ratings(ratings)) {
    verdict_of[r.question_set_id] = r.verdict;
  }
  KeywordLengthHistogram h;
  for (const QuestionSet& s : sets) {
    if (s.qtype != QuestionType::kSaq || !s.keyword) continue;
    const int words = count_words(s.keyword->phrase);
    if (words < 1) continue;
    HistogramBin& bin = h.bins[s.keyword->origin][words];
    ++bin.sets;
    auto it = verdict_of.find(s.set_id);
    if (it == verdict_of.end()) {
      ++bin.unrated;
    } else {
      bin.rated.add(it->second);
    }
  }
  return h;
}

json rating_summary_to_json(const RatingSummary& s) {
  json out = json::object();
  for (const auto& [type, t] : s.by_type) {
    out[std::string(question_type_name(type))] = {
        {"counts",
         {{"good", t.counts.good},
          {"average", t.counts.average},
          {"bad", t.counts.bad},
          {"total", t.counts.total()}}},
        {"good_pct", optional_int(t.good_pct)},
        {"average_pct", optional_int(t.average_pct)},
        {"bad_pct", optional_int(t.bad_pct)},
        {"acceptable_pct", optional_int(t.acceptable_pct)}};
  }
  return out;
}

json histogram_to_json(const KeywordLengthHistogram& h) {
  json out = json::object();
  for (const auto& [origin, bins] : h.bins) {
    json rows = json::array();
    for (const auto& [len, bin] : bins) {
      rows.push_back({{"word_length", len},
                      {"sets", bin.sets},
                      {"good", bin.rated.good},
                      {"average", bin.rated.average},
                      {"bad", bin.rated.bad},
                      {"unrated", bin.unrated}});
    }
    out[std::string(keyword_origin_name(origin))] = std::move(rows);
  }
  return out;
}

std::string analytics_to_csv(const RatingSummary& s,
                             const KeywordLengthHistogram& h) {
  std::ostringstream os;
  os << "qtype,good,average,bad,total,good_pct,average_pct,bad_pct,"
        "acceptable_pct\n";
  for (const auto& [type, t] : s.by_type) {
    os << question_type_name(type) << ',' << t.counts.good << ','
       << t.counts.average << ',' << t.counts.bad << ',' << t.counts.total()
       << ',' << csv_int(t.good_pct) << ',' << csv_int(t.average_pct) << ','
       << csv_int(t.bad_pct) << ',' << csv_int(t.acceptable_pct) << '\n';
  }
  os << "\norigin,word_length,sets,good,average,bad,unrated\n";
  for (const auto& [origin, bins] : h.bins) {
    for (const auto& [len, bin] : bins) {
      os << keyword_origin_name(origin) << ',' << len << ',' << bin.sets << ','
         << bin.rated.good << ',' << bin.rated.average << ',' << bin.rated.bad
         << ',' << bin.unrated << '\n';
    }
  }
  return os.str();
}

}  // namespace lqg
