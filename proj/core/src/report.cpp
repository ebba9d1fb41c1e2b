#include "bargain/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bargain {

namespace {

constexpr std::string_view kHeader =
    "role,agent,#ALL,Avg.FBR,SNP,Share,#MI,deal_rate_MI,SNP_MI,#CI,deal_rate_CI,SNP_CI";

std::string fmt(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  // Avoid "-0.00".
  std::string s = buf;
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

std::string fmt(const std::optional<double>& v, int decimals, std::string_view missing) {
  return v ? fmt(*v, decimals) : std::string(missing);
}

std::optional<double> percent(const std::optional<double>& fraction) {
  if (!fraction) return std::nullopt;
  return *fraction * 100.0;
}

// Commas and quotes in agent labels would break the flat format.
std::string csv_field(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '"', '\'');
  return s;
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<double> parse_optional(const std::string& s) {
  if (s == "-" || s == "undef" || s.empty()) return std::nullopt;
  return std::stod(s);
}

std::string csv_row(const BenchmarkSummary& s, Role role) {
  const bool buyer = role == Role::Buyer;
  auto snp = [&](const ScopeStats& st) { return buyer ? st.snp_buyer : st.snp_seller; };
  std::ostringstream row;
  row << to_string(role) << ',' << csv_field(buyer ? s.buyer_label : s.seller_label) << ','
      << s.all.count << ',' << (buyer ? fmt(s.avg_fbr(), 6, "-") : "-") << ','
      << fmt(snp(s.all), 6) << ','
      << fmt(percent(buyer ? s.share_buyer() : s.share_seller()), 4, "undef") << ',' << s.mi.count
      << ',' << fmt(s.mi.deal_rate(), 6, "-") << ',' << fmt(snp(s.mi), 6) << ',' << s.ci.count << ','
      << fmt(s.ci.deal_rate(), 6, "-") << ',' << fmt(snp(s.ci), 6);
  return row.str();
}

}  // namespace

std::string summary_to_csv(const BenchmarkSummary& summary) {
  return std::string(kHeader) + "\n" + csv_row(summary, Role::Buyer) + "\n" +
         csv_row(summary, Role::Seller) + "\n";
}

BenchmarkSummary summary_from_csv(std::string_view csv) {
  BenchmarkSummary s;
  bool seen_header = false;
  bool seen_buyer = false;
  bool seen_seller = false;
  for (const auto& raw_line : split(csv, '\n')) {
    std::string line = raw_line;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!seen_header) {
      if (line != kHeader) throw std::runtime_error("summary header mismatch: " + line);
      seen_header = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 12) throw std::runtime_error("summary row needs 12 fields: " + line);
    const Role role = role_from_string(f[0]);
    auto fill = [&](ScopeStats& st, const std::string& count, const std::string& rate,
                    const std::string& snp) {
      st.count = std::stoi(count);
      const auto r = parse_optional(rate);
      st.deals = r ? static_cast<int>(std::llround(*r * st.count)) : 0;
      (role == Role::Buyer ? st.snp_buyer : st.snp_seller) = std::stod(snp);
    };
    fill(s.all, f[2], "-", f[4]);
    fill(s.mi, f[6], f[7], f[8]);
    fill(s.ci, f[9], f[10], f[11]);
    s.all.deals = s.mi.deals + s.ci.deals;  // ALL has no rate column
    if (role == Role::Buyer) {
      s.buyer_label = f[1];
      if (const auto fbr = parse_optional(f[3])) {
        s.fbr_count = s.all.count;
        s.fbr_sum = *fbr * s.all.count;
      }
      seen_buyer = true;
    } else {
      s.seller_label = f[1];
      seen_seller = true;
    }
  }
  if (!seen_buyer || !seen_seller) throw std::runtime_error("summary needs a buyer and a seller row");
  return s;
}

void write_summary(const BenchmarkSummary& summary, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write summary " + path.string());
  out << summary_to_csv(summary);
}

BenchmarkSummary read_summary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open summary " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return summary_from_csv(buf.str());
}

namespace {

std::string pad(std::string s, std::size_t width, bool left = false) {
  if (s.size() >= width) return s;
  return left ? s + std::string(width - s.size(), ' ') : std::string(width - s.size(), ' ') + s;
}

void render_role(std::ostringstream& out, std::vector<BenchmarkSummary>& summaries, Role role) {
  const bool buyer = role == Role::Buyer;
  auto snp = [&](const ScopeStats& st) { return buyer ? st.snp_buyer : st.snp_seller; };
  std::stable_sort(summaries.begin(), summaries.end(),
                   [&](const auto& a, const auto& b) { return snp(a.all) > snp(b.all); });

  std::size_t label_width = 6;
  for (const auto& s : summaries) {
    label_width = std::max(label_width, (buyer ? s.buyer_label : s.seller_label).size());
  }
  const std::string role_name = buyer ? "Buyer" : "Seller";
  out << pad(role_name, label_width, true) << " | " << pad("#", 5) << pad("Avg.FBR", 9)
      << pad(buyer ? "SNP_b" : "SNP_s", 10) << pad(buyer ? "Share_b" : "Share_s", 10) << " | "
      << pad("MI #", 5) << pad("Deal rate", 10) << pad(buyer ? "SNP_b" : "SNP_s", 10) << " | "
      << pad("CI #", 5) << pad("Deal rate", 10) << pad(buyer ? "SNP_b" : "SNP_s", 10) << '\n';
  out << std::string(label_width + 3 + 34 + 3 + 25 + 3 + 25, '-') << '\n';
  for (const auto& s : summaries) {
    const auto share = percent(buyer ? s.share_buyer() : s.share_seller());
    out << pad(buyer ? s.buyer_label : s.seller_label, label_width, true) << " | "
        << pad(std::to_string(s.all.count), 5) << pad(buyer ? fmt(s.avg_fbr(), 2, "-") : "-", 9)
        << pad(fmt(snp(s.all), 2), 10) << pad(share ? fmt(*share, 2) + "%" : "undef", 10)
        << " | " << pad(std::to_string(s.mi.count), 5) << pad(fmt(s.mi.deal_rate(), 4, "-"), 10)
        << pad(fmt(snp(s.mi), 2), 10) << " | " << pad(std::to_string(s.ci.count), 5)
        << pad(fmt(s.ci.deal_rate(), 4, "-"), 10) << pad(fmt(snp(s.ci), 2), 10) << '\n';
  }
}

}  // namespace

std::string render_report(std::vector<BenchmarkSummary> summaries) {
  std::ostringstream out;
  render_role(out, summaries, Role::Buyer);
  out << '\n';
  render_role(out, summaries, Role::Seller);
  return out.str();
}

std::string render_report(const BenchmarkSummary& summary) {
  return render_report(std::vector<BenchmarkSummary>{summary});
}

}  // namespace bargain
