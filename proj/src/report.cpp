#include "assettax/report.hpp"

#include <cstdio>
#include <iomanip>
#include <sstream>

namespace assettax {

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

nlohmann::json report_to_json(const RevenueReport& report,
                              const PolicyConfig& config) {
  nlohmann::json assets = nlohmann::json::array();
  for (const TreatmentResult& t : report.treatments) {
    nlohmann::json entry{
        {"id", t.asset_id},
        {"category", to_string(t.category)},
        {"recurring_tax_flow", t.recurring_tax_flow},
        {"prize_paid", t.prize_paid},
        {"residual_private_value", t.residual_private_value},
        {"abolished", t.abolished},
        {"revenue_channels",
         {{"property_tax_pv", t.revenue_channels.property_tax_pv},
          {"severance_auction_pv", t.revenue_channels.severance_auction_pv},
          {"one_time_levy", t.revenue_channels.one_time_levy}}},
    };
    if (t.mortgagor_tax_flow != 0.0) {
      entry["owner_tax_flow"] = t.owner_tax_flow;
      entry["mortgagor_tax_flow"] = t.mortgagor_tax_flow;
    }
    if (t.assessor_award_pv != 0.0) {
      entry["assessor_award_pv"] = t.assessor_award_pv;
    }
    if (t.category == AssetCategory::mineral_deposit &&
        t.revenue_channels.severance_auction_pv > 0.0) {
      entry["auction_pv"] = config.mineral_auction_fraction *
                            t.revenue_channels.severance_auction_pv;
      entry["severance_pv"] = (1.0 - config.mineral_auction_fraction) *
                              t.revenue_channels.severance_auction_pv;
    }
    assets.push_back(std::move(entry));
  }

  nlohmann::json by_category;
  for (const auto& [category, totals] : report.by_category) {
    by_category[to_string(category)] = {
        {"asset_count", totals.asset_count},
        {"recurring_tax_flow", totals.recurring_tax_flow},
        {"revenue_pv", totals.revenue_pv},
        {"prizes_paid", totals.prizes_paid}};
  }

  nlohmann::json j{
      {"assets", std::move(assets)},
      {"by_category", std::move(by_category)},
      {"totals",
       {{"recurring_tax_flow", report.total_recurring_tax_flow},
        {"property_tax_pv", report.total_property_tax_pv},
        {"severance_auction_pv", report.total_severance_auction_pv},
        {"one_time_levy", report.total_one_time_levy},
        {"prizes_paid", report.total_prizes},
        {"assessor_awards", report.total_assessor_awards},
        {"access_fees_flow", report.total_access_fees},
        {"net_public_revenue_pv", report.net_public_revenue_pv}}},
      {"abolished", report.abolished_assets},
  };
  if (report.welfare_weighted_residual) {
    j["totals"]["welfare_weighted_residual"] =
        *report.welfare_weighted_residual;
  }
  return j;
}

namespace {

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::string report_to_text(const RevenueReport& report,
                           const PolicyConfig& config) {
  std::ostringstream os;
  os << std::left << std::setw(18) << "asset" << std::setw(30) << "category"
     << std::right << std::setw(14) << "tax flow" << std::setw(14) << "prize"
     << std::setw(14) << "residual" << std::setw(14) << "revenue pv"
     << "  treatment\n";
  os << std::string(110, '-') << "\n";
  for (const TreatmentResult& t : report.treatments) {
    const char* treatment =
        t.abolished
            ? "abolished"
            : (t.prize_paid > 0.0
                   ? (t.recurring_tax_flow > 0.0 ||
                              t.revenue_channels.severance_auction_pv > 0.0
                          ? "prize + tax"
                          : "prize")
                   : (t.recurring_tax_flow > 0.0 ||
                              t.revenue_channels.one_time_levy > 0.0
                          ? "taxed"
                          : "exempt"));
    os << std::left << std::setw(18) << t.asset_id << std::setw(30)
       << to_string(t.category) << std::right << std::setw(14)
       << short_num(t.recurring_tax_flow) << std::setw(14)
       << short_num(t.prize_paid) << std::setw(14)
       << short_num(t.residual_private_value) << std::setw(14)
       << short_num(t.revenue_channels.total()) << "  " << treatment << "\n";
  }
  os << std::string(110, '-') << "\n";
  for (const auto& [category, totals] : report.by_category) {
    os << std::left << std::setw(30) << to_string(category) << std::right
       << " assets " << std::setw(2) << totals.asset_count << "  tax flow "
       << std::setw(12) << short_num(totals.recurring_tax_flow)
       << "  revenue pv " << std::setw(12) << short_num(totals.revenue_pv)
       << "  prizes " << std::setw(12) << short_num(totals.prizes_paid)
       << "\n";
  }
  os << std::string(110, '-') << "\n";
  os << "recurring tax flow/period: " << short_num(report.total_recurring_tax_flow)
     << "\n";
  os << "property tax PV:           " << short_num(report.total_property_tax_pv)
     << "\n";
  os << "severance + auction PV:    "
     << short_num(report.total_severance_auction_pv) << "\n";
  os << "one-time levies:           " << short_num(report.total_one_time_levy)
     << "\n";
  os << "prizes paid:               " << short_num(report.total_prizes) << "\n";
  os << "assessor awards:           " << short_num(report.total_assessor_awards)
     << "\n";
  if (report.total_access_fees != 0.0) {
    os << "access fees/period:        " << short_num(report.total_access_fees)
       << " (priced restricted activities; outside asset channels)\n";
  }
  os << "net public revenue (PV):   " << short_num(report.net_public_revenue_pv)
     << "\n";
  if (report.welfare_weighted_residual) {
    os << "welfare-weighted residual: "
       << short_num(*report.welfare_weighted_residual) << "\n";
  }
  if (!report.abolished_assets.empty()) {
    os << "abolished:";
    for (const std::string& id : report.abolished_assets) os << " " << id;
    os << "\n";
  }
  os << "(land tax rate " << short_num(config.land_tax_rate)
     << "/period, discount rate " << short_num(config.discount_rate)
     << "/period)\n";
  return os.str();
}

std::string schedule_to_csv(const IntegratedSchedule& schedule) {
  std::ostringstream os;
  os << "x,marginal,total,regime_flag\n";
  for (std::size_t i = 0; i < schedule.grid().size(); ++i) {
    os << format_full(schedule.grid()[i]) << ","
       << format_full(schedule.marginals()[i]) << ","
       << format_full(schedule.totals()[i]) << ","
       << (schedule.regimes()[i] == Regime::ok ? 0 : 1) << "\n";
  }
  return os.str();
}

std::string steady_states_to_csv(const std::vector<AgentSolution>& solutions) {
  std::ostringstream os;
  os << "agent,schedule,innovation_flow,wealth,consumption,flow_utility,"
        "pv_utility,boundary\n";
  for (const AgentSolution& s : solutions) {
    os << s.name << "," << s.schedule << ","
       << format_full(s.state.innovation_flow) << ","
       << format_full(s.state.wealth) << ","
       << format_full(s.state.consumption) << ","
       << format_full(s.state.flow_utility) << ","
       << format_full(s.state.pv_utility) << "," << (s.state.boundary ? 1 : 0)
       << "\n";
  }
  return os.str();
}

nlohmann::json steady_states_to_json(
    const std::vector<AgentSolution>& solutions) {
  nlohmann::json arr = nlohmann::json::array();
  for (const AgentSolution& s : solutions) {
    arr.push_back({{"agent", s.name},
                   {"schedule", s.schedule},
                   {"innovation_flow", s.state.innovation_flow},
                   {"wealth", s.state.wealth},
                   {"consumption", s.state.consumption},
                   {"flow_utility", s.state.flow_utility},
                   {"pv_utility", s.state.pv_utility},
                   {"boundary", s.state.boundary}});
  }
  return nlohmann::json{{"steady_states", std::move(arr)}};
}

std::string steady_states_to_text(
    const std::vector<AgentSolution>& solutions) {
  std::ostringstream os;
  os << std::left << std::setw(16) << "agent" << std::setw(20) << "schedule"
     << std::right << std::setw(12) << "s" << std::setw(12) << "k"
     << std::setw(12) << "c" << std::setw(14) << "flow util" << std::setw(14)
     << "pv util"
     << "  note\n";
  os << std::string(102, '-') << "\n";
  for (const AgentSolution& s : solutions) {
    os << std::left << std::setw(16) << s.name << std::setw(20) << s.schedule
       << std::right << std::setw(12) << short_num(s.state.innovation_flow)
       << std::setw(12) << short_num(s.state.wealth) << std::setw(12)
       << short_num(s.state.consumption) << std::setw(14)
       << short_num(s.state.flow_utility) << std::setw(14)
       << short_num(s.state.pv_utility)
       << (s.state.boundary ? "  boundary" : "") << "\n";
  }
  return os.str();
}

}  // namespace assettax
