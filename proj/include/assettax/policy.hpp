#pragma once

// Six-category asset policy engine: classifies assets, applies the
// prescribed treatment (tax / prize / abolish / exempt), computes the
// monopoly excess-value base and creation-cost conventions, and folds
// treatments into a revenue report.
//
// Revenue channels are stated as present values (a recurring flow f at
// discount rate rho is worth f / rho); TreatmentResult additionally
// carries the per-period recurring flow.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "assettax/schedule.hpp"
#include "assettax/valuation.hpp"

namespace assettax {

enum class AssetCategory {
  land_or_useful_privilege,
  useless_privilege,
  capital,
  intellectual_property,
  mineral_deposit,
  unregulated_natural_monopoly,
};

const char* to_string(AssetCategory c);

struct AssetRecord {
  std::string id;
  AssetCategory category = AssetCategory::land_or_useful_privilege;

  std::optional<double> income_flow;        // land: pre-tax rent per period
  std::optional<double> market_value;       // prize categories; monopolies
                                            // when publicly traded
  std::optional<double> takeover_bid;       // monopolies
  std::optional<double> pv_net_investment;  // monopolies
  std::optional<double> creation_cost;      // prize categories
  double mortgage_value = 0.0;
  // Useless privileges kept as priced activities: user-supplied flow
  // collected at a marginal-social-cost price after abolition. Reported
  // separately, never as an asset revenue channel.
  std::optional<double> restricted_activity_fee;

  void validate() const;  // category-specific field presence
  bool operator==(const AssetRecord&) const = default;
};

struct OneTimeCapitalLevy {
  double rate = 0.0;
  std::string justification;
  bool operator==(const OneTimeCapitalLevy&) const = default;
};

struct PolicyConfig {
  double land_tax_rate = 0.05;      // per period (default: monthly)
  double discount_rate = 0.005;     // per period
  double floor_multiplier = 3.0;    // prize floors
  double assessor_award_rate = 0.01;
  double mineral_auction_fraction = 0.5;  // auction vs severance split
  std::optional<OneTimeCapitalLevy> one_time_capital_levy;

  void validate() const;
  bool operator==(const PolicyConfig&) const = default;
};

// Conventional unit costs for creative effort.
struct CostConventions {
  double prospector_day = 500.0;
  double prose_word = 1.0;
  double children_prose_word = 2.0;
  double poetry_word = 5.0;
  double music_beat = 1.0;
  double art_sq_inch = 1.0;

  void validate() const;
  bool operator==(const CostConventions&) const = default;
};

enum class CreativeWorkKind {
  prospecting_day,
  prose_word,
  children_prose_word,
  poetry_word,
  music_beat,
  art_square_inch,
};

double creation_cost(CreativeWorkKind kind, double quantity,
                     const CostConventions& conventions);

// max(market value, highest takeover bid) - PV of net investment,
// clamped at zero (no monopoly element in a failing firm).
double monopoly_excess_value(double market_value, double takeover_bid,
                             double pv_net_investment);

double assessor_award(double taxes_collected, const PolicyConfig& config);

struct RevenueChannels {
  double property_tax_pv = 0.0;
  double severance_auction_pv = 0.0;
  double one_time_levy = 0.0;

  double total() const {
    return property_tax_pv + severance_auction_pv + one_time_levy;
  }
};

struct TreatmentResult {
  std::string asset_id;
  AssetCategory category = AssetCategory::land_or_useful_privilege;
  double recurring_tax_flow = 0.0;   // per period
  double prize_paid = 0.0;
  double residual_private_value = 0.0;
  bool abolished = false;
  RevenueChannels revenue_channels;
  // Split of recurring_tax_flow when a mortgage is recorded.
  double owner_tax_flow = 0.0;
  double mortgagor_tax_flow = 0.0;
  // Competitive-assessment monopolies only (no public market value).
  double assessor_award_pv = 0.0;
};

// Prize schedules by category, without per-asset floor anchoring
// (apply_policy re-anchors the floor at each asset's creation cost).
struct PrizeScheduleSet {
  std::optional<ScheduleParams> innovation;
  std::optional<ScheduleParams> mineral;
  std::optional<ScheduleParams> monopoly;
};

TreatmentResult apply_policy(const AssetRecord& asset,
                             const PolicyConfig& config,
                             const PrizeScheduleSet& schedules);

struct CategoryTotals {
  int asset_count = 0;
  double recurring_tax_flow = 0.0;
  double revenue_pv = 0.0;
  double prizes_paid = 0.0;
};

struct RevenueReport {
  std::vector<TreatmentResult> treatments;  // ordered by asset id
  std::map<AssetCategory, CategoryTotals> by_category;
  double total_recurring_tax_flow = 0.0;
  double total_property_tax_pv = 0.0;
  double total_severance_auction_pv = 0.0;
  double total_one_time_levy = 0.0;
  double total_prizes = 0.0;
  double total_assessor_awards = 0.0;
  double total_access_fees = 0.0;  // priced restricted activities, per period
  double net_public_revenue_pv = 0.0;
  std::vector<std::string> abolished_assets;
  // Present when the scenario supplies a welfare-weight profile: the sum
  // of g(value) * residual private value over assets with a value.
  std::optional<double> welfare_weighted_residual;
};

RevenueReport revenue_report(
    const std::vector<AssetRecord>& assets, const PolicyConfig& config,
    const PrizeScheduleSet& schedules,
    const WelfareWeightProfile* welfare_weights = nullptr,
    const DistributionModel* welfare_model = nullptr);

// Table 2 characteristics row: value sources and access efficiency.
struct AssetCharacteristics {
  bool rent_source = false;       // nature or society
  bool effort_source = false;     // human effort
  bool discovery_source = false;  // discovery / entrepreneurship
  bool restricted_access_efficient = false;
};

AssetCharacteristics characteristics(AssetCategory c);

// Treatment flags implied by the characteristics matrix: taxed iff a
// rent source exists and restricted access is efficient (capital is the
// exception and stays untaxed), prized iff discovery contributes,
// abolished otherwise when restriction serves no purpose.
struct TreatmentFlags {
  bool taxed = false;
  bool prized = false;
  bool abolished = false;
};

TreatmentFlags expected_treatment(AssetCategory c);

}  // namespace assettax
