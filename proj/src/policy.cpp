#include "assettax/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace assettax {

const char* to_string(AssetCategory c) {
  switch (c) {
    case AssetCategory::land_or_useful_privilege:
      return "land_or_useful_privilege";
    case AssetCategory::useless_privilege:
      return "useless_privilege";
    case AssetCategory::capital:
      return "capital";
    case AssetCategory::intellectual_property:
      return "intellectual_property";
    case AssetCategory::mineral_deposit:
      return "mineral_deposit";
    case AssetCategory::unregulated_natural_monopoly:
      return "unregulated_natural_monopoly";
  }
  return "?";
}

namespace {

void require(bool ok, const std::string& id, const char* what) {
  if (!ok) {
    throw std::invalid_argument("asset '" + id + "': " + what);
  }
}

void check_nonneg(const std::optional<double>& v, const std::string& id,
                  const char* name) {
  if (v && *v < 0.0) {
    throw std::invalid_argument("asset '" + id + "': " + std::string(name) +
                                " must be >= 0");
  }
}

}  // namespace

void AssetRecord::validate() const {
  check_nonneg(income_flow, id, "income_flow");
  check_nonneg(market_value, id, "market_value");
  check_nonneg(takeover_bid, id, "takeover_bid");
  check_nonneg(pv_net_investment, id, "pv_net_investment");
  check_nonneg(creation_cost, id, "creation_cost");
  check_nonneg(restricted_activity_fee, id, "restricted_activity_fee");
  if (mortgage_value < 0.0)
    throw std::invalid_argument("asset '" + id +
                                "': mortgage_value must be >= 0");

  const bool no_monopoly_fields = !takeover_bid && !pv_net_investment;
  switch (category) {
    case AssetCategory::land_or_useful_privilege:
      require(income_flow.has_value(), id, "land needs income_flow");
      require(!market_value && no_monopoly_fields && !creation_cost &&
                  !restricted_activity_fee,
              id, "field not applicable to land");
      break;
    case AssetCategory::useless_privilege:
      require(!income_flow && !market_value && no_monopoly_fields &&
                  !creation_cost,
              id, "field not applicable to a useless privilege");
      break;
    case AssetCategory::capital:
      require(!income_flow && no_monopoly_fields && !creation_cost &&
                  !restricted_activity_fee,
              id, "field not applicable to capital");
      break;
    case AssetCategory::intellectual_property:
      require(market_value.has_value() && creation_cost.has_value(), id,
              "intellectual property needs market_value and creation_cost");
      require(!income_flow && no_monopoly_fields && !restricted_activity_fee,
              id, "field not applicable to intellectual property");
      break;
    case AssetCategory::mineral_deposit:
      require(market_value.has_value() && creation_cost.has_value(), id,
              "mineral deposit needs market_value and creation_cost");
      require(!income_flow && no_monopoly_fields && !restricted_activity_fee,
              id, "field not applicable to a mineral deposit");
      break;
    case AssetCategory::unregulated_natural_monopoly:
      require(takeover_bid.has_value() && pv_net_investment.has_value() &&
                  creation_cost.has_value(),
              id,
              "monopoly needs takeover_bid, pv_net_investment and "
              "creation_cost");
      require(!income_flow && !restricted_activity_fee, id,
              "field not applicable to a monopoly");
      break;
  }
}

void PolicyConfig::validate() const {
  if (land_tax_rate < 0.0)
    throw std::invalid_argument("PolicyConfig: land_tax_rate must be >= 0");
  if (!(discount_rate > 0.0))
    throw std::invalid_argument("PolicyConfig: discount_rate must be > 0");
  if (floor_multiplier < 0.0)
    throw std::invalid_argument("PolicyConfig: floor_multiplier must be >= 0");
  if (assessor_award_rate < 0.0 || assessor_award_rate >= 1.0)
    throw std::invalid_argument(
        "PolicyConfig: assessor_award_rate must be in [0, 1)");
  if (mineral_auction_fraction < 0.0 || mineral_auction_fraction > 1.0)
    throw std::invalid_argument(
        "PolicyConfig: mineral_auction_fraction must be in [0, 1]");
  if (one_time_capital_levy && one_time_capital_levy->rate < 0.0)
    throw std::invalid_argument("PolicyConfig: levy rate must be >= 0");
}

void CostConventions::validate() const {
  for (double v : {prospector_day, prose_word, children_prose_word,
                   poetry_word, music_beat, art_sq_inch}) {
    if (!(v > 0.0))
      throw std::invalid_argument("CostConventions: unit costs must be > 0");
  }
}

double creation_cost(CreativeWorkKind kind, double quantity,
                     const CostConventions& conventions) {
  if (quantity < 0.0)
    throw std::invalid_argument("creation_cost: quantity must be >= 0");
  conventions.validate();
  switch (kind) {
    case CreativeWorkKind::prospecting_day:
      return conventions.prospector_day * quantity;
    case CreativeWorkKind::prose_word:
      return conventions.prose_word * quantity;
    case CreativeWorkKind::children_prose_word:
      return conventions.children_prose_word * quantity;
    case CreativeWorkKind::poetry_word:
      return conventions.poetry_word * quantity;
    case CreativeWorkKind::music_beat:
      return conventions.music_beat * quantity;
    case CreativeWorkKind::art_square_inch:
      return conventions.art_sq_inch * quantity;
  }
  throw std::invalid_argument("creation_cost: unknown work kind");
}

double monopoly_excess_value(double market_value, double takeover_bid,
                             double pv_net_investment) {
  if (market_value < 0.0 || takeover_bid < 0.0 || pv_net_investment < 0.0)
    throw std::invalid_argument("monopoly_excess_value: inputs must be >= 0");
  return std::max(0.0, std::max(market_value, takeover_bid) -
                           pv_net_investment);
}

double assessor_award(double taxes_collected, const PolicyConfig& config) {
  if (taxes_collected < 0.0)
    throw std::invalid_argument(
        "assessor_award: taxes_collected must be >= 0");
  config.validate();
  return config.assessor_award_rate * taxes_collected;
}

namespace {

ScheduleParams prize_params_for(const AssetRecord& asset,
                                const PolicyConfig& config,
                                const std::optional<ScheduleParams>& params,
                                const char* which) {
  if (!params) {
    throw std::invalid_argument("asset '" + asset.id + "': no " +
                                std::string(which) +
                                " prize schedule configured");
  }
  ScheduleParams p = *params;
  p.floor_multiplier = config.floor_multiplier;
  return p;
}

void split_mortgage(const AssetRecord& asset, TreatmentResult& r) {
  if (r.recurring_tax_flow <= 0.0 || r.residual_private_value <= 0.0) {
    r.owner_tax_flow = r.recurring_tax_flow;
    r.mortgagor_tax_flow = 0.0;
    return;
  }
  const TaxBillSplit split = split_tax_bill({r.residual_private_value,
                                             asset.mortgage_value,
                                             r.recurring_tax_flow});
  r.owner_tax_flow = split.owner_portion;
  r.mortgagor_tax_flow = split.mortgagor_portion;
}

}  // namespace

TreatmentResult apply_policy(const AssetRecord& asset,
                             const PolicyConfig& config,
                             const PrizeScheduleSet& schedules) {
  asset.validate();
  config.validate();

  TreatmentResult r;
  r.asset_id = asset.id;
  r.category = asset.category;

  const double t = config.land_tax_rate;
  const double rho = config.discount_rate;

  switch (asset.category) {
    case AssetCategory::land_or_useful_privilege: {
      const double y = *asset.income_flow;
      const double value = asset_value_rate(y, t, rho);
      r.recurring_tax_flow = t * value;
      r.residual_private_value = value;
      r.revenue_channels.property_tax_pv = r.recurring_tax_flow / rho;
      split_mortgage(asset, r);
      break;
    }
    case AssetCategory::useless_privilege: {
      r.abolished = true;
      break;
    }
    case AssetCategory::capital: {
      r.residual_private_value = asset.market_value.value_or(0.0);
      if (config.one_time_capital_levy) {
        r.revenue_channels.one_time_levy =
            config.one_time_capital_levy->rate * r.residual_private_value;
        r.residual_private_value -= r.revenue_channels.one_time_levy;
      }
      break;
    }
    case AssetCategory::intellectual_property: {
      const ScheduleParams params = prize_params_for(
          asset, config, schedules.innovation, "innovation");
      r.prize_paid = prize_total(params, *asset.market_value,
                                 *asset.creation_cost);
      // The monopoly right is extinguished; the value flows to the public
      // as free access rather than into the treasury.
      r.residual_private_value = 0.0;
      break;
    }
    case AssetCategory::mineral_deposit: {
      const ScheduleParams params =
          prize_params_for(asset, config, schedules.mineral, "mineral");
      const double value = *asset.market_value;
      r.prize_paid = prize_total(params, value, *asset.creation_cost);
      r.revenue_channels.severance_auction_pv =
          std::max(0.0, value - r.prize_paid);
      r.residual_private_value = 0.0;
      break;
    }
    case AssetCategory::unregulated_natural_monopoly: {
      const ScheduleParams params =
          prize_params_for(asset, config, schedules.monopoly, "monopoly");
      const double excess = monopoly_excess_value(
          asset.market_value.value_or(0.0), *asset.takeover_bid,
          *asset.pv_net_investment);
      r.prize_paid = prize_total(params, excess, *asset.creation_cost);
      // Recurring property tax on the excess value, at the land rate:
      // implied rent rho*E, post-tax excess rho*E/(t+rho).
      const double post_tax_excess =
          excess > 0.0 ? asset_value_rate(rho * excess, t, rho) : 0.0;
      r.recurring_tax_flow = t * post_tax_excess;
      r.revenue_channels.property_tax_pv = r.recurring_tax_flow / rho;
      r.residual_private_value = *asset.pv_net_investment + post_tax_excess;
      if (!asset.market_value.has_value()) {
        // Competitive assessment: the winning bidder earns a share of the
        // taxes collected.
        r.assessor_award_pv =
            assessor_award(r.revenue_channels.property_tax_pv, config);
      }
      split_mortgage(asset, r);
      break;
    }
  }
  return r;
}

RevenueReport revenue_report(const std::vector<AssetRecord>& assets,
                             const PolicyConfig& config,
                             const PrizeScheduleSet& schedules,
                             const WelfareWeightProfile* welfare_weights,
                             const DistributionModel* welfare_model) {
  std::vector<AssetRecord> ordered = assets;
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const AssetRecord& a, const AssetRecord& b) {
                     return a.id < b.id;
                   });

  RevenueReport rep;
  double weighted = 0.0;
  bool any_weighted = false;
  for (const AssetRecord& asset : ordered) {
    TreatmentResult r = apply_policy(asset, config, schedules);
    CategoryTotals& cat = rep.by_category[r.category];
    cat.asset_count += 1;
    cat.recurring_tax_flow += r.recurring_tax_flow;
    cat.revenue_pv += r.revenue_channels.total();
    cat.prizes_paid += r.prize_paid;
    rep.total_recurring_tax_flow += r.recurring_tax_flow;
    rep.total_property_tax_pv += r.revenue_channels.property_tax_pv;
    rep.total_severance_auction_pv += r.revenue_channels.severance_auction_pv;
    rep.total_one_time_levy += r.revenue_channels.one_time_levy;
    rep.total_prizes += r.prize_paid;
    rep.total_assessor_awards += r.assessor_award_pv;
    if (asset.restricted_activity_fee) {
      rep.total_access_fees += *asset.restricted_activity_fee;
    }
    if (r.abolished) rep.abolished_assets.push_back(r.asset_id);
    if (welfare_weights != nullptr && welfare_model != nullptr &&
        r.residual_private_value > 0.0) {
      weighted += welfare_weights->weight(r.residual_private_value) *
                  r.residual_private_value;
      any_weighted = true;
    }
    rep.treatments.push_back(std::move(r));
  }
  rep.net_public_revenue_pv = rep.total_property_tax_pv +
                              rep.total_severance_auction_pv +
                              rep.total_one_time_levy - rep.total_prizes -
                              rep.total_assessor_awards;
  if (welfare_weights != nullptr && (any_weighted || !assets.empty())) {
    rep.welfare_weighted_residual = weighted;
  }
  return rep;
}

AssetCharacteristics characteristics(AssetCategory c) {
  switch (c) {
    case AssetCategory::land_or_useful_privilege:
      return {true, false, false, true};
    case AssetCategory::useless_privilege:
      return {true, false, false, false};
    case AssetCategory::capital:
      return {true, true, false, true};
    case AssetCategory::intellectual_property:
      return {false, true, true, false};
    case AssetCategory::mineral_deposit:
      return {true, true, true, true};
    case AssetCategory::unregulated_natural_monopoly:
      return {true, true, true, true};
  }
  return {};
}

TreatmentFlags expected_treatment(AssetCategory c) {
  const AssetCharacteristics ch = characteristics(c);
  TreatmentFlags f;
  f.taxed = ch.rent_source && ch.restricted_access_efficient &&
            c != AssetCategory::capital;
  f.prized = ch.discovery_source;
  f.abolished = !ch.restricted_access_efficient;
  return f;
}

}  // namespace assettax
