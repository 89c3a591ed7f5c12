#include "assettax/valuation.hpp"

#include <algorithm>
#include <stdexcept>

namespace assettax {

void ValuationInput::validate() const {
  if (!(discount_rate_rho > 0.0))
    throw std::domain_error("ValuationInput: discount_rate_rho must be > 0");
  if (tax_rate_t < 0.0)
    throw std::domain_error("ValuationInput: tax_rate_t must be >= 0");
  if (income_flow_y < 0.0)
    throw std::domain_error("ValuationInput: income_flow_y must be >= 0");
  if (periods_per_year < 1)
    throw std::domain_error("ValuationInput: periods_per_year must be >= 1");
}

double asset_value_flows(double y, double T, double rho) {
  if (!(rho > 0.0))
    throw std::domain_error("asset_value_flows: rho must be > 0");
  return (y - T) / rho;
}

double asset_value_rate(double y, double t, double rho) {
  if (!(rho > 0.0))
    throw std::domain_error("asset_value_rate: rho must be > 0");
  if (t < 0.0) throw std::domain_error("asset_value_rate: t must be >= 0");
  if (t + rho == 0.0)
    throw std::domain_error("asset_value_rate: t + rho must be positive");
  return y / (t + rho);
}

double captured_share(double t, double rho) {
  if (!(rho > 0.0))
    throw std::domain_error("captured_share: rho must be > 0");
  if (t < 0.0) throw std::domain_error("captured_share: t must be >= 0");
  return t / (t + rho);
}

double required_rate(double target_share, double rho) {
  if (!(rho > 0.0))
    throw std::domain_error("required_rate: rho must be > 0");
  if (target_share < 0.0 || target_share >= 1.0)
    throw std::domain_error("required_rate: target share must be in [0, 1)");
  return rho * target_share / (1.0 - target_share);
}

double annualize(double per_period_rate, int periods_per_year) {
  if (periods_per_year < 1)
    throw std::domain_error("annualize: periods_per_year must be >= 1");
  return per_period_rate * static_cast<double>(periods_per_year);
}

TaxBillSplit split_tax_bill(const MortgagedAsset& asset) {
  if (!(asset.asset_value > 0.0))
    throw std::domain_error("split_tax_bill: asset_value must be > 0");
  if (asset.mortgage_value < 0.0)
    throw std::domain_error("split_tax_bill: mortgage_value must be >= 0");
  if (asset.tax_bill < 0.0)
    throw std::domain_error("split_tax_bill: tax_bill must be >= 0");
  const double pledged = std::min(asset.mortgage_value, asset.asset_value);
  const double mortgagor = asset.tax_bill * (pledged / asset.asset_value);
  return {asset.tax_bill - mortgagor, mortgagor};
}

}  // namespace assettax
