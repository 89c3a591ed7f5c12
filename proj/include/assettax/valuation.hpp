#pragma once

// Asset valuation under recurring value taxes: perpetuity values in flow
// and rate form, the share of untaxed value a recurring tax captures,
// rate inversion and annualization, and mortgage splitting of tax bills.
//
// Rates are per payment period throughout; annualize() is presentation
// only (simple scaling, no compounding). Values may come out negative
// when the tax flow exceeds income; abandonment semantics belong to the
// policy layer, not here.

namespace assettax {

struct ValuationInput {
  double income_flow_y = 0.0;      // pre-tax income per period, >= 0
  double tax_flow_T = 0.0;         // tax per period (flow form), >= 0
  double tax_rate_t = 0.0;         // tax per period as fraction of value, >= 0
  double discount_rate_rho = 0.0;  // per-period discount rate, > 0
  int periods_per_year = 1;        // >= 1

  void validate() const;  // throws std::domain_error on violation
};

struct MortgagedAsset {
  double asset_value = 0.0;    // > 0
  double mortgage_value = 0.0; // >= 0
  double tax_bill = 0.0;       // per period, >= 0
};

struct TaxBillSplit {
  double owner_portion = 0.0;
  double mortgagor_portion = 0.0;
};

// V = (y - T) / rho, the value of a constant income flow y taxed by a
// constant flow T.
double asset_value_flows(double y, double T, double rho);

// V = y / (t + rho), value when the tax is the fraction t of value per
// period. Fixed point of asset_value_flows under T = t*V.
double asset_value_rate(double y, double t, double rho);

// Fraction of the untaxed value captured by the tax: t / (t + rho).
// t and rho must be expressed per the same payment period; a mismatch is
// not detectable here (documented contract).
double captured_share(double t, double rho);

// Rate capturing target_share of value: t = rho * share / (1 - share).
// A share of 1 is unreachable at any finite rate.
double required_rate(double target_share, double rho);

// Simple (non-compounded) scaling of a per-period rate.
double annualize(double per_period_rate, int periods_per_year);

// Splits a per-period tax bill between the owner and the holder of the
// mortgage in proportion to their shares of the asset; over-mortgaged
// assets send the whole bill to the mortgage holder. Portions are
// nonnegative and sum exactly to the bill.
TaxBillSplit split_tax_bill(const MortgagedAsset& asset);

}  // namespace assettax
