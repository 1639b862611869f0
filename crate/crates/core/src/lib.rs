//! Simulation engine for repeated day-ahead electricity auctions with
//! quadratic bids.
//!
//! * [`market`]: instance types and the market-clearing solver.
//! * [`agents`]: truthful, random and Hedge bidders.
//! * [`equilibrium`]: enumeration best responses, diagonalization and Nash
//!   certificates.
//! * [`experiments`]: the eight bidding cases, regret and run aggregation.

pub mod agents;
pub mod equilibrium;
pub mod experiments;
pub mod instance;
pub mod market;
pub mod seed;

pub use agents::{
    counterfactual_utilities, hedge_eta, normalize_utilities, utility_bound, HedgeState,
    NormalizationBound, Policy, PolicyKind,
};
pub use equilibrium::{
    best_response, diagonalize, verify_nash, BestResponse, DiagonalizationOptions,
    DiagonalizationReport, NashCheck, Schedule,
};
pub use experiments::{
    aggregate, regret_of, run_all_cases, run_case, AggregateSeries, AllCases, CaseId, CaseOutcome,
    CaseSpec, ExperimentConfig, ExperimentError, RegretSeries, Role, RoundRecord, SummaryRow,
};
pub use instance::{load_instance, parse_instance, InstanceError, InstanceFile};
pub use market::{
    allocation_at_price, clear_market, social_cost_true, BidFunction, BidProfile, BidderSpec,
    ClearingResult, MarketError, MarketInstance,
};
