//! Market clearing for quadratic bids.
//!
//! The operator minimizes the total as-bid cost `Σ ½·c·x² + d·x` subject to
//! `Σ x = Q` and `0 ≤ x ≤ x̄`. The problem is separable, so it is solved on the
//! dual side: every bidder's response to a price is a clamped line, and the
//! clearing price is the point where the aggregate response meets demand.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Allowed `|Σx − Q|` when the bisection stops.
pub const BALANCE_TOLERANCE: f64 = 1e-9;

/// Iteration budget of the price bisection.
pub const MAX_BISECTION_ITERATIONS: usize = 200;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MarketError {
    #[error("invalid bid function (c={c}, d={d}): coefficients must be finite and non-negative")]
    InvalidBid { c: f64, d: f64 },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("demand {demand} MW exceeds total capacity {capacity} MW")]
    InfeasibleDemand { demand: f64, capacity: f64 },
    #[error("profile has {got} entries but the market has {expected} bidders")]
    ProfileLength { expected: usize, got: usize },
    #[error("bidder {bidder} has {count} actions, action index {action} is out of range")]
    ActionOutOfRange {
        bidder: usize,
        action: usize,
        count: usize,
    },
    #[error("price bisection did not balance demand after {iterations} iterations (residual {residual:e} MW)")]
    NonConvergence { iterations: usize, residual: f64 },
}

/// Quadratic price curve `b(x) = ½·c·x² + d·x`, used both for true costs and
/// for submitted bids.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct BidFunction {
    c: f64,
    d: f64,
}

impl BidFunction {
    pub fn new(c: f64, d: f64) -> Result<Self, MarketError> {
        if !(c.is_finite() && d.is_finite() && c >= 0.0 && d >= 0.0) {
            return Err(MarketError::InvalidBid { c, d });
        }
        Ok(Self { c, d })
    }

    /// Quadratic coefficient (€/MW²).
    pub fn c(&self) -> f64 {
        self.c
    }

    /// Linear coefficient (€/MW).
    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn value(&self, x: f64) -> f64 {
        0.5 * self.c * x * x + self.d * x
    }

    pub fn marginal(&self, x: f64) -> f64 {
        self.c * x + self.d
    }

    /// Max-norm distance between the coefficient pairs.
    pub fn distance(&self, other: &BidFunction) -> f64 {
        (self.c - other.c).abs().max((self.d - other.d).abs())
    }
}

impl TryFrom<[f64; 2]> for BidFunction {
    type Error = MarketError;

    fn try_from([c, d]: [f64; 2]) -> Result<Self, Self::Error> {
        BidFunction::new(c, d)
    }
}

impl From<BidFunction> for [f64; 2] {
    fn from(bid: BidFunction) -> Self {
        [bid.c, bid.d]
    }
}

/// One generator: its true cost, the finite grid of bids it may submit and
/// its capacity. `actions()[0]` is always the true cost.
#[derive(Debug, Clone, PartialEq)]
pub struct BidderSpec {
    id: usize,
    actions: Vec<BidFunction>,
    capacity: f64,
}

impl BidderSpec {
    pub fn new(id: usize, actions: Vec<BidFunction>, capacity: f64) -> Result<Self, MarketError> {
        if actions.is_empty() {
            return Err(MarketError::InvalidInstance(format!(
                "bidder {id} has an empty action grid"
            )));
        }
        if !(capacity.is_finite() && capacity > 0.0) {
            return Err(MarketError::InvalidInstance(format!(
                "bidder {id} has non-positive capacity {capacity}"
            )));
        }
        Ok(Self {
            id,
            actions,
            capacity,
        })
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn true_cost(&self) -> &BidFunction {
        &self.actions[0]
    }

    pub fn actions(&self) -> &[BidFunction] {
        &self.actions
    }

    pub fn action_count(&self) -> usize {
        self.actions.len()
    }

    pub fn capacity(&self) -> f64 {
        self.capacity
    }
}

/// A complete auction: bidders with ids `0..N` and a price-inelastic demand.
#[derive(Debug, Clone, PartialEq)]
pub struct MarketInstance {
    bidders: Vec<BidderSpec>,
    demand: f64,
}

impl MarketInstance {
    pub fn new(bidders: Vec<BidderSpec>, demand: f64) -> Result<Self, MarketError> {
        if bidders.is_empty() {
            return Err(MarketError::InvalidInstance("no bidders".into()));
        }
        for (i, b) in bidders.iter().enumerate() {
            if b.id != i {
                return Err(MarketError::InvalidInstance(format!(
                    "bidder ids must be contiguous from 0, found id {} at position {i}",
                    b.id
                )));
            }
        }
        if !(demand.is_finite() && demand >= 0.0) {
            return Err(MarketError::InvalidInstance(format!(
                "demand must be finite and non-negative, got {demand}"
            )));
        }
        let capacity: f64 = bidders.iter().map(|b| b.capacity).sum();
        if demand > capacity {
            return Err(MarketError::InfeasibleDemand { demand, capacity });
        }
        Ok(Self { bidders, demand })
    }

    pub fn bidders(&self) -> &[BidderSpec] {
        &self.bidders
    }

    pub fn bidder(&self, id: usize) -> &BidderSpec {
        &self.bidders[id]
    }

    pub fn len(&self) -> usize {
        self.bidders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bidders.is_empty()
    }

    pub fn demand(&self) -> f64 {
        self.demand
    }

    /// Same bidders, different demand.
    pub fn with_demand(&self, demand: f64) -> Result<Self, MarketError> {
        Self::new(self.bidders.clone(), demand)
    }

    pub fn total_capacity(&self) -> f64 {
        self.bidders.iter().map(|b| b.capacity).sum()
    }

    /// Checks length and ranges of a profile against this instance.
    pub fn check_profile(&self, profile: &BidProfile) -> Result<(), MarketError> {
        if profile.len() != self.len() {
            return Err(MarketError::ProfileLength {
                expected: self.len(),
                got: profile.len(),
            });
        }
        for (bidder, (&action, spec)) in profile.0.iter().zip(&self.bidders).enumerate() {
            if action >= spec.action_count() {
                return Err(MarketError::ActionOutOfRange {
                    bidder,
                    action,
                    count: spec.action_count(),
                });
            }
        }
        Ok(())
    }

    /// Submitted bid of every bidder under `profile`. The profile must be valid.
    pub fn offers(&self, profile: &BidProfile) -> Vec<Offer> {
        self.bidders
            .iter()
            .zip(profile.as_slice())
            .map(|(b, &k)| Offer {
                bid: b.actions[k],
                capacity: b.capacity,
            })
            .collect()
    }
}

/// Action index per bidder.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BidProfile(Vec<usize>);

impl BidProfile {
    pub fn new(actions: Vec<usize>) -> Self {
        Self(actions)
    }

    /// Everyone submits their true cost.
    pub fn truthful(bidders: usize) -> Self {
        Self(vec![0; bidders])
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn action(&self, bidder: usize) -> usize {
        self.0[bidder]
    }

    pub fn set(&mut self, bidder: usize, action: usize) {
        self.0[bidder] = action;
    }

    /// Copy with one bidder's action replaced.
    pub fn with_action(&self, bidder: usize, action: usize) -> Self {
        let mut next = self.clone();
        next.0[bidder] = action;
        next
    }
}

impl fmt::Display for BidProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl FromStr for BidProfile {
    type Err = std::num::ParseIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map(BidProfile)
    }
}

/// A submitted bid together with the capacity it applies to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Offer {
    pub bid: BidFunction,
    pub capacity: f64,
}

/// Primal and dual solution of the clearing problem, before settlement.
#[derive(Debug, Clone, PartialEq)]
pub struct Dispatch {
    pub allocations: Vec<f64>,
    pub price: f64,
    pub social_cost: f64,
}

/// Outcome of one auction round.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClearingResult {
    /// MW per bidder.
    pub allocations: Vec<f64>,
    /// Marginal price (€/MWh), the multiplier of the balance constraint.
    pub price: f64,
    /// Optimal objective under the submitted bids (€).
    pub social_cost: f64,
    /// `price · allocation` per bidder (€).
    pub payments: Vec<f64>,
    /// Payment minus true production cost (€).
    pub utilities: Vec<f64>,
}

/// Supply of one bidder at `price`: the minimizer of `b(x) − price·x` on
/// `[0, capacity]`. Requires `bid.c() > 0`; flat bids are handled by
/// [`dispatch`].
pub fn allocation_at_price(bid: &BidFunction, capacity: f64, price: f64) -> f64 {
    debug_assert!(
        bid.c > 0.0,
        "allocation_at_price needs a strictly convex bid"
    );
    debug_assert!(capacity > 0.0);
    ((price - bid.d) / bid.c).clamp(0.0, capacity)
}

/// Aggregate supply at `price`. Flat bids (`c = 0`) supply their full
/// capacity above their `d` and nothing at or below it.
fn supply(offers: &[Offer], price: f64) -> f64 {
    offers
        .iter()
        .map(|o| {
            if o.bid.c > 0.0 {
                allocation_at_price(&o.bid, o.capacity, price)
            } else if price > o.bid.d {
                o.capacity
            } else {
                0.0
            }
        })
        .sum()
}

fn dispatch_at(offers: &[Offer], price: f64) -> Vec<f64> {
    offers
        .iter()
        .map(|o| {
            if o.bid.c > 0.0 {
                allocation_at_price(&o.bid, o.capacity, price)
            } else if price > o.bid.d {
                o.capacity
            } else {
                0.0
            }
        })
        .collect()
}

fn finish(offers: &[Offer], allocations: Vec<f64>, price: f64) -> Dispatch {
    let social_cost = offers
        .iter()
        .zip(&allocations)
        .map(|(o, &x)| o.bid.value(x))
        .sum();
    Dispatch {
        allocations,
        price,
        social_cost,
    }
}

/// Refines a bisection price by solving the balance equation exactly on the
/// set of bidders that are strictly inside their bounds at `price`. Keeps the
/// bisection price if the refined one changes any bound status or balances
/// worse.
fn polish(offers: &[Offer], demand: f64, price: f64, residual: f64) -> f64 {
    let mut fixed = 0.0;
    let mut slope = 0.0;
    let mut intercept = 0.0;
    let status = |o: &Offer, p: f64| -> u8 {
        if o.bid.c == 0.0 {
            u8::from(p > o.bid.d) * 2
        } else {
            let x = allocation_at_price(&o.bid, o.capacity, p);
            if x <= 0.0 {
                0
            } else if x >= o.capacity {
                2
            } else {
                1
            }
        }
    };
    for o in offers {
        match status(o, price) {
            1 => {
                slope += 1.0 / o.bid.c;
                intercept += o.bid.d / o.bid.c;
            }
            2 => fixed += o.capacity,
            _ => {}
        }
    }
    if slope == 0.0 {
        return price;
    }
    let refined = (demand - fixed + intercept) / slope;
    let same_sets = offers
        .iter()
        .all(|o| status(o, refined) == status(o, price));
    if same_sets && (supply(offers, refined) - demand).abs() <= residual.abs() {
        refined
    } else {
        price
    }
}

/// Solves the clearing problem for a set of submitted offers.
pub fn dispatch(offers: &[Offer], demand: f64) -> Result<Dispatch, MarketError> {
    let capacity: f64 = offers.iter().map(|o| o.capacity).sum();
    if demand > capacity {
        return Err(MarketError::InfeasibleDemand { demand, capacity });
    }
    let price_floor = offers.iter().map(|o| o.bid.d).fold(f64::INFINITY, f64::min);
    if demand == 0.0 {
        return Ok(Dispatch {
            allocations: vec![0.0; offers.len()],
            price: price_floor,
            social_cost: 0.0,
        });
    }

    // A flat bid turns the aggregate supply into a step at its d. When demand
    // falls on such a step the price is that d and the step is shared pro rata
    // by capacity.
    let mut steps: Vec<f64> = offers
        .iter()
        .filter(|o| o.bid.c == 0.0)
        .map(|o| o.bid.d)
        .collect();
    steps.sort_by(f64::total_cmp);
    steps.dedup();
    for &step in &steps {
        let below = supply(offers, step);
        let flat_capacity: f64 = offers
            .iter()
            .filter(|o| o.bid.c == 0.0 && o.bid.d == step)
            .map(|o| o.capacity)
            .sum();
        if below - BALANCE_TOLERANCE <= demand
            && demand <= below + flat_capacity + BALANCE_TOLERANCE
        {
            let share = ((demand - below) / flat_capacity).clamp(0.0, 1.0);
            let mut allocations = dispatch_at(offers, step);
            for (x, o) in allocations.iter_mut().zip(offers) {
                if o.bid.c == 0.0 && o.bid.d == step {
                    *x = share * o.capacity;
                }
            }
            return Ok(finish(offers, allocations, step));
        }
    }

    let mut low = price_floor;
    let mut high = offers
        .iter()
        .map(|o| o.bid.marginal(o.capacity))
        .fold(f64::NEG_INFINITY, f64::max);
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_BISECTION_ITERATIONS {
        let mid = 0.5 * (low + high);
        let s = supply(offers, mid);
        residual = s - demand;
        if residual.abs() <= BALANCE_TOLERANCE {
            let price = polish(offers, demand, mid, residual);
            return Ok(finish(offers, dispatch_at(offers, price), price));
        }
        if residual < 0.0 {
            low = mid;
        } else {
            high = mid;
        }
    }
    Err(MarketError::NonConvergence {
        iterations: MAX_BISECTION_ITERATIONS,
        residual,
    })
}

/// Utility of a bidder with true cost `true_cost` dispatched at `x` MW and
/// paid `price` per MW. Unaccepted bids earn exactly zero.
pub fn settle(true_cost: &BidFunction, price: f64, x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        price * x - true_cost.value(x)
    }
}

/// Clears the market for `profile` and settles every bidder against its true
/// cost.
pub fn clear_market(
    instance: &MarketInstance,
    profile: &BidProfile,
) -> Result<ClearingResult, MarketError> {
    instance.check_profile(profile)?;
    let offers = instance.offers(profile);
    let Dispatch {
        allocations,
        price,
        social_cost,
    } = dispatch(&offers, instance.demand)?;
    let payments = allocations
        .iter()
        .map(|&x| if x == 0.0 { 0.0 } else { price * x })
        .collect();
    let utilities = allocations
        .iter()
        .zip(&instance.bidders)
        .map(|(&x, b)| settle(b.true_cost(), price, x))
        .collect();
    Ok(ClearingResult {
        allocations,
        price,
        social_cost,
        payments,
        utilities,
    })
}

/// Coefficients used by [`social_cost_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostBasis {
    /// The bids in the given profile.
    Submitted,
    /// Every bidder's true cost.
    True,
}

/// `Σ ½·c·x² + d·x` over the bidders, with coefficients taken from either
/// the submitted profile or the true costs.
pub fn social_cost_with(
    instance: &MarketInstance,
    profile: &BidProfile,
    allocations: &[f64],
    basis: CostBasis,
) -> f64 {
    instance
        .bidders
        .iter()
        .zip(allocations)
        .enumerate()
        .map(|(i, (b, &x))| match basis {
            CostBasis::Submitted => b.actions[profile.action(i)].value(x),
            CostBasis::True => b.true_cost().value(x),
        })
        .sum()
}

/// Production cost of `allocations` under the true cost functions.
pub fn social_cost_true(instance: &MarketInstance, allocations: &[f64]) -> f64 {
    social_cost_with(
        instance,
        &BidProfile::truthful(instance.len()),
        allocations,
        CostBasis::True,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bid(c: f64, d: f64) -> BidFunction {
        BidFunction::new(c, d).unwrap()
    }

    fn single(c: f64, d: f64, cap: f64, q: f64) -> MarketInstance {
        MarketInstance::new(vec![BidderSpec::new(0, vec![bid(c, d)], cap).unwrap()], q).unwrap()
    }

    #[test]
    fn allocation_at_price_examples() {
        assert_eq!(allocation_at_price(&bid(2.0, 10.0), 100.0, 30.0), 10.0);
        assert_eq!(allocation_at_price(&bid(2.0, 10.0), 100.0, 5.0), 0.0);
        assert_eq!(allocation_at_price(&bid(0.010, 11.0), 700.0, 25.0), 700.0);
    }

    #[test]
    fn single_bidder_clearing() {
        let r = clear_market(&single(2.0, 10.0, 100.0, 10.0), &BidProfile::truthful(1)).unwrap();
        assert!((r.allocations[0] - 10.0).abs() < 1e-9);
        assert!((r.price - 30.0).abs() < 1e-9);
        assert!((r.social_cost - 200.0).abs() < 1e-6);
        assert!((r.payments[0] - 300.0).abs() < 1e-6);
        assert!((r.utilities[0] - 100.0).abs() < 1e-6);
    }

    #[test]
    fn zero_demand_prices_at_cheapest_first_unit() {
        let inst = MarketInstance::new(
            vec![
                BidderSpec::new(0, vec![bid(1.0, 12.0)], 10.0).unwrap(),
                BidderSpec::new(1, vec![bid(1.0, 7.0)], 10.0).unwrap(),
            ],
            0.0,
        )
        .unwrap();
        let r = clear_market(&inst, &BidProfile::truthful(2)).unwrap();
        assert_eq!(r.allocations, vec![0.0, 0.0]);
        assert_eq!(r.price, 7.0);
        assert_eq!(r.social_cost, 0.0);
        assert_eq!(r.utilities, vec![0.0, 0.0]);
    }

    #[test]
    fn demand_above_capacity_is_rejected() {
        let err = MarketInstance::new(
            vec![BidderSpec::new(0, vec![bid(1.0, 1.0)], 10.0).unwrap()],
            10.5,
        )
        .unwrap_err();
        assert!(matches!(err, MarketError::InfeasibleDemand { .. }));

        let offers = [Offer {
            bid: bid(1.0, 1.0),
            capacity: 10.0,
        }];
        assert!(matches!(
            dispatch(&offers, 11.0),
            Err(MarketError::InfeasibleDemand { .. })
        ));
    }

    #[test]
    fn demand_equal_to_capacity_fills_everyone() {
        let inst = MarketInstance::new(
            vec![
                BidderSpec::new(0, vec![bid(0.5, 3.0)], 10.0).unwrap(),
                BidderSpec::new(1, vec![bid(2.0, 1.0)], 5.0).unwrap(),
            ],
            15.0,
        )
        .unwrap();
        let r = clear_market(&inst, &BidProfile::truthful(2)).unwrap();
        assert!((r.allocations[0] - 10.0).abs() < 1e-9);
        assert!((r.allocations[1] - 5.0).abs() < 1e-9);
    }

    #[test]
    fn invalid_bids_and_instances() {
        assert!(BidFunction::new(-0.1, 1.0).is_err());
        assert!(BidFunction::new(0.1, f64::NAN).is_err());
        assert!(BidderSpec::new(0, vec![], 1.0).is_err());
        assert!(BidderSpec::new(0, vec![bid(1.0, 1.0)], 0.0).is_err());
        let b = BidderSpec::new(1, vec![bid(1.0, 1.0)], 1.0).unwrap();
        assert!(MarketInstance::new(vec![b], 0.5).is_err());
    }

    #[test]
    fn profile_validation() {
        let inst = single(1.0, 1.0, 10.0, 1.0);
        assert_eq!(
            clear_market(&inst, &BidProfile::new(vec![0, 0])).unwrap_err(),
            MarketError::ProfileLength {
                expected: 1,
                got: 2
            }
        );
        assert_eq!(
            clear_market(&inst, &BidProfile::new(vec![3])).unwrap_err(),
            MarketError::ActionOutOfRange {
                bidder: 0,
                action: 3,
                count: 1
            }
        );
    }

    #[test]
    fn flat_bids_share_the_step_pro_rata() {
        // Two flat bidders at d=20 with capacities 10 and 30; a convex bidder
        // reaches its capacity (5 MW) at price 15.
        let offers = [
            Offer {
                bid: bid(0.0, 20.0),
                capacity: 10.0,
            },
            Offer {
                bid: bid(0.0, 20.0),
                capacity: 30.0,
            },
            Offer {
                bid: bid(1.0, 10.0),
                capacity: 5.0,
            },
        ];
        let r = dispatch(&offers, 25.0).unwrap();
        assert_eq!(r.price, 20.0);
        assert!((r.allocations[0] - 5.0).abs() < 1e-12);
        assert!((r.allocations[1] - 15.0).abs() < 1e-12);
        assert_eq!(r.allocations[2], 5.0);
        // Reordering the offers does not change anyone's share.
        let swapped = [offers[2], offers[1], offers[0]];
        let s = dispatch(&swapped, 25.0).unwrap();
        assert_eq!(s.allocations, vec![5.0, 15.0, 5.0]);
    }

    #[test]
    fn flat_bid_below_the_step_is_fully_dispatched() {
        let offers = [
            Offer {
                bid: bid(0.0, 5.0),
                capacity: 10.0,
            },
            Offer {
                bid: bid(1.0, 0.0),
                capacity: 100.0,
            },
        ];
        // Demand 30: the flat bidder's 10 MW at price 5, the convex one covers
        // the remaining 20 MW at price 20.
        let r = dispatch(&offers, 30.0).unwrap();
        assert!((r.price - 20.0).abs() < 1e-9);
        assert_eq!(r.allocations[0], 10.0);
        assert!((r.allocations[1] - 20.0).abs() < 1e-9);
    }

    #[test]
    fn zero_allocation_is_not_paid() {
        let inst = MarketInstance::new(
            vec![
                BidderSpec::new(0, vec![bid(1.0, 1.0)], 100.0).unwrap(),
                BidderSpec::new(1, vec![bid(1.0, 50.0)], 100.0).unwrap(),
            ],
            10.0,
        )
        .unwrap();
        let r = clear_market(&inst, &BidProfile::truthful(2)).unwrap();
        assert_eq!(r.allocations[1], 0.0);
        assert_eq!(r.payments[1], 0.0);
        assert_eq!(r.utilities[1], 0.0);
    }

    #[test]
    fn utilities_use_true_cost() {
        let inst = MarketInstance::new(
            vec![BidderSpec::new(0, vec![bid(2.0, 10.0), bid(2.0, 20.0)], 100.0).unwrap()],
            10.0,
        )
        .unwrap();
        let r = clear_market(&inst, &BidProfile::new(vec![1])).unwrap();
        // Bid (2, 20) clears at λ = 2·10 + 20 = 40.
        assert!((r.price - 40.0).abs() < 1e-9);
        assert!((r.social_cost - 300.0).abs() < 1e-6);
        assert!((r.utilities[0] - (400.0 - 200.0)).abs() < 1e-6);
    }

    #[test]
    fn social_cost_helpers() {
        let inst = single(2.0, 10.0, 100.0, 10.0);
        assert_eq!(social_cost_true(&inst, &[0.0]), 0.0);
        assert_eq!(social_cost_true(&inst, &[10.0]), 200.0);
    }

    #[test]
    fn profile_text_round_trip() {
        let p: BidProfile = "0, 3,1".parse().unwrap();
        assert_eq!(p.as_slice(), &[0, 3, 1]);
        assert_eq!(p.to_string(), "0,3,1");
        assert!("0,x".parse::<BidProfile>().is_err());
    }
}
