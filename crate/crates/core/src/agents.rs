//! Bidding policies: truthful, uniformly random, and Hedge with
//! full-information feedback.
//!
//! After each round a Hedge bidder re-clears the market once per action in
//! its grid, holding the realized rival bids fixed, which gives the utility
//! every action would have earned. Utilities are mapped to `[0, 1]` with a
//! bound fixed before play starts, and weights are updated with
//! `w_i ← w_i · exp(−η·(1 − u_i))` followed by renormalization.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::market::{
    dispatch, settle, BidFunction, BidProfile, ClearingResult, MarketError, MarketInstance,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AgentError {
    #[error("normalization bound must be positive, got {0}")]
    NonPositiveBound(f64),
    #[error("learning rate must be finite and non-negative, got {0}")]
    InvalidEta(f64),
}

/// Learning rate `√(8·ln K / T)`. A single-action learner gets 0.
pub fn hedge_eta(actions: usize, horizon: usize) -> f64 {
    assert!(
        actions >= 1 && horizon >= 1,
        "hedge_eta needs K ≥ 1 and T ≥ 1"
    );
    if actions == 1 {
        return 0.0;
    }
    (8.0 * (actions as f64).ln() / horizon as f64).sqrt()
}

/// Inverse-CDF draw from `weights` using one uniform number `u ∈ [0, 1)`.
///
/// If rounding leaves `u` above the last cumulative sum, the last index with
/// positive weight is returned.
pub fn sample_index(weights: &[f64], u: f64) -> usize {
    let mut cumulative = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        cumulative += w;
        if u < cumulative {
            return i;
        }
    }
    weights
        .iter()
        .rposition(|&w| w > 0.0)
        .unwrap_or(weights.len() - 1)
}

/// Draws an action from `weights`, consuming exactly one `f64` from `rng`.
pub fn sample_action<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    sample_index(weights, u)
}

/// Probability weights of one Hedge learner.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HedgeState {
    weights: Vec<f64>,
    eta: f64,
    round: usize,
}

impl HedgeState {
    /// Uniform weights over `actions` entries.
    pub fn new(actions: usize, eta: f64) -> Result<Self, AgentError> {
        assert!(actions >= 1, "a learner needs at least one action");
        if !(eta.is_finite() && eta >= 0.0) {
            return Err(AgentError::InvalidEta(eta));
        }
        Ok(Self {
            weights: vec![1.0 / actions as f64; actions],
            eta,
            round: 0,
        })
    }

    /// Starts from arbitrary weights; they are renormalized.
    pub fn with_weights(weights: Vec<f64>, eta: f64) -> Result<Self, AgentError> {
        let mut state = Self::new(weights.len(), eta)?;
        let total: f64 = weights.iter().sum();
        assert!(
            total > 0.0 && weights.iter().all(|w| *w >= 0.0),
            "weights must be non-negative with positive mass"
        );
        state.weights = weights.into_iter().map(|w| w / total).collect();
        Ok(state)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Number of updates applied so far.
    pub fn round(&self) -> usize {
        self.round
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        sample_action(&self.weights, rng)
    }

    /// Exponential-weights step with losses `1 − u_i`; `normalized` must lie
    /// in `[0, 1]`.
    pub fn update(&mut self, normalized: &[f64]) {
        assert_eq!(normalized.len(), self.weights.len());
        debug_assert!(normalized.iter().all(|u| (0.0..=1.0).contains(u)));
        for (w, &u) in self.weights.iter_mut().zip(normalized) {
            *w *= (-self.eta * (1.0 - u)).exp();
        }
        let total: f64 = self.weights.iter().sum();
        for w in &mut self.weights {
            *w /= total;
        }
        self.round += 1;
    }
}

/// Which rule a bidder follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyKind {
    Trustful,
    Random,
    Hedge,
}

/// A bidder's decision state.
#[derive(Debug, Clone, PartialEq)]
pub enum Policy {
    /// Always submits the true cost (action 0).
    Trustful,
    /// Uniform over `actions` entries.
    Random {
        actions: usize,
    },
    Hedge(HedgeState),
    /// Replays one action forever.
    Fixed(usize),
}

impl Policy {
    pub fn new(kind: PolicyKind, actions: usize, eta: f64) -> Result<Self, AgentError> {
        Ok(match kind {
            PolicyKind::Trustful => Policy::Trustful,
            PolicyKind::Random => Policy::Random { actions },
            PolicyKind::Hedge => Policy::Hedge(HedgeState::new(actions, eta)?),
        })
    }

    /// Next action. Random and Hedge draw one uniform number per call; the
    /// other policies leave `rng` untouched.
    pub fn step<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        match self {
            Policy::Trustful => 0,
            Policy::Fixed(action) => *action,
            Policy::Random { actions } => {
                let u: f64 = rng.gen();
                // inverse CDF of the uniform distribution
                ((u * *actions as f64) as usize).min(actions - 1)
            }
            Policy::Hedge(state) => state.sample(rng),
        }
    }

    pub fn hedge(&self) -> Option<&HedgeState> {
        match self {
            Policy::Hedge(s) => Some(s),
            _ => None,
        }
    }

    pub fn hedge_mut(&mut self) -> Option<&mut HedgeState> {
        match self {
            Policy::Hedge(s) => Some(s),
            _ => None,
        }
    }
}

/// `policy_step` as a free function over a kind and a learner state.
pub fn policy_step<R: Rng + ?Sized>(kind: PolicyKind, state: &HedgeState, rng: &mut R) -> usize {
    match kind {
        PolicyKind::Trustful => 0,
        PolicyKind::Random => Policy::Random {
            actions: state.weights().len(),
        }
        .step(rng),
        PolicyKind::Hedge => state.sample(rng),
    }
}

/// Utility (true cost) the `learner` would have earned with each of its
/// actions, rivals fixed at `profile`.
///
/// When `realized` is the clearing of `profile` itself, the entry of the
/// played action is copied from it, so the two agree bit for bit.
pub fn counterfactual_utilities(
    instance: &MarketInstance,
    profile: &BidProfile,
    learner: usize,
    realized: Option<&ClearingResult>,
) -> Result<Vec<f64>, MarketError> {
    instance.check_profile(profile)?;
    let spec = instance.bidder(learner);
    let played = profile.action(learner);
    let mut offers = instance.offers(profile);
    spec.actions()
        .iter()
        .enumerate()
        .map(|(k, bid)| {
            if k == played {
                if let Some(r) = realized {
                    return Ok(r.utilities[learner]);
                }
            }
            offers[learner].bid = *bid;
            let d = dispatch(&offers, instance.demand())?;
            Ok(settle(spec.true_cost(), d.price, d.allocations[learner]))
        })
        .collect()
}

/// Maps `u → clamp(u / bound, 0, 1)`.
pub fn normalize_utilities(raw: &[f64], bound: f64) -> Result<Vec<f64>, AgentError> {
    if !(bound > 0.0 && bound.is_finite()) {
        return Err(AgentError::NonPositiveBound(bound));
    }
    Ok(raw.iter().map(|u| (u / bound).clamp(0.0, 1.0)).collect())
}

/// How the a-priori utility bound of a learner is derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizationBound {
    /// Price ceiling from the pointwise-highest marginal curve of every
    /// bidder's grid, then the best production level against that price.
    #[default]
    Envelope,
    /// `(c_max·Q + d_max)·min(x̄, Q)` with maxima over every coefficient in
    /// the instance.
    Coarse,
}

/// Smallest bound handed out, in €.
const MIN_BOUND: f64 = 1.0;

/// Upper bound on any utility `bidder` can realize in `instance`, whatever
/// the profile. Depends only on the instance, never on play.
pub fn utility_bound(instance: &MarketInstance, bidder: usize, rule: NormalizationBound) -> f64 {
    let spec = instance.bidder(bidder);
    let q = instance.demand();
    let reach = spec.capacity().min(q);
    let bound = match rule {
        NormalizationBound::Coarse => {
            let all = instance.bidders().iter().flat_map(|b| b.actions());
            let (c_max, d_max) = all.fold((0.0f64, 0.0f64), |(c, d), bid| {
                (c.max(bid.c()), d.max(bid.d()))
            });
            (c_max * q + d_max) * reach
        }
        NormalizationBound::Envelope => {
            let ceiling = envelope_price(instance);
            let cost = spec.true_cost();
            let x = if cost.c() > 0.0 {
                ((ceiling - cost.d()) / cost.c()).clamp(0.0, reach)
            } else if ceiling > cost.d() {
                reach
            } else {
                0.0
            };
            ceiling * x - cost.value(x)
        }
    };
    bound.max(MIN_BOUND)
}

/// Supply of one bidder when, at every price, it offers the least quantity
/// any of its grid bids would.
fn envelope_supply(actions: &[BidFunction], capacity: f64, price: f64) -> f64 {
    actions
        .iter()
        .map(|b| {
            if b.c() > 0.0 {
                ((price - b.d()) / b.c()).clamp(0.0, capacity)
            } else if price > b.d() {
                capacity
            } else {
                0.0
            }
        })
        .fold(capacity, f64::min)
}

/// Lowest price at which the envelope supply covers demand. Every realizable
/// clearing price lies at or below it, since each actual supply curve is
/// pointwise at least the envelope.
pub fn envelope_price(instance: &MarketInstance) -> f64 {
    let total = |p: f64| -> f64 {
        instance
            .bidders()
            .iter()
            .map(|b| envelope_supply(b.actions(), b.capacity(), p))
            .sum()
    };
    let mut low = 0.0;
    let mut high = instance
        .bidders()
        .iter()
        .flat_map(|b| b.actions().iter().map(move |a| a.marginal(b.capacity())))
        .fold(0.0, f64::max)
        + 1.0;
    for _ in 0..200 {
        let mid = 0.5 * (low + high);
        if total(mid) < instance.demand() {
            low = mid;
        } else {
            high = mid;
        }
    }
    high
}
