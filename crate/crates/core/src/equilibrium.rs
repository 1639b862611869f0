//! Static Nash benchmark.
//!
//! Best responses are found by enumerating a bidder's grid and clearing the
//! market once per action. Diagonalization sweeps the bidders, replacing each
//! bid with its best response, until a full sweep moves no coefficient by
//! more than the tolerance.

use serde::{Deserialize, Serialize};

use crate::agents::counterfactual_utilities;
use crate::market::{BidProfile, MarketError, MarketInstance};

/// Deviation gains at or below this (€) do not break a Nash certificate.
pub const NASH_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BestResponse {
    pub action: usize,
    pub utility: f64,
    /// Utility of every action in the bidder's grid, rivals fixed.
    pub utilities: Vec<f64>,
}

/// Enumerates `bidder`'s actions against the rivals in `profile`. Ties go to
/// the lowest index.
pub fn best_response(
    instance: &MarketInstance,
    profile: &BidProfile,
    bidder: usize,
) -> Result<BestResponse, MarketError> {
    let utilities = counterfactual_utilities(instance, profile, bidder, None)?;
    let (action, utility) = argmax_first(&utilities);
    Ok(BestResponse {
        action,
        utility,
        utilities,
    })
}

fn argmax_first(values: &[f64]) -> (usize, f64) {
    let mut best = (0, values[0]);
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > best.1 {
            best = (i, v);
        }
    }
    best
}

/// Order in which best responses are applied within a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Schedule {
    /// Bidders update one after another and see earlier updates of the
    /// same sweep.
    #[default]
    GaussSeidel,
    /// All bidders respond to the profile at the start of the sweep.
    Jacobi,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalizationOptions {
    pub max_iter: usize,
    pub tolerance: f64,
    pub schedule: Schedule,
}

impl Default for DiagonalizationOptions {
    fn default() -> Self {
        Self {
            max_iter: 50,
            tolerance: 0.0004,
            schedule: Schedule::GaussSeidel,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagonalizationReport {
    pub profile: BidProfile,
    /// Sweeps performed.
    pub iterations: usize,
    pub converged: bool,
    /// Profile after each sweep; entry 0 is the starting profile.
    pub history: Vec<BidProfile>,
    /// Set when a sweep reproduced an earlier profile other than its
    /// immediate predecessor: the repeating profiles in order.
    pub cycle: Option<Vec<BidProfile>>,
}

/// Largest coefficient move, over all bidders, between two profiles.
pub fn profile_distance(instance: &MarketInstance, a: &BidProfile, b: &BidProfile) -> f64 {
    instance
        .bidders()
        .iter()
        .enumerate()
        .map(|(i, spec)| spec.actions()[a.action(i)].distance(&spec.actions()[b.action(i)]))
        .fold(0.0, f64::max)
}

pub fn diagonalize(
    instance: &MarketInstance,
    initial: &BidProfile,
    options: &DiagonalizationOptions,
) -> Result<DiagonalizationReport, MarketError> {
    instance.check_profile(initial)?;
    let mut profile = initial.clone();
    let mut history = vec![profile.clone()];
    for iteration in 1..=options.max_iter {
        let previous = profile.clone();
        match options.schedule {
            Schedule::GaussSeidel => {
                for bidder in 0..instance.len() {
                    let br = best_response(instance, &profile, bidder)?;
                    profile.set(bidder, br.action);
                }
            }
            Schedule::Jacobi => {
                for bidder in 0..instance.len() {
                    let br = best_response(instance, &previous, bidder)?;
                    profile.set(bidder, br.action);
                }
            }
        }
        history.push(profile.clone());
        if profile_distance(instance, &profile, &previous) <= options.tolerance {
            return Ok(DiagonalizationReport {
                profile,
                iterations: iteration,
                converged: true,
                history,
                cycle: None,
            });
        }
        // The map is deterministic, so revisiting a profile means it cycles.
        let last = history.len() - 1;
        if let Some(start) = history[..last - 1].iter().position(|p| *p == profile) {
            let cycle = history[start..last].to_vec();
            return Ok(DiagonalizationReport {
                profile,
                iterations: iteration,
                converged: false,
                history,
                cycle: Some(cycle),
            });
        }
    }
    Ok(DiagonalizationReport {
        profile,
        iterations: options.max_iter,
        converged: false,
        history,
        cycle: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NashCheck {
    pub is_nash: bool,
    /// Largest utility gain from a unilateral deviation (€, never negative).
    pub worst_gain: f64,
    /// Bidder and action achieving `worst_gain`, when it is positive.
    pub deviation: Option<(usize, usize)>,
}

/// Checks every unilateral deviation from `profile`.
pub fn verify_nash(
    instance: &MarketInstance,
    profile: &BidProfile,
) -> Result<NashCheck, MarketError> {
    instance.check_profile(profile)?;
    let mut worst_gain = 0.0;
    let mut deviation = None;
    for bidder in 0..instance.len() {
        let utilities = counterfactual_utilities(instance, profile, bidder, None)?;
        let current = utilities[profile.action(bidder)];
        for (action, &u) in utilities.iter().enumerate() {
            let gain = u - current;
            if gain > worst_gain {
                worst_gain = gain;
                deviation = Some((bidder, action));
            }
        }
    }
    Ok(NashCheck {
        is_nash: worst_gain <= NASH_TOLERANCE,
        worst_gain,
        deviation,
    })
}
