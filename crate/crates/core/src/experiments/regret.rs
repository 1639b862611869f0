use std::borrow::Cow;

use serde::Serialize;

use super::RoundRecord;
use crate::agents::counterfactual_utilities;
use crate::market::{MarketError, MarketInstance};

/// External regret of one bidder after every round.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegretSeries {
    pub bidder: usize,
    /// `R_t = max_k Σ_{s≤t} u_k(s) − Σ_{s≤t} u(s)`.
    pub cumulative: Vec<f64>,
    /// `R_t / t`.
    pub average: Vec<f64>,
}

impl RegretSeries {
    pub fn final_cumulative(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }

    pub fn final_average(&self) -> f64 {
        self.average.last().copied().unwrap_or(0.0)
    }
}

/// Regret of `bidder` over the rounds of one run, in order. Rounds without a
/// stored counterfactual vector for the bidder are re-cleared from their
/// profile.
pub fn regret_of(
    instance: &MarketInstance,
    records: &[RoundRecord],
    bidder: usize,
) -> Result<RegretSeries, MarketError> {
    let k = instance.bidder(bidder).action_count();
    let mut fixed_totals = vec![0.0; k];
    let mut realized = 0.0;
    let mut cumulative = Vec::with_capacity(records.len());
    let mut average = Vec::with_capacity(records.len());
    for (t, rec) in records.iter().enumerate() {
        let utilities: Cow<'_, [f64]> = match rec.counterfactuals.get(bidder) {
            Some(Some(v)) => Cow::Borrowed(v.as_slice()),
            _ => Cow::Owned(counterfactual_utilities(
                instance,
                &rec.profile,
                bidder,
                None,
            )?),
        };
        for (total, u) in fixed_totals.iter_mut().zip(utilities.iter()) {
            *total += u;
        }
        realized += rec.utilities[bidder];
        let best = fixed_totals
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        let r = best - realized;
        cumulative.push(r);
        average.push(r / (t + 1) as f64);
    }
    Ok(RegretSeries {
        bidder,
        cumulative,
        average,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::market::{BidFunction, BidProfile, BidderSpec};

    fn record(profile: Vec<usize>, utilities: Vec<f64>, cf: Option<Vec<f64>>) -> RoundRecord {
        RoundRecord {
            run: 0,
            round: 0,
            profile: BidProfile::new(profile),
            price: 0.0,
            social_cost: 0.0,
            allocations: vec![0.0; utilities.len()],
            payments: vec![0.0; utilities.len()],
            counterfactuals: vec![cf],
            utilities,
        }
    }

    fn one_bidder() -> MarketInstance {
        let b = |c, d| BidFunction::new(c, d).unwrap();
        MarketInstance::new(
            vec![BidderSpec::new(0, vec![b(1.0, 1.0), b(1.0, 2.0)], 10.0).unwrap()],
            5.0,
        )
        .unwrap()
    }

    #[test]
    fn hand_enumerated_two_round_history() {
        let records = vec![
            record(vec![0], vec![3.0], Some(vec![3.0, 1.0])),
            record(vec![1], vec![3.0], Some(vec![1.0, 3.0])),
        ];
        let r = regret_of(&one_bidder(), &records, 0).unwrap();
        // after round 1: max(3, 1) − 3 = 0; after round 2: max(4, 4) − 6 = −2
        assert_eq!(r.cumulative, vec![0.0, -2.0]);
        assert_eq!(r.average, vec![0.0, -1.0]);

        // The history from the worked example: realized (3, 1).
        let records = vec![
            record(vec![0], vec![3.0], Some(vec![3.0, 1.0])),
            record(vec![0], vec![1.0], Some(vec![1.0, 3.0])),
        ];
        let r = regret_of(&one_bidder(), &records, 0).unwrap();
        assert_eq!(r.final_cumulative(), 0.0);
    }

    #[test]
    fn missing_counterfactuals_are_recomputed() {
        let inst = one_bidder();
        // single bidder: always dispatched at Q = 5 whatever it bids
        let records: Vec<_> = (0..3)
            .map(|_| {
                let r = crate::market::clear_market(&inst, &BidProfile::new(vec![1])).unwrap();
                record(vec![1], r.utilities, None)
            })
            .collect();
        let r = regret_of(&inst, &records, 0).unwrap();
        // bid (1, 2) raises the price by 1 on 5 MW every round
        for (t, v) in r.cumulative.iter().enumerate() {
            assert!((v - 0.0).abs() < 1e-9, "round {t}: {v}");
        }
    }
}
