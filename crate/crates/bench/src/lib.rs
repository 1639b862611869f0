//! Fixtures shared by the benchmarks.

use hedgebid_core::{parse_instance, BidFunction, BidderSpec, MarketInstance};

const TABLE_INSTANCE: &str = include_str!("../../../instances/paper_table1.json");

/// Five bidders, ten actions each, capacities 700 MW.
pub fn table_instance() -> MarketInstance {
    parse_instance(TABLE_INSTANCE).expect("bundled instance is valid")
}

/// A deterministic `n`-bidder market with `k` actions per bidder, demand at
/// 40% of capacity.
pub fn synthetic_market(n: usize, k: usize) -> MarketInstance {
    let bidders = (0..n)
        .map(|i| {
            let actions = (0..k)
                .map(|j| {
                    let c = 0.01 + 0.003 * ((i * 7 + j * 3) % 17) as f64;
                    let d = 8.0 + ((i * 5 + j * 11) % 13) as f64;
                    BidFunction::new(c, d).unwrap()
                })
                .collect();
            BidderSpec::new(i, actions, 500.0).unwrap()
        })
        .collect();
    MarketInstance::new(bidders, 0.4 * 500.0 * n as f64).unwrap()
}
