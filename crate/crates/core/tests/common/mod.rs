//! Test-only reference solvers for the clearing problem
//! `min Σ ½cᵢxᵢ² + dᵢxᵢ  s.t. Σxᵢ = Q, 0 ≤ xᵢ ≤ capᵢ`.
//!
//! Neither uses prices or bisection.

#![allow(dead_code)]

use std::path::PathBuf;

use hedgebid_core::{load_instance, BidProfile, MarketInstance};

#[derive(Debug, Clone, Copy)]
pub struct Unit {
    pub c: f64,
    pub d: f64,
    pub cap: f64,
}

pub fn cost(units: &[Unit], x: &[f64]) -> f64 {
    units
        .iter()
        .zip(x)
        .map(|(u, &x)| 0.5 * u.c * x * x + u.d * x)
        .sum()
}

#[derive(Debug, Clone)]
pub struct OracleSolution {
    pub cost: f64,
    pub allocations: Vec<f64>,
    /// Common marginal of the interior bidders, when there is one.
    pub price: Option<f64>,
}

/// Exact solution by enumerating every assignment of bidders to
/// {at zero, at capacity, interior}. On each face the interior part has a
/// closed-form stationary point; the cheapest primal-feasible candidate is
/// the optimum. Needs `c > 0` everywhere.
pub fn active_set_oracle(units: &[Unit], demand: f64) -> OracleSolution {
    let n = units.len();
    let mut best: Option<OracleSolution> = None;
    let faces = 3usize.pow(n as u32);
    for code in 0..faces {
        let mut state = Vec::with_capacity(n);
        let mut rest = code;
        for _ in 0..n {
            state.push(rest % 3);
            rest /= 3;
        }
        let at_cap: f64 = units
            .iter()
            .zip(&state)
            .filter(|(_, &s)| s == 1)
            .map(|(u, _)| u.cap)
            .sum();
        let slope: f64 = units
            .iter()
            .zip(&state)
            .filter(|(_, &s)| s == 2)
            .map(|(u, _)| 1.0 / u.c)
            .sum();
        let intercept: f64 = units
            .iter()
            .zip(&state)
            .filter(|(_, &s)| s == 2)
            .map(|(u, _)| u.d / u.c)
            .sum();
        let (x, price) = if slope == 0.0 {
            if (at_cap - demand).abs() > 1e-9 {
                continue;
            }
            let x: Vec<f64> = units
                .iter()
                .zip(&state)
                .map(|(u, &s)| if s == 1 { u.cap } else { 0.0 })
                .collect();
            (x, None)
        } else {
            let lambda = (demand - at_cap + intercept) / slope;
            let x: Vec<f64> = units
                .iter()
                .zip(&state)
                .map(|(u, &s)| match s {
                    0 => 0.0,
                    1 => u.cap,
                    _ => (lambda - u.d) / u.c,
                })
                .collect();
            (x, Some(lambda))
        };
        let feasible = x
            .iter()
            .zip(units)
            .all(|(&x, u)| x >= -1e-12 && x <= u.cap + 1e-12);
        if !feasible {
            continue;
        }
        let c = cost(units, &x);
        if best.as_ref().map_or(true, |b| c < b.cost) {
            best = Some(OracleSolution {
                cost: c,
                allocations: x,
                price,
            });
        }
    }
    best.expect("a feasible instance has a feasible face")
}

/// Derivative-free descent: repeatedly shift load between pairs of bidders,
/// choosing the shift by a dense grid scan refined with golden-section
/// search, until no pair improves.
pub fn pairwise_exchange_oracle(units: &[Unit], demand: f64) -> OracleSolution {
    let n = units.len();
    let total: f64 = units.iter().map(|u| u.cap).sum();
    let mut x: Vec<f64> = units.iter().map(|u| demand * u.cap / total).collect();
    let pair_cost = |i: usize, j: usize, xi: f64, xj: f64| {
        0.5 * units[i].c * xi * xi + units[i].d * xi + 0.5 * units[j].c * xj * xj + units[j].d * xj
    };
    for _sweep in 0..5_000 {
        let mut improved = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                // move t from j to i
                let lo = (-x[i]).max(x[j] - units[j].cap);
                let hi = (units[i].cap - x[i]).min(x[j]);
                if hi - lo <= 0.0 {
                    continue;
                }
                let f = |t: f64| pair_cost(i, j, x[i] + t, x[j] - t);
                const GRID: usize = 64;
                let step = (hi - lo) / GRID as f64;
                let mut k_best = 0;
                let mut f_best = f(lo);
                for k in 1..=GRID {
                    let v = f(lo + k as f64 * step);
                    if v < f_best {
                        f_best = v;
                        k_best = k;
                    }
                }
                let mut a = (lo + (k_best as f64 - 1.0) * step).max(lo);
                let mut b = (lo + (k_best as f64 + 1.0) * step).min(hi);
                let phi = 0.5 * (5f64.sqrt() - 1.0);
                for _ in 0..120 {
                    let m1 = b - phi * (b - a);
                    let m2 = a + phi * (b - a);
                    if f(m1) <= f(m2) {
                        b = m2;
                    } else {
                        a = m1;
                    }
                }
                let t = 0.5 * (a + b);
                let before = f(0.0);
                let after = f(t);
                if after < before {
                    improved = improved.max(before - after);
                    x[i] = (x[i] + t).clamp(0.0, units[i].cap);
                    x[j] = (x[j] - t).clamp(0.0, units[j].cap);
                }
            }
        }
        if improved <= 1e-13 {
            break;
        }
    }
    OracleSolution {
        cost: cost(units, &x),
        allocations: x,
        price: None,
    }
}

pub fn units_of(instance: &MarketInstance, profile: &BidProfile) -> Vec<Unit> {
    instance
        .bidders()
        .iter()
        .zip(profile.as_slice())
        .map(|(b, &k)| Unit {
            c: b.actions()[k].c(),
            d: b.actions()[k].d(),
            cap: b.capacity(),
        })
        .collect()
}

pub fn instances_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../instances")
}

/// The bundled five-bidder grids at 1148.4 MW demand.
pub fn table_instance() -> MarketInstance {
    load_instance(instances_dir().join("paper_table1.json")).unwrap()
}

/// The same grids at 1448.4 MW, where truthful bidding costs the target
/// 19,419 EUR.
pub fn calibrated_instance() -> MarketInstance {
    load_instance(instances_dir().join("table1_q1448.json")).unwrap()
}
