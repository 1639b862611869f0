use serde::Serialize;

/// Per-round mean and sample standard deviation over runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateSeries {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl AggregateSeries {
    pub fn len(&self) -> usize {
        self.mean.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mean.is_empty()
    }

    pub fn last_mean(&self) -> Option<f64> {
        self.mean.last().copied()
    }

    pub fn last_std(&self) -> Option<f64> {
        self.std.last().copied()
    }
}

/// Aggregates `runs[r][t]` across `r`. The standard deviation uses the
/// `R − 1` denominator and is zero for a single run. All runs must have the
/// same length.
pub fn aggregate(runs: &[Vec<f64>]) -> AggregateSeries {
    assert!(!runs.is_empty(), "aggregate needs at least one run");
    let rounds = runs[0].len();
    assert!(runs.iter().all(|r| r.len() == rounds), "ragged runs");
    let n = runs.len() as f64;
    let mut mean = Vec::with_capacity(rounds);
    let mut std = Vec::with_capacity(rounds);
    for t in 0..rounds {
        let first = runs[0][t];
        if runs.iter().all(|r| r[t] == first) {
            mean.push(first);
            std.push(0.0);
            continue;
        }
        let m = runs.iter().map(|r| r[t]).sum::<f64>() / n;
        let s = if runs.len() > 1 {
            let ss: f64 = runs.iter().map(|r| (r[t] - m).powi(2)).sum();
            (ss / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        mean.push(m);
        std.push(s);
    }
    AggregateSeries { mean, std }
}

/// Trailing moving average with window `window` (shorter at the start).
pub fn moving_average(values: &[f64], window: usize) -> Vec<f64> {
    assert!(window >= 1);
    let mut out = Vec::with_capacity(values.len());
    let mut sum = 0.0;
    for (i, v) in values.iter().enumerate() {
        sum += v;
        if i >= window {
            sum -= values[i - window];
        }
        out.push(sum / (i + 1).min(window) as f64);
    }
    out
}
