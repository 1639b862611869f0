//! Repeated-auction experiments over the eight bidding cases.
//!
//! The last bidder of the instance is the focal bidder ("Bidder 5" in the
//! five-bidder market); the others are its rivals.

mod regret;
mod stats;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use regret::{regret_of, RegretSeries};
pub use stats::{aggregate, moving_average, AggregateSeries};

use crate::agents::{
    counterfactual_utilities, hedge_eta, utility_bound, AgentError, NormalizationBound, Policy,
    PolicyKind,
};
use crate::equilibrium::{diagonalize, DiagonalizationOptions, DiagonalizationReport};
use crate::market::{clear_market, BidProfile, MarketError, MarketInstance};
use crate::seed::{bidder_rng, run_seed};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Market(#[from] MarketError),
    #[error(transparent)]
    Agent(#[from] AgentError),
    #[error("best-response diagonalization did not converge within {iterations} sweeps")]
    EquilibriumNotConverged { iterations: usize },
    #[error("invalid experiment configuration: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseId {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
}

impl CaseId {
    pub const ALL: [CaseId; 8] = [
        CaseId::A,
        CaseId::B,
        CaseId::C,
        CaseId::D,
        CaseId::E,
        CaseId::F,
        CaseId::G,
        CaseId::H,
    ];

    pub fn letter(self) -> char {
        match self {
            CaseId::A => 'a',
            CaseId::B => 'b',
            CaseId::C => 'c',
            CaseId::D => 'd',
            CaseId::E => 'e',
            CaseId::F => 'f',
            CaseId::G => 'g',
            CaseId::H => 'h',
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            CaseId::A => "Best Response",
            CaseId::B => "Trustful",
            CaseId::C => "Trustful vs Hedge",
            CaseId::D => "Trustful vs Random",
            CaseId::E => "Hedge vs Hedge",
            CaseId::F => "Hedge vs Random",
            CaseId::G => "Random vs Hedge",
            CaseId::H => "Random vs Random",
        }
    }

    /// `(rivals, focal bidder)`.
    fn roles(self) -> (Role, Role) {
        use Role::*;
        match self {
            CaseId::A => (BestResponse, BestResponse),
            CaseId::B => (Trustful, Trustful),
            CaseId::C => (Trustful, Hedge),
            CaseId::D => (Trustful, Random),
            CaseId::E => (Hedge, Hedge),
            CaseId::F => (Hedge, Random),
            CaseId::G => (Random, Hedge),
            CaseId::H => (Random, Random),
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for CaseId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CaseId::ALL
            .into_iter()
            .find(|c| s.len() == 1 && s.eq_ignore_ascii_case(&c.letter().to_string()))
            .ok_or_else(|| format!("unknown case '{s}', expected one of a..h"))
    }
}

/// What a bidder does in a case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    /// Replays its action in the precomputed equilibrium profile.
    BestResponse,
    Trustful,
    Random,
    Hedge,
}

impl Role {
    pub fn policy_kind(self) -> Option<PolicyKind> {
        match self {
            Role::BestResponse => None,
            Role::Trustful => Some(PolicyKind::Trustful),
            Role::Random => Some(PolicyKind::Random),
            Role::Hedge => Some(PolicyKind::Hedge),
        }
    }
}

/// Policy assignment of a case for a market of `bidders` participants.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseSpec {
    pub case: CaseId,
    pub roles: Vec<Role>,
}

impl CaseSpec {
    pub fn new(case: CaseId, bidders: usize) -> Self {
        assert!(bidders >= 1);
        let (rivals, focal) = case.roles();
        let mut roles = vec![rivals; bidders - 1];
        roles.push(focal);
        Self { case, roles }
    }

    pub fn focal(&self) -> usize {
        self.roles.len() - 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub case: CaseId,
    pub rounds: usize,
    pub runs: usize,
    pub base_seed: u64,
    /// Overrides `√(8·ln K / T)` for every Hedge bidder.
    pub eta: Option<f64>,
    pub diagonalization: DiagonalizationOptions,
    /// Starting profile of the diagonalization; all true costs when unset.
    pub initial_profile: Option<BidProfile>,
    pub bound: NormalizationBound,
    /// Bidders whose regret is reported; the focal bidder when unset.
    pub regret_bidders: Option<Vec<usize>>,
    /// Worker threads for runs; 0 uses every core. Never affects results.
    #[serde(skip)]
    pub jobs: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            case: CaseId::B,
            rounds: 200,
            runs: 15,
            base_seed: 0,
            eta: None,
            diagonalization: DiagonalizationOptions::default(),
            initial_profile: None,
            bound: NormalizationBound::default(),
            regret_bidders: None,
            jobs: 1,
        }
    }
}

impl ExperimentConfig {
    pub fn for_case(case: CaseId) -> Self {
        Self {
            case,
            ..Self::default()
        }
    }

    fn validate(&self, instance: &MarketInstance) -> Result<(), ExperimentError> {
        if self.rounds == 0 {
            return Err(ExperimentError::Config("rounds must be at least 1".into()));
        }
        if self.runs == 0 {
            return Err(ExperimentError::Config("runs must be at least 1".into()));
        }
        if let Some(eta) = self.eta {
            if !(eta.is_finite() && eta >= 0.0) {
                return Err(AgentError::InvalidEta(eta).into());
            }
        }
        if let Some(bidders) = &self.regret_bidders {
            if let Some(b) = bidders.iter().find(|&&b| b >= instance.len()) {
                return Err(ExperimentError::Config(format!(
                    "regret bidder {b} does not exist"
                )));
            }
        }
        if let Some(p) = &self.initial_profile {
            instance.check_profile(p)?;
        }
        Ok(())
    }
}

/// Everything observed in one round of one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundRecord {
    pub run: usize,
    /// 1-based.
    pub round: usize,
    pub profile: BidProfile,
    pub price: f64,
    pub social_cost: f64,
    pub allocations: Vec<f64>,
    pub payments: Vec<f64>,
    pub utilities: Vec<f64>,
    /// Per bidder: utility of each of its actions against the realized rival
    /// bids. Present for Hedge bidders and bidders whose regret is tracked.
    pub counterfactuals: Vec<Option<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunOutput {
    pub run: usize,
    pub seed: u64,
    pub records: Vec<RoundRecord>,
    /// One series per tracked bidder, in tracking order.
    pub regret: Vec<RegretSeries>,
    /// Hedge weights after the last update, per bidder.
    pub final_weights: Vec<Option<Vec<f64>>>,
    /// Utilities that fell outside `[0, bound]` before normalization.
    pub clipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseOutcome {
    pub spec: CaseSpec,
    pub config: ExperimentConfig,
    /// Learning rate per bidder (0 for non-learners).
    pub etas: Vec<f64>,
    /// Normalization bound per bidder (€).
    pub bounds: Vec<f64>,
    pub tracked: Vec<usize>,
    pub equilibrium: Option<DiagonalizationReport>,
    pub runs: Vec<RunOutput>,
}

impl CaseOutcome {
    fn series(&self, f: impl Fn(&RoundRecord) -> f64) -> Vec<Vec<f64>> {
        self.runs
            .iter()
            .map(|r| r.records.iter().map(&f).collect())
            .collect()
    }

    pub fn social_cost_runs(&self) -> Vec<Vec<f64>> {
        self.series(|r| r.social_cost)
    }

    pub fn price_runs(&self) -> Vec<Vec<f64>> {
        self.series(|r| r.price)
    }

    pub fn payoff_runs(&self, bidder: usize) -> Vec<Vec<f64>> {
        self.series(|r| r.utilities[bidder])
    }

    pub fn regret(&self, run: usize, bidder: usize) -> Option<&RegretSeries> {
        self.runs[run].regret.iter().find(|s| s.bidder == bidder)
    }

    pub fn average_regret_runs(&self, bidder: usize) -> Option<Vec<Vec<f64>>> {
        (0..self.runs.len())
            .map(|r| self.regret(r, bidder).map(|s| s.average.clone()))
            .collect()
    }

    pub fn cumulative_regret_runs(&self, bidder: usize) -> Option<Vec<Vec<f64>>> {
        (0..self.runs.len())
            .map(|r| self.regret(r, bidder).map(|s| s.cumulative.clone()))
            .collect()
    }

    /// Hedge weights of `bidder` after the last round, averaged over runs.
    pub fn mean_final_weights(&self, bidder: usize) -> Option<Vec<f64>> {
        let all: Option<Vec<&Vec<f64>>> = self
            .runs
            .iter()
            .map(|r| r.final_weights[bidder].as_ref())
            .collect();
        let all = all?;
        let k = all[0].len();
        Some(
            (0..k)
                .map(|i| all.iter().map(|w| w[i]).sum::<f64>() / all.len() as f64)
                .collect(),
        )
    }

    pub fn clipped(&self) -> usize {
        self.runs.iter().map(|r| r.clipped).sum()
    }
}

struct RunContext<'a> {
    instance: &'a MarketInstance,
    spec: &'a CaseSpec,
    config: &'a ExperimentConfig,
    etas: &'a [f64],
    bounds: &'a [f64],
    tracked: &'a [usize],
    equilibrium: Option<&'a BidProfile>,
}

fn simulate_run(ctx: &RunContext<'_>, run: usize) -> Result<RunOutput, ExperimentError> {
    let instance = ctx.instance;
    let n = instance.len();
    let seed = run_seed(ctx.config.base_seed, run);
    let mut rngs: Vec<_> = (0..n).map(|b| bidder_rng(seed, b)).collect();
    let mut policies = ctx
        .spec
        .roles
        .iter()
        .enumerate()
        .map(|(b, role)| match role.policy_kind() {
            Some(kind) => Policy::new(kind, instance.bidder(b).action_count(), ctx.etas[b]),
            None => Ok(Policy::Fixed(
                ctx.equilibrium.expect("equilibrium profile").action(b),
            )),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let wants_counterfactuals: Vec<bool> = (0..n)
        .map(|b| matches!(policies[b], Policy::Hedge(_)) || ctx.tracked.contains(&b))
        .collect();

    let mut records = Vec::with_capacity(ctx.config.rounds);
    let mut clipped = 0;
    let mut profile = BidProfile::truthful(n);
    for round in 1..=ctx.config.rounds {
        for (b, policy) in policies.iter().enumerate() {
            profile.set(b, policy.step(&mut rngs[b]));
        }
        let result = clear_market(instance, &profile)?;
        let mut counterfactuals = vec![None; n];
        for b in (0..n).filter(|&b| wants_counterfactuals[b]) {
            let utilities = counterfactual_utilities(instance, &profile, b, Some(&result))?;
            if let Some(state) = policies[b].hedge_mut() {
                let bound = ctx.bounds[b];
                clipped += utilities.iter().filter(|&&u| u < 0.0 || u > bound).count();
                let normalized: Vec<f64> = utilities
                    .iter()
                    .map(|u| (u / bound).clamp(0.0, 1.0))
                    .collect();
                state.update(&normalized);
            }
            counterfactuals[b] = Some(utilities);
        }
        records.push(RoundRecord {
            run,
            round,
            profile: profile.clone(),
            price: result.price,
            social_cost: result.social_cost,
            allocations: result.allocations,
            payments: result.payments,
            utilities: result.utilities,
            counterfactuals,
        });
    }

    let regret = ctx
        .tracked
        .iter()
        .map(|&b| regret_of(instance, &records, b))
        .collect::<Result<Vec<_>, _>>()?;
    let final_weights = policies
        .iter()
        .map(|p| p.hedge().map(|s| s.weights().to_vec()))
        .collect();
    Ok(RunOutput {
        run,
        seed,
        records,
        regret,
        final_weights,
        clipped,
    })
}

fn in_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Runs one case: `runs` independent repetitions of `rounds` auctions.
pub fn run_case(
    instance: &MarketInstance,
    config: &ExperimentConfig,
) -> Result<CaseOutcome, ExperimentError> {
    let equilibrium = match config.case {
        CaseId::A => Some(solve_equilibrium(instance, config)?),
        _ => None,
    };
    run_case_with(instance, config, equilibrium)
}

fn solve_equilibrium(
    instance: &MarketInstance,
    config: &ExperimentConfig,
) -> Result<DiagonalizationReport, ExperimentError> {
    let initial = config
        .initial_profile
        .clone()
        .unwrap_or_else(|| BidProfile::truthful(instance.len()));
    let report = diagonalize(instance, &initial, &config.diagonalization)?;
    if !report.converged {
        return Err(ExperimentError::EquilibriumNotConverged {
            iterations: report.iterations,
        });
    }
    Ok(report)
}

fn run_case_with(
    instance: &MarketInstance,
    config: &ExperimentConfig,
    equilibrium: Option<DiagonalizationReport>,
) -> Result<CaseOutcome, ExperimentError> {
    config.validate(instance)?;
    let spec = CaseSpec::new(config.case, instance.len());
    let etas: Vec<f64> = spec
        .roles
        .iter()
        .enumerate()
        .map(|(b, role)| match role {
            Role::Hedge => config
                .eta
                .unwrap_or_else(|| hedge_eta(instance.bidder(b).action_count(), config.rounds)),
            _ => 0.0,
        })
        .collect();
    let bounds: Vec<f64> = (0..instance.len())
        .map(|b| utility_bound(instance, b, config.bound))
        .collect();
    let tracked = config
        .regret_bidders
        .clone()
        .unwrap_or_else(|| vec![spec.focal()]);

    let ctx = RunContext {
        instance,
        spec: &spec,
        config,
        etas: &etas,
        bounds: &bounds,
        tracked: &tracked,
        equilibrium: equilibrium.as_ref().map(|r| &r.profile),
    };
    let runs = if config.jobs == 1 {
        (0..config.runs)
            .map(|r| simulate_run(&ctx, r))
            .collect::<Result<Vec<_>, _>>()?
    } else {
        in_pool(config.jobs, || {
            (0..config.runs)
                .into_par_iter()
                .map(|r| simulate_run(&ctx, r))
                .collect::<Result<Vec<_>, _>>()
        })?
    };
    Ok(CaseOutcome {
        spec,
        config: config.clone(),
        etas,
        bounds,
        tracked,
        equilibrium,
        runs,
    })
}

/// One line of the cross-case comparison, using last-round statistics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub case: CaseId,
    pub label: &'static str,
    pub social_cost_mean: f64,
    pub social_cost_std: f64,
    pub price_mean: f64,
    pub price_std: f64,
    pub focal_payoff_mean: f64,
    pub focal_average_regret_mean: f64,
}

impl SummaryRow {
    pub fn from_outcome(outcome: &CaseOutcome) -> Self {
        let focal = outcome.spec.focal();
        let cost = aggregate(&outcome.social_cost_runs());
        let price = aggregate(&outcome.price_runs());
        let payoff = aggregate(&outcome.payoff_runs(focal));
        let regret = outcome
            .average_regret_runs(focal)
            .map(|r| aggregate(&r).last_mean().unwrap_or(0.0))
            .unwrap_or(f64::NAN);
        Self {
            case: outcome.spec.case,
            label: outcome.spec.case.label(),
            social_cost_mean: cost.last_mean().unwrap_or(0.0),
            social_cost_std: cost.last_std().unwrap_or(0.0),
            price_mean: price.last_mean().unwrap_or(0.0),
            price_std: price.last_std().unwrap_or(0.0),
            focal_payoff_mean: payoff.last_mean().unwrap_or(0.0),
            focal_average_regret_mean: regret,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AllCases {
    /// In case order a..h.
    pub outcomes: Vec<CaseOutcome>,
    /// Sorted by last-round mean social cost, ascending.
    pub table: Vec<SummaryRow>,
}

/// Runs every case with the settings of `template` (its `case` is ignored).
pub fn run_all_cases(
    instance: &MarketInstance,
    template: &ExperimentConfig,
) -> Result<AllCases, ExperimentError> {
    run_cases(instance, template, &CaseId::ALL)
}

/// Runs a subset of the cases with shared settings.
pub fn run_cases(
    instance: &MarketInstance,
    template: &ExperimentConfig,
    cases: &[CaseId],
) -> Result<AllCases, ExperimentError> {
    let outcomes = cases
        .iter()
        .map(|&case| {
            let config = ExperimentConfig {
                case,
                ..template.clone()
            };
            run_case(instance, &config)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut table: Vec<SummaryRow> = outcomes.iter().map(SummaryRow::from_outcome).collect();
    table.sort_by(|a, b| {
        a.social_cost_mean
            .total_cmp(&b.social_cost_mean)
            .then(a.case.cmp(&b.case))
    });
    Ok(AllCases { outcomes, table })
}
