//! Cross-model comparison and the entanglement sudden-death scan.

use std::collections::BTreeMap;

use relaxsim::redfield::StateKind;

use crate::config::{Model, SweepConfig};
use crate::sweep::{run_sweep, SweepRecord, UPPER_TRIANGLE};
use crate::{CliError, Result};

/// Maximum absolute discrepancy of one element between two models.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparePair {
    pub element: String,
    pub model_a: Model,
    pub model_b: Model,
    pub max_abs_diff: f64,
}

/// Discrepancy table keyed by (element, model pair).
#[derive(Debug, Clone, Default)]
pub struct CompareReport {
    pub pairs: Vec<ComparePair>,
}

impl CompareReport {
    pub fn max_discrepancy(&self) -> f64 {
        self.pairs
            .iter()
            .map(|p| p.max_abs_diff)
            .fold(0.0, f64::max)
    }

    pub fn exceeds(&self, tolerance: f64) -> bool {
        self.max_discrepancy() > tolerance
    }

    pub fn render(&self) -> String {
        let mut out = String::from("element   models                 max |diff|\n");
        for p in &self.pairs {
            out.push_str(&format!(
                "{:<9} {:<22} {:.3e}\n",
                p.element,
                format!("{} vs {}", p.model_a, p.model_b),
                p.max_abs_diff
            ));
        }
        out.push_str(&format!("overall max: {:.3e}\n", self.max_discrepancy()));
        out
    }
}

/// Builds the per-element, per-model-pair maximum-discrepancy table.
///
/// All models must cover the identical time grid.
pub fn compare_report(records: &[SweepRecord]) -> Result<CompareReport> {
    let mut by_model: BTreeMap<Model, Vec<&SweepRecord>> = BTreeMap::new();
    for rec in records {
        by_model.entry(rec.model).or_default().push(rec);
    }
    if by_model.len() < 2 {
        return Err(CliError::Config(
            "comparison needs records from at least two models".into(),
        ));
    }
    for recs in by_model.values_mut() {
        recs.sort_by(|a, b| a.t.partial_cmp(&b.t).expect("finite times"));
    }

    let models: Vec<Model> = by_model.keys().copied().collect();
    let reference: Vec<f64> = by_model[&models[0]].iter().map(|r| r.t).collect();
    for m in &models[1..] {
        let grid: Vec<f64> = by_model[m].iter().map(|r| r.t).collect();
        if grid != reference {
            return Err(CliError::GridMismatch(format!(
                "{} has {} samples vs {} for {}",
                m,
                grid.len(),
                reference.len(),
                models[0]
            )));
        }
    }

    let mut pairs = Vec::new();
    for (ai, a) in models.iter().enumerate() {
        for b in &models[ai + 1..] {
            for (i, j) in UPPER_TRIANGLE {
                let mut worst = 0.0f64;
                for (ra, rb) in by_model[a].iter().zip(by_model[b].iter()) {
                    let (re_a, im_a) = ra.element(i, j);
                    let (re_b, im_b) = rb.element(i, j);
                    let d = ((re_a - re_b).powi(2) + (im_a - im_b).powi(2)).sqrt();
                    worst = worst.max(d);
                }
                pairs.push(ComparePair {
                    element: format!("rho_{i}{j}"),
                    model_a: *a,
                    model_b: *b,
                    max_abs_diff: worst,
                });
            }
        }
    }
    Ok(CompareReport { pairs })
}

/// Result of a sudden-death scan over a sweep's concurrence column.
#[derive(Debug, Clone, PartialEq)]
pub enum SuddenDeathOutcome {
    /// First grid time at which the concurrence hits zero (≤ 1e-12) and
    /// stays zero through the end of the range.
    DeadAt(f64),
    /// Concurrence never settles to zero within the range.
    NoneInRange,
}

impl SuddenDeathOutcome {
    pub fn render(&self) -> String {
        match self {
            SuddenDeathOutcome::DeadAt(t) => format!("entanglement sudden death at t* = {t:.6} s"),
            SuddenDeathOutcome::NoneInRange => "none in range".to_string(),
        }
    }
}

const DEAD_TOL: f64 = 1e-12;

/// Scans the sweep's concurrence column for the first grid time from which
/// it stays at zero. Requires the Bell initial state at ε = 1.
pub fn sudden_death_scan(cfg: &SweepConfig) -> Result<SuddenDeathOutcome> {
    if cfg.state_kind != StateKind::Bell || cfg.epsilon != 1.0 {
        return Err(CliError::Config(
            "sudden-death scan requires the bell state at epsilon = 1".into(),
        ));
    }
    let mut cfg = cfg.clone();
    // One model suffices; the composite channel is the cheapest exact route.
    cfg.models = vec![*cfg.models.first().unwrap_or(&Model::Channel)];
    let records = run_sweep(&cfg)?;

    // Last index where the state is still entangled.
    let last_alive = records.iter().rposition(|r| r.concurrence > DEAD_TOL);
    match last_alive {
        None => Ok(SuddenDeathOutcome::DeadAt(records[0].t)),
        Some(idx) if idx + 1 < records.len() => Ok(SuddenDeathOutcome::DeadAt(records[idx + 1].t)),
        Some(_) => Ok(SuddenDeathOutcome::NoneInRange),
    }
}
