use std::collections::BTreeSet;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::{region_points, GridSpec, Q_UPPER_END};
use super::HarnessError;
use crate::bound::{BoundEval, BoundId, Direction, Family, XRegion};
use crate::special::{quadrature_q_oracle, Params};
use crate::{expo_bounds, gamma_bounds, gauss_approx, q_bounds, Error};

/// At most this many infrastructure errors are kept verbatim in a report.
const MAX_INFRA_SAMPLES: usize = 50;

/// A grid point; `b` is absent for the gamma bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub a: f64,
    pub b: Option<f64>,
    pub x: f64,
}

/// Margins of one bound at one `(a, b)` pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub bound: BoundId,
    pub a: f64,
    pub b: Option<f64>,
    pub checked: u64,
    pub violations: u64,
    /// Smallest signed relative margin: positive is slack, negative is the
    /// depth of a violation.
    pub worst_margin: Option<f64>,
    pub worst_x: Option<f64>,
    /// Largest relative deviation at points where the bound is an equality.
    pub max_equality_deviation: Option<f64>,
}

impl Record {
    fn new(bound: BoundId, a: f64, b: Option<f64>) -> Self {
        Record {
            bound,
            a,
            b,
            checked: 0,
            violations: 0,
            worst_margin: None,
            worst_x: None,
            max_equality_deviation: None,
        }
    }

    fn add(&mut self, direction: Direction, margin: f64, x: f64, slack: f64) {
        self.checked += 1;
        if margin < -slack || margin.is_nan() {
            self.violations += 1;
        }
        if self.worst_margin.is_none_or(|w| margin < w) {
            self.worst_margin = Some(margin);
            self.worst_x = Some(x);
        }
        if direction == Direction::Equality {
            let dev = -margin;
            self.max_equality_deviation =
                Some(self.max_equality_deviation.map_or(dev, |d| d.max(dev)));
        }
    }
}

/// Totals for one bound over the whole grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundSummary {
    pub bound: BoundId,
    pub family: Family,
    pub checked: u64,
    pub violations: u64,
    pub worst_margin: Option<f64>,
    pub worst_point: Option<Point>,
    pub max_equality_deviation: Option<f64>,
}

/// The strict orderings between the Segura-type and Jensen-type `Q` bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct OrderingSummary {
    pub checked: u64,
    pub exceptions: u64,
    /// Smallest `ln(larger) - ln(smaller)` seen.
    pub smallest_ln_gap: Option<f64>,
    pub worst_point: Option<Point>,
    /// `(smaller, larger)` as claimed, at the smallest gap.
    pub worst_pair: Option<(BoundId, BoundId)>,
}

impl OrderingSummary {
    fn add(&mut self, o: &q_bounds::Ordering, point: Point) {
        self.checked += 1;
        if !o.holds {
            self.exceptions += 1;
        }
        if self.smallest_ln_gap.is_none_or(|g| o.ln_gap < g) {
            self.smallest_ln_gap = Some(o.ln_gap);
            self.worst_point = Some(point);
            self.worst_pair = Some((o.smaller, o.larger));
        }
    }

    fn merge(&mut self, other: &OrderingSummary) {
        self.checked += other.checked;
        self.exceptions += other.exceptions;
        if let Some(g) = other.smallest_ln_gap {
            if self.smallest_ln_gap.is_none_or(|s| g < s) {
                self.smallest_ln_gap = Some(g);
                self.worst_point = other.worst_point;
                self.worst_pair = other.worst_pair;
            }
        }
    }
}

/// An oracle or evaluation failure, kept apart from bound violations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfraError {
    pub family: Family,
    pub bound: Option<BoundId>,
    pub a: f64,
    pub b: Option<f64>,
    pub x: Option<f64>,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Pass,
    /// At least one bound failed against its oracle.
    Violation,
    /// No violation, but some points could not be evaluated.
    InfraError,
}

impl Outcome {
    /// Process exit code: 0 pass, 1 violation, 2 infrastructure error.
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Violation => 1,
            Outcome::InfraError => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub grid: GridSpec,
    pub outcome: Outcome,
    /// One entry per bound, in [`BoundId::ALL`] order.
    pub bounds: Vec<BoundSummary>,
    pub orderings: OrderingSummary,
    pub infra_error_count: u64,
    pub infra_errors: Vec<InfraError>,
    /// One entry per bound and parameter pair.
    pub records: Vec<Record>,
}

impl VerificationReport {
    pub fn pass(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    pub fn summary(&self, id: BoundId) -> &BoundSummary {
        self.bounds
            .iter()
            .find(|s| s.bound == id)
            .expect("every bound has a summary")
    }

    pub fn total_checked(&self) -> u64 {
        self.bounds.iter().map(|s| s.checked).sum()
    }

    pub fn total_violations(&self) -> u64 {
        self.bounds.iter().map(|s| s.violations).sum()
    }

    pub fn to_json(&self) -> Result<String, HarnessError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Human-readable table.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<22} {:<6} {:>9} {:>6} {:>13}  worst point",
            "bound", "family", "checked", "viol", "worst margin"
        );
        for s in &self.bounds {
            let fam = format!("{:?}", s.family).to_lowercase();
            let margin = s.worst_margin.map_or("-".into(), |m| format!("{m:.3e}"));
            let point = s.worst_point.map_or("-".into(), fmt_point);
            let _ = writeln!(
                out,
                "{:<22} {:<6} {:>9} {:>6} {:>13}  {}",
                s.bound.name(),
                fam,
                s.checked,
                s.violations,
                margin,
                point
            );
        }
        let o = &self.orderings;
        let _ = writeln!(
            out,
            "orderings: {} checked, {} exceptions, smallest log gap {}{}",
            o.checked,
            o.exceptions,
            o.smallest_ln_gap.map_or("-".into(), |g| format!("{g:.3e}")),
            match (o.worst_pair, o.worst_point) {
                (Some((s, l)), Some(p)) => format!(" ({s} < {l} at {})", fmt_point(p)),
                _ => String::new(),
            }
        );
        let _ = writeln!(out, "infrastructure errors: {}", self.infra_error_count);
        for e in &self.infra_errors {
            let _ = writeln!(
                out,
                "  {:?} a={} b={:?} x={:?}: {}",
                e.family, e.a, e.b, e.x, e.message
            );
        }
        let _ = writeln!(
            out,
            "{}: {} checks, {} violations",
            match self.outcome {
                Outcome::Pass => "PASS",
                Outcome::Violation => "FAIL",
                Outcome::InfraError => "ERROR",
            },
            self.total_checked(),
            self.total_violations()
        );
        out
    }
}

fn fmt_point(p: Point) -> String {
    match p.b {
        Some(b) => format!("a={} b={} x={}", p.a, b, p.x),
        None => format!("a={} x={}", p.a, p.x),
    }
}

/// How grid tasks are scheduled. The report does not depend on the choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Serial,
    /// Uses the global rayon pool, or a dedicated pool with this many threads.
    Parallel(Option<usize>),
}

/// Check every bound at every in-region grid point against its oracle,
/// in parallel.
pub fn verify_all(grid: &GridSpec) -> Result<VerificationReport, HarnessError> {
    verify_with(grid, Execution::Parallel(None))
}

pub fn verify_with(grid: &GridSpec, exec: Execution) -> Result<VerificationReport, HarnessError> {
    grid.validate()?;
    check_coverage()?;
    let tasks = tasks(grid);
    let run = |t: &Task| run_task(t, grid);
    let outputs: Vec<TaskOutput> = match exec {
        Execution::Serial => tasks.iter().map(run).collect(),
        Execution::Parallel(None) => tasks.par_iter().map(run).collect(),
        Execution::Parallel(Some(n)) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Invariant(format!("thread pool: {e}")))?
            .install(|| tasks.par_iter().map(run).collect()),
    };
    Ok(assemble(grid, outputs))
}

/// Every bound must be evaluated by exactly one family.
fn check_coverage() -> Result<(), Error> {
    let covered: BTreeSet<BoundId> = q_bounds::IDS
        .iter()
        .chain(&gamma_bounds::CDF_IDS)
        .chain(&gamma_bounds::SURVIVAL_IDS)
        .chain(&expo_bounds::IDS)
        .chain(&gauss_approx::IDS)
        .copied()
        .collect();
    let all: BTreeSet<BoundId> = BoundId::ALL.iter().copied().collect();
    if covered != all {
        let missing: Vec<_> = all.difference(&covered).map(|id| id.name()).collect();
        return Err(Error::Invariant(format!(
            "bounds without a verifier: {missing:?}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy)]
enum Task {
    Q(f64, f64),
    Gamma(f64),
    Expo(f64, f64),
    Gauss(f64, f64),
}

fn tasks(grid: &GridSpec) -> Vec<Task> {
    let mut out = Vec::new();
    let pairs = || {
        grid.a_values
            .iter()
            .flat_map(|&a| grid.b_values.iter().map(move |&b| (a, b)))
    };
    out.extend(pairs().map(|(a, b)| Task::Q(a, b)));
    out.extend(grid.a_values.iter().map(|&a| Task::Gamma(a)));
    out.extend(pairs().map(|(a, b)| Task::Expo(a, b)));
    out.extend(pairs().map(|(a, b)| Task::Gauss(a, b)));
    out
}

#[derive(Default)]
struct TaskOutput {
    records: Vec<Record>,
    orderings: OrderingSummary,
    infra: Vec<InfraError>,
}

impl TaskOutput {
    fn infra(
        &mut self,
        family: Family,
        bound: Option<BoundId>,
        a: f64,
        b: Option<f64>,
        x: Option<f64>,
        e: Error,
    ) {
        self.infra.push(InfraError {
            family,
            bound,
            a,
            b,
            x,
            message: e.to_string(),
        });
    }
}

/// `bound/target - 1` from logs, with `0/0` read as `1`.
fn ratio_minus_one(e: &BoundEval, ln_target: f64) -> f64 {
    match e.ln_value {
        Some(l) => {
            let d = l - ln_target;
            if d.is_nan() {
                0.0
            } else {
                d.exp_m1()
            }
        }
        None if e.value() == 0.0 => {
            if ln_target == f64::NEG_INFINITY {
                0.0
            } else {
                -1.0
            }
        }
        None => e.value() * (-ln_target).exp() - 1.0,
    }
}

fn signed_margin(e: &BoundEval, ln_target: f64) -> f64 {
    let r = ratio_minus_one(e, ln_target);
    match e.direction {
        Direction::Upper => r,
        Direction::Lower => -r,
        Direction::Equality | Direction::NotApplicable => -r.abs(),
    }
}

fn run_task(task: &Task, grid: &GridSpec) -> TaskOutput {
    let mut out = TaskOutput::default();
    let n = grid.x_resolution;
    let slack = grid.slack;
    match *task {
        Task::Q(a, b) => {
            let p = Params::new(a, b).expect("validated grid");
            let mut recs: Vec<Record> = q_bounds::IDS
                .iter()
                .map(|&id| Record::new(id, a, Some(b)))
                .collect();
            for x in region_points(XRegion::closed(0.0, Q_UPPER_END), n) {
                let ln_t = match quadrature_q_oracle(&p, x) {
                    Ok(v) => v.ln(),
                    Err(e) => {
                        out.infra(Family::Q, None, a, Some(b), Some(x), e);
                        continue;
                    }
                };
                for (rec, &id) in recs.iter_mut().zip(&q_bounds::IDS) {
                    match q_bounds::evaluate(id, &p, x) {
                        Ok(e) if e.is_active() => {
                            rec.add(e.direction, signed_margin(&e, ln_t), x, slack)
                        }
                        Ok(_) => {}
                        Err(err) => out.infra(Family::Q, Some(id), a, Some(b), Some(x), err),
                    }
                }
                match q_bounds::strict_orderings(&p, x) {
                    Ok(list) => {
                        for o in &list {
                            out.orderings.add(o, Point { a, b: Some(b), x });
                        }
                    }
                    Err(err) => out.infra(Family::Q, None, a, Some(b), Some(x), err),
                }
            }
            out.records = recs;
        }
        Task::Gamma(a) => {
            let ids: Vec<BoundId> = gamma_bounds::CDF_IDS
                .iter()
                .chain(&gamma_bounds::SURVIVAL_IDS)
                .copied()
                .collect();
            let mut recs: Vec<Record> = ids.iter().map(|&id| Record::new(id, a, None)).collect();
            let x_max = f64::max(4.0 * (a + 1.0), 40.0);
            for x in region_points(XRegion::closed(0.0, x_max), n) {
                let targets = gamma_bounds::ln_cdf_target(a, x)
                    .and_then(|c| Ok((c, gamma_bounds::ln_survival_target(a, x)?)));
                let (tc, ts) = match targets {
                    Ok(t) => t,
                    Err(e) => {
                        out.infra(Family::Gamma, None, a, None, Some(x), e);
                        continue;
                    }
                };
                for (rec, &id) in recs.iter_mut().zip(&ids) {
                    let t = if gamma_bounds::CDF_IDS.contains(&id) {
                        tc
                    } else {
                        ts
                    };
                    match gamma_bounds::evaluate(id, a, x) {
                        Ok(e) if e.is_active() => {
                            rec.add(e.direction, signed_margin(&e, t), x, slack)
                        }
                        Ok(_) => {}
                        Err(err) => out.infra(Family::Gamma, Some(id), a, None, Some(x), err),
                    }
                }
            }
            out.records = recs;
        }
        Task::Expo(a, b) => {
            let p = Params::new(a, b).expect("validated grid");
            for id in expo_bounds::IDS {
                let mut rec = Record::new(id, a, Some(b));
                let (Some(region), Some(tail)) =
                    (expo_bounds::region(id, &p), expo_bounds::tail(id))
                else {
                    continue;
                };
                for x in region_points(region, n) {
                    let checked = expo_bounds::ln_tail_target(tail, &p, x)
                        .and_then(|t| Ok((t, expo_bounds::evaluate_all(id, &p, x)?)));
                    match checked {
                        Ok((t, evals)) => {
                            for e in evals.iter().filter(|e| e.is_active()) {
                                rec.add(e.direction, signed_margin(e, t), x, slack);
                            }
                        }
                        Err(err) => out.infra(Family::Expo, Some(id), a, Some(b), Some(x), err),
                    }
                }
                out.records.push(rec);
            }
        }
        Task::Gauss(a, b) => {
            let p = Params::new(a, b).expect("validated grid");
            for id in gauss_approx::IDS {
                let mut rec = Record::new(id, a, Some(b));
                let (Some(region), Some(tail)) =
                    (gauss_approx::region(id, &p), gauss_approx::tail(id))
                else {
                    continue;
                };
                for x in region_points(region, n) {
                    let checked = expo_bounds::ln_tail_target(tail, &p, x)
                        .and_then(|t| Ok((t, gauss_approx::evaluate_all(id, &p, x)?)));
                    match checked {
                        Ok((t, evals)) => {
                            for e in evals.iter().filter(|e| e.is_active()) {
                                rec.add(e.direction, signed_margin(e, t), x, slack);
                            }
                        }
                        Err(err) => out.infra(Family::Gauss, Some(id), a, Some(b), Some(x), err),
                    }
                }
                out.records.push(rec);
            }
        }
    }
    out
}

fn assemble(grid: &GridSpec, outputs: Vec<TaskOutput>) -> VerificationReport {
    let mut records = Vec::new();
    let mut orderings = OrderingSummary::default();
    let mut infra = Vec::new();
    let mut infra_count = 0u64;
    for o in outputs {
        records.extend(o.records);
        orderings.merge(&o.orderings);
        infra_count += o.infra.len() as u64;
        let room = MAX_INFRA_SAMPLES.saturating_sub(infra.len());
        infra.extend(o.infra.into_iter().take(room));
    }
    let bounds: Vec<BoundSummary> = BoundId::ALL
        .iter()
        .map(|&id| {
            let mut s = BoundSummary {
                bound: id,
                family: id.family(),
                checked: 0,
                violations: 0,
                worst_margin: None,
                worst_point: None,
                max_equality_deviation: None,
            };
            for r in records.iter().filter(|r| r.bound == id) {
                s.checked += r.checked;
                s.violations += r.violations;
                if let (Some(m), Some(x)) = (r.worst_margin, r.worst_x) {
                    if s.worst_margin.is_none_or(|w| m < w) {
                        s.worst_margin = Some(m);
                        s.worst_point = Some(Point { a: r.a, b: r.b, x });
                    }
                }
                if let Some(d) = r.max_equality_deviation {
                    s.max_equality_deviation =
                        Some(s.max_equality_deviation.map_or(d, |c| c.max(d)));
                }
            }
            s
        })
        .collect();
    // Ordering exceptions are reported but do not fail the run: they compare
    // two valid bounds with each other, not a bound with the truth.
    let violated = bounds.iter().any(|s| s.violations > 0);
    let outcome = if violated {
        Outcome::Violation
    } else if infra_count > 0 {
        Outcome::InfraError
    } else {
        Outcome::Pass
    };
    VerificationReport {
        grid: grid.clone(),
        outcome,
        bounds,
        orderings,
        infra_error_count: infra_count,
        infra_errors: infra,
        records,
    }
}
