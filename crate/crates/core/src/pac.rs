//! The peek arc consistency procedure: pin every (variable, orbit
//! representative) pair, run arc consistency on the pinned instance, and
//! reject exactly when some variable fails for every representative.
//!
//! Peek tasks are distributed over a worker pool; each variable's peeks run
//! as one unit in representative order, so the report is a pure function of
//! the instance and template — independent of worker count and scheduling.
//! Reject-fast mode may leave later variables unexplored and is therefore
//! excluded from the byte-identical-output guarantee.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::OnceLock;

use crate::ac::{ac_descriptor, ac_finite, AcOptions, Template};
use crate::descriptor::RepId;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::orbits::orbit_representatives;
use crate::structure::{Element, Structure};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Accept,
    Reject,
}

impl Decision {
    pub fn accepted(self) -> bool {
        self == Decision::Accept
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PeekStatus {
    Pass,
    Fail,
    /// Not run because an earlier representative already passed.
    Skipped,
    /// Not run because reject-fast stopped the pool.
    Unexplored,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeekOutcome {
    pub representative: RepId,
    pub status: PeekStatus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariablePeeks {
    pub variable: Element,
    pub passed: bool,
    pub explored: bool,
    pub peeks: Vec<PeekOutcome>,
}

/// Outcome of the peek loop: per-variable, per-representative results plus
/// the aggregate decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeekReport {
    pub decision: Decision,
    pub rejecting_variable: Option<Element>,
    pub representatives: Vec<RepId>,
    pub variables: Vec<VariablePeeks>,
}

impl PeekReport {
    pub fn accepted(&self) -> bool {
        self.decision.accepted()
    }

    /// Stable machine-readable rendering, one line per variable.
    pub fn render_lines(&self, instance: &Structure) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "decision {}\n",
            match self.decision {
                Decision::Accept => "accept",
                Decision::Reject => "reject",
            }
        ));
        if let Some(v) = self.rejecting_variable {
            out.push_str(&format!("rejecting_variable {}\n", instance.element_name(v)));
        }
        for var in &self.variables {
            out.push_str(&format!("peeks {}", instance.element_name(var.variable)));
            for peek in &var.peeks {
                let status = match peek.status {
                    PeekStatus::Pass => "pass",
                    PeekStatus::Fail => "fail",
                    PeekStatus::Skipped => "skip",
                    PeekStatus::Unexplored => "unexplored",
                };
                out.push_str(&format!(" {}:{}", peek.representative, status));
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct PacOptions {
    /// Stop peeking a variable once one representative passes.
    pub short_circuit: bool,
    /// Stop the whole pool at the first all-fail variable; remaining
    /// variables are reported unexplored.
    pub reject_fast: bool,
    /// Use the naive restart-loop propagation in each peek.
    pub naive_ac: bool,
}

impl Default for PacOptions {
    fn default() -> Self {
        PacOptions { short_circuit: true, reject_fast: false, naive_ac: false }
    }
}

fn peek_passes(
    instance: &Structure,
    template: Template<'_>,
    variable: Element,
    rep: RepId,
    ac_options: &AcOptions,
) -> Result<bool> {
    Ok(match template {
        Template::Finite(b) => {
            ac_finite(instance, b, &[(variable, rep)], ac_options)?.is_consistent()
        }
        Template::Descriptor(d) => {
            ac_descriptor(instance, d, &[(variable, rep)], ac_options)?.is_consistent()
        }
    })
}

fn evaluate_variable(
    instance: &Structure,
    template: Template<'_>,
    variable: Element,
    reps: &[RepId],
    options: &PacOptions,
) -> Result<VariablePeeks> {
    let ac_options = AcOptions { naive: options.naive_ac, ..Default::default() };
    let mut peeks = Vec::with_capacity(reps.len());
    let mut passed = false;
    for &rep in reps {
        if passed && options.short_circuit {
            peeks.push(PeekOutcome { representative: rep, status: PeekStatus::Skipped });
            continue;
        }
        let pass = peek_passes(instance, template, variable, rep, &ac_options)?;
        passed |= pass;
        peeks.push(PeekOutcome {
            representative: rep,
            status: if pass { PeekStatus::Pass } else { PeekStatus::Fail },
        });
    }
    Ok(VariablePeeks { variable, passed, explored: true, peeks })
}

/// Representatives to peek: descriptor orbits, or the template's computed
/// orbit representatives with the all-elements fallback above the cap
/// (pinning orbit-equivalent values gives identical outcomes, so the
/// fallback only adds redundant peeks).
pub fn peek_representatives(template: Template<'_>, limits: &Limits) -> Vec<RepId> {
    match template {
        Template::Finite(b) => orbit_representatives(b, limits),
        Template::Descriptor(d) => d.representatives(),
    }
}

/// Runs the peek loop over all (variable, representative) pairs with
/// `workers` threads and aggregates the per-variable outcomes.
pub fn pac_decide(
    instance: &Structure,
    template: Template<'_>,
    workers: usize,
    options: &PacOptions,
    limits: &Limits,
) -> Result<PeekReport> {
    if workers == 0 {
        return Err(Error::Invalid("workers must be >= 1".into()));
    }
    // surface signature problems before spawning workers
    if let Template::Finite(b) = template {
        if instance.signature() != b.signature() {
            return Err(Error::SignatureMismatch(
                "instance and template signatures differ".into(),
            ));
        }
    }
    let reps = peek_representatives(template, limits);
    let n = instance.size();

    let results: Vec<OnceLock<Result<VariablePeeks>>> =
        (0..n).map(|_| OnceLock::new()).collect();
    let next = AtomicUsize::new(0);
    let stop = AtomicBool::new(false);

    let run_worker = |_worker_id: usize| loop {
        let var = next.fetch_add(1, Ordering::Relaxed);
        if var >= n {
            break;
        }
        if options.reject_fast && stop.load(Ordering::Relaxed) {
            let peeks = reps
                .iter()
                .map(|&rep| PeekOutcome { representative: rep, status: PeekStatus::Unexplored })
                .collect();
            let _ = results[var].set(Ok(VariablePeeks {
                variable: var,
                passed: false,
                explored: false,
                peeks,
            }));
            continue;
        }
        let outcome = evaluate_variable(instance, template, var, &reps, options);
        if options.reject_fast {
            if let Ok(v) = &outcome {
                if !v.passed {
                    stop.store(true, Ordering::Relaxed);
                }
            }
        }
        let _ = results[var].set(outcome);
    };

    let thread_count = workers.min(n.max(1));
    if thread_count <= 1 {
        run_worker(0);
    } else {
        std::thread::scope(|scope| {
            for id in 0..thread_count {
                scope.spawn(move || run_worker(id));
            }
        });
    }

    let mut variables = Vec::with_capacity(n);
    for slot in results {
        variables.push(slot.into_inner().expect("every task ran")?);
    }
    let rejecting_variable = variables
        .iter()
        .find(|v| v.explored && !v.passed)
        .map(|v| v.variable);
    let decision = if rejecting_variable.is_some() { Decision::Reject } else { Decision::Accept };
    Ok(PeekReport { decision, rejecting_variable, representatives: reps, variables })
}

/// The peek arc consistency condition, via the default engine settings.
pub fn pacc_holds(instance: &Structure, template: Template<'_>, limits: &Limits) -> Result<bool> {
    Ok(pac_decide(instance, template, 1, &PacOptions::default(), limits)?.accepted())
}
