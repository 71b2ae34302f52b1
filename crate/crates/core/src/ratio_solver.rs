//! General ratio minimization: minimize `f(v)/g(v)` over a constraint set by
//! alternating a λ-update with a pluggable subproblem solve of `f(v) − λ·g(v)`.
//!
//! The λ sequence is non-increasing as long as the subproblem does not
//! increase `f − λg` above zero (the current iterate always attains exactly
//! zero), so the loop doubles as a Newton iteration on
//! `h(λ) = min_v f(v) − λ·g(v)` and converges quadratically when the
//! subproblem is solved exactly.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// A ratio-minimization instance: numerator, denominator, and a routine that
/// decreases `f(v) − λ·g(v)` over the constraint set from the current state.
///
/// The denominator must be nonnegative on every reachable state and the ratio
/// must be bounded below; both are standing assumptions of the method.
pub trait RatioProblem {
    type State;

    fn numerator(&self, state: &Self::State) -> f64;
    fn denominator(&self, state: &Self::State) -> f64;

    /// Returns a state with `f(v) − λ·g(v)` no larger than the current value
    /// (which is exactly zero by the choice of λ). The subsolver may be
    /// inexact; an exact minimizer additionally yields the global optimum.
    fn subsolve(&mut self, lambda: f64, state: &Self::State) -> Result<Self::State>;
}

/// Termination thresholds: stop when the λ difference between two iterations
/// drops below `tol`, with `max_iter` as a backstop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StoppingRule {
    tol: f64,
    max_iter: usize,
}

impl StoppingRule {
    pub fn new(tol: f64, max_iter: usize) -> Result<Self> {
        if tol.is_nan() || tol <= 0.0 || !tol.is_finite() {
            return Err(Error::InvalidInput(format!(
                "tolerance must be finite and > 0, got {tol}"
            )));
        }
        if max_iter < 1 {
            return Err(Error::InvalidInput("max_iter must be >= 1".into()));
        }
        Ok(Self { tol, max_iter })
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn max_iter(&self) -> usize {
        self.max_iter
    }
}

impl Default for StoppingRule {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_iter: 100,
        }
    }
}

/// One row of a solver trace. Record 0 holds the initial ratio; records
/// `t >= 1` hold the state after the t-th subproblem solve.
#[derive(Debug, Clone)]
pub struct IterationRecord {
    pub iteration: usize,
    /// Ratio f/g at this state.
    pub lambda: f64,
    pub f_value: f64,
    pub g_value: f64,
    /// `f(v_t) − λ_{t−1}·g(v_t)`; zero for record 0 by construction.
    pub subproblem_value: f64,
    /// Elapsed wall time since the solve started.
    pub wall_time: Duration,
}

/// Per-iteration history of a ratio solve.
#[derive(Debug, Clone, Default)]
pub struct SolverTrace {
    pub records: Vec<IterationRecord>,
    /// True when the λ difference dropped below tolerance (or the subproblem
    /// could no longer decrease — see `stalled`).
    pub converged: bool,
    /// True when the subproblem failed to strictly decrease `f − λg` below
    /// zero; the pre-stall state already satisfies the fixed-point condition.
    pub stalled: bool,
}

impl SolverTrace {
    /// Number of subproblem solves performed (record 0 is the initial state).
    pub fn iterations(&self) -> usize {
        self.records.len().saturating_sub(1)
    }

    pub fn final_lambda(&self) -> Option<f64> {
        self.records.last().map(|r| r.lambda)
    }

    pub fn lambdas(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.lambda)
    }
}

/// Runs the λ-update loop from `initial` until the stopping rule fires.
///
/// Errors with [`Error::DenominatorNonPositive`] whenever `g ≤ 0` at an
/// iterate. A subproblem that cannot reach a negative value is treated as
/// convergence: the previous state is returned unchanged.
pub fn solve_ratio<P: RatioProblem>(
    problem: &mut P,
    initial: P::State,
    rule: &StoppingRule,
) -> Result<(P::State, SolverTrace)> {
    let start = Instant::now();
    let mut trace = SolverTrace::default();

    let f0 = problem.numerator(&initial);
    let g0 = problem.denominator(&initial);
    if !f0.is_finite() || !g0.is_finite() {
        return Err(Error::NumericalFailure(
            "objective is non-finite at the initial state".into(),
        ));
    }
    if g0 <= 0.0 {
        return Err(Error::DenominatorNonPositive(format!(
            "g = {g0:.6e} at the initial state"
        )));
    }
    let mut lambda = f0 / g0;
    trace.records.push(IterationRecord {
        iteration: 0,
        lambda,
        f_value: f0,
        g_value: g0,
        subproblem_value: 0.0,
        wall_time: start.elapsed(),
    });

    let mut state = initial;
    for t in 1..=rule.max_iter() {
        let candidate = problem.subsolve(lambda, &state)?;
        let f = problem.numerator(&candidate);
        let g = problem.denominator(&candidate);
        if !f.is_finite() || !g.is_finite() {
            return Err(Error::NumericalFailure(format!(
                "objective is non-finite at iteration {t}"
            )));
        }
        if g <= 0.0 {
            return Err(Error::DenominatorNonPositive(format!(
                "g = {g:.6e} at iteration {t}"
            )));
        }
        let subproblem_value = f - lambda * g;
        if subproblem_value > 0.0 {
            // The current state already minimizes f − λg (value 0): fixed point.
            trace.stalled = true;
            trace.converged = true;
            break;
        }
        let next_lambda = f / g;
        trace.records.push(IterationRecord {
            iteration: t,
            lambda: next_lambda,
            f_value: f,
            g_value: g,
            subproblem_value,
            wall_time: start.elapsed(),
        });
        state = candidate;
        let delta = (lambda - next_lambda).abs();
        lambda = next_lambda;
        if delta < rule.tol() {
            trace.converged = true;
            break;
        }
    }
    Ok((state, trace))
}

/// Per-iteration error ratios `e_{t+1}/e_t²` with `e_t = λ_t − λ*`, taking the
/// final λ as λ*. Diagnostic only: the constants depend on the instance.
#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub lambda_star: f64,
    /// `λ_t − λ*` for every record before the last.
    pub errors: Vec<f64>,
    /// `e_{t+1}/e_t²` wherever `e_t > 0`.
    pub ratios: Vec<f64>,
}

pub fn check_quadratic_convergence(trace: &SolverTrace) -> Result<ConvergenceReport> {
    if trace.records.len() < 3 {
        return Err(Error::InsufficientTrace(format!(
            "need at least 3 iterations, trace has {}",
            trace.records.len()
        )));
    }
    if !trace.converged {
        return Err(Error::InsufficientTrace(
            "trace did not converge to a final lambda".into(),
        ));
    }
    let lambda_star = trace.records.last().unwrap().lambda;
    let errors: Vec<f64> = trace.records[..trace.records.len() - 1]
        .iter()
        .map(|r| r.lambda - lambda_star)
        .collect();
    let mut ratios = Vec::new();
    for w in errors.windows(2) {
        if w[0] > 0.0 {
            ratios.push(w[1] / (w[0] * w[0]));
        }
    }
    Ok(ConvergenceReport {
        lambda_star,
        errors,
        ratios,
    })
}
