//! Deliberately wrong variants of the semigroup. Each must be caught by at least
//! one suite; they exist to show the suites are not vacuous.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pl_function::OmegaFn;
use crate::rational::{half, int, Rational};
use crate::semigroup::{band, by_half_steps, check_unit_time, clamp_target, glue, Evolution, ShiftClamp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mutant {
    /// Clamp only from below: `max(g, lower)`.
    NoUpperClamp,
    /// Use `g` on `[0, t]` without any clamp.
    SkipClamp,
    /// Split `t` as `floor(t)` half-steps plus the fractional part.
    WholeStepSplit,
    /// Tail supremum that ignores the value at `-1`.
    AlphaIgnoresMinusOne,
}

impl Mutant {
    pub const DOCUMENTED: [Mutant; 3] = [Mutant::NoUpperClamp, Mutant::WholeStepSplit, Mutant::AlphaIgnoresMinusOne];

    pub fn name(self) -> &'static str {
        match self {
            Mutant::NoUpperClamp => "no_upper_clamp",
            Mutant::SkipClamp => "skip_clamp",
            Mutant::WholeStepSplit => "whole_step_split",
            Mutant::AlphaIgnoresMinusOne => "alpha_ignores_minus_one",
        }
    }
}

impl Evolution for Mutant {
    fn step(&self, t: &Rational, x: &OmegaFn) -> Result<OmegaFn> {
        check_unit_time(t)?;
        x.require_c()?;
        let (lower, upper) = band(t, x.value_at_zero());
        let alpha = match self {
            Mutant::AlphaIgnoresMinusOne => {
                // rebuild x with x(-1) at the floor of C so it never wins the max
                let shadow = OmegaFn::new(int(0), x.breakpoints().to_vec())?;
                shadow.alpha_fn()?
            }
            _ => x.alpha_fn()?,
        };
        let target = clamp_target(t, &alpha);
        let head = match self {
            Mutant::NoUpperClamp => target.max(&lower),
            Mutant::SkipClamp => target,
            Mutant::WholeStepSplit | Mutant::AlphaIgnoresMinusOne => target.max(&lower).min(&upper),
        };
        Ok(glue(t, x, &head))
    }

    fn apply(&self, t: &Rational, x: &OmegaFn) -> Result<OmegaFn> {
        if t.is_negative() {
            return Err(Error::Argument(format!("negative time {t}")));
        }
        match self {
            Mutant::WholeStepSplit if *t > int(1) => {
                let whole = t.floor();
                let rest = t - &whole;
                let m: u64 = whole.to_integer().try_into().map_err(|_| Error::Argument("time too large".into()))?;
                let h = half();
                (0..m).try_fold(self.step(&rest, x)?, |y, _| self.step(&h, &y))
            }
            _ => by_half_steps(self, t, x),
        }
    }
}

/// Wraps an [`Evolution`] and checks every produced function for membership in `C`.
pub struct Audited<'a> {
    inner: &'a dyn Evolution,
    outputs: AtomicUsize,
    violations: AtomicUsize,
    first_violation: Mutex<Option<String>>,
}

impl<'a> Audited<'a> {
    pub fn new(inner: &'a dyn Evolution) -> Self {
        Audited {
            inner,
            outputs: AtomicUsize::new(0),
            violations: AtomicUsize::new(0),
            first_violation: Mutex::new(None),
        }
    }

    pub fn outputs(&self) -> usize {
        self.outputs.load(Ordering::Relaxed)
    }

    pub fn violations(&self) -> usize {
        self.violations.load(Ordering::Relaxed)
    }

    pub fn first_violation(&self) -> Option<String> {
        self.first_violation.lock().expect("poisoned").clone()
    }

    fn audit(&self, y: Result<OmegaFn>) -> Result<OmegaFn> {
        let y = y?;
        self.outputs.fetch_add(1, Ordering::Relaxed);
        if let Some(v) = y.in_c().violation {
            self.violations.fetch_add(1, Ordering::Relaxed);
            self.first_violation.lock().expect("poisoned").get_or_insert_with(|| format!("{v}: {y}"));
        }
        Ok(y)
    }
}

impl Evolution for Audited<'_> {
    fn step(&self, t: &Rational, x: &OmegaFn) -> Result<OmegaFn> {
        self.audit(self.inner.step(t, x))
    }

    fn apply(&self, t: &Rational, x: &OmegaFn) -> Result<OmegaFn> {
        self.audit(self.inner.apply(t, x))
    }
}

/// The faithful semigroup, for symmetry with the mutants in generic code.
pub fn faithful() -> &'static dyn Evolution {
    &ShiftClamp
}
