//! Functions on `Ω = {-1} ∪ [0, ∞)`: a value at the isolated point `-1` plus an
//! eventually constant piecewise-linear function on `[0, ∞)`.
//!
//! The set `C` consists of those functions with every value in `[0, 1]` that are
//! 1-Lipschitz on `[0, ∞)`. For piecewise-linear data both conditions reduce to
//! checks on vertices and segment slopes.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pl::{Pl, Vertex};
use crate::rational::{self, Rational};

/// An element of the function space restricted to rational piecewise-linear data.
/// Always canonical, so `==` is equality of functions on `Ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OmegaFn {
    minus_one: Rational,
    pl: Pl,
}

/// Builds the canonical form of a raw breakpoint list. The first abscissa must be 0.
pub fn canonicalize(minus_one: Rational, breakpoints: Vec<Vertex>) -> Result<OmegaFn> {
    match breakpoints.first() {
        None => return Err(Error::Structure("no breakpoints".into())),
        Some(p) if !p.u.is_zero() => {
            return Err(Error::Structure(format!("first abscissa is {}, expected 0", p.u)))
        }
        _ => {}
    }
    Ok(OmegaFn { minus_one, pl: Pl::new(breakpoints)? })
}

impl OmegaFn {
    pub fn new(minus_one: Rational, breakpoints: Vec<Vertex>) -> Result<Self> {
        canonicalize(minus_one, breakpoints)
    }

    pub fn from_pairs<I: IntoIterator<Item = (Rational, Rational)>>(minus_one: Rational, pairs: I) -> Result<Self> {
        canonicalize(minus_one, pairs.into_iter().map(|(u, v)| Vertex::new(u, v)).collect())
    }

    /// Wraps a [`Pl`], viewing it on `[0, ∞)`.
    pub fn from_pl(minus_one: Rational, pl: &Pl) -> Self {
        OmegaFn { minus_one, pl: pl.restrict(&Rational::zero()) }
    }

    pub fn constant(minus_one: Rational, value: Rational) -> Self {
        OmegaFn { minus_one, pl: Pl::constant(Rational::zero(), value) }
    }

    pub fn zero() -> Self {
        OmegaFn::constant(Rational::zero(), Rational::zero())
    }

    pub fn minus_one_value(&self) -> &Rational {
        &self.minus_one
    }

    pub fn breakpoints(&self) -> &[Vertex] {
        self.pl.vertices()
    }

    /// The `[0, ∞)` part.
    pub fn profile(&self) -> &Pl {
        &self.pl
    }

    pub fn value_at_zero(&self) -> &Rational {
        &self.pl.vertices()[0].v
    }

    pub fn is_zero(&self) -> bool {
        *self == OmegaFn::zero()
    }

    /// Value at a point of `Ω`; `u = -1` selects the isolated point.
    pub fn eval(&self, u: &Rational) -> Result<Rational> {
        if *u == -Rational::one() {
            Ok(self.minus_one.clone())
        } else if u.is_negative() {
            Err(Error::Domain(format!("{u} is not a point of Ω")))
        } else {
            Ok(self.pl.eval(u))
        }
    }

    /// Exact sup-norm distance over `Ω`.
    pub fn sup_dist(&self, other: &OmegaFn) -> Rational {
        let at_minus_one = (&self.minus_one - &other.minus_one).abs();
        at_minus_one.max(self.pl.sup_abs_diff(&other.pl, &Rational::zero()))
    }

    pub fn pl_min(&self, other: &OmegaFn) -> OmegaFn {
        OmegaFn {
            minus_one: (&self.minus_one).min(&other.minus_one).clone(),
            pl: self.pl.min(&other.pl),
        }
    }

    pub fn pl_max(&self, other: &OmegaFn) -> OmegaFn {
        OmegaFn {
            minus_one: (&self.minus_one).max(&other.minus_one).clone(),
            pl: self.pl.max(&other.pl),
        }
    }

    /// `a * self + b * other`, pointwise on `Ω`.
    pub fn combine(&self, a: &Rational, other: &OmegaFn, b: &Rational) -> OmegaFn {
        OmegaFn {
            minus_one: a * &self.minus_one + b * &other.minus_one,
            pl: self.pl.combine(a, &other.pl, b),
        }
    }

    pub fn scale(&self, a: &Rational) -> OmegaFn {
        OmegaFn { minus_one: a * &self.minus_one, pl: self.pl.affine(a, &Rational::zero()) }
    }

    /// Exact integral of the `[0, ∞)` part over `[a, b] ⊂ [0, ∞)`.
    pub fn integrate(&self, a: &Rational, b: &Rational) -> Result<Rational> {
        if a.is_negative() {
            return Err(Error::Domain(format!("integration from {a} leaves [0, ∞)")));
        }
        self.pl.integrate(a, b)
    }

    /// Membership in `C`.
    pub fn in_c(&self) -> CMembership {
        if !unit_interval(&self.minus_one) {
            return CMembership::violated(ViolationKind::Range, format!("x(-1) = {}", self.minus_one));
        }
        if let Some(p) = self.breakpoints().iter().find(|p| !unit_interval(&p.v)) {
            return CMembership::violated(ViolationKind::Range, format!("x({}) = {}", p.u, p.v));
        }
        if let Some((p, s)) = self.pl.slopes().find(|(_, s)| s.abs() > Rational::one()) {
            return CMembership::violated(ViolationKind::Lipschitz, format!("slope {s} on segment starting at {}", p.u));
        }
        CMembership { in_c: true, violation: None }
    }

    pub fn require_c(&self) -> Result<()> {
        match self.in_c().violation {
            None => Ok(()),
            Some(v) => Err(Error::Domain(format!("function not in C: {v}"))),
        }
    }

    /// Tail supremum `u ↦ max(x(-1), sup_{s ≥ u} x(s))` on `[0, ∞)`.
    pub fn alpha_fn(&self) -> Result<Pl> {
        self.require_c()?;
        Ok(tail_sup(&self.minus_one, &self.pl))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&Record::from(self)).expect("serializing strings cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let rec: Record = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        rec.try_into()
    }
}

impl fmt::Display for OmegaFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

/// Right-to-left running maximum, seeded with `floor`.
fn tail_sup(floor: &Rational, pl: &Pl) -> Pl {
    let pts = pl.vertices();
    let mut running = floor.max(pl.tail_value()).clone();
    let mut rev = vec![Vertex::new(pl.end().clone(), running.clone())];
    for w in pts.windows(2).rev() {
        let (a, b) = (&w[0], &w[1]);
        // on a rising segment the max over [u, b.u] is b.v <= running
        if a.v > b.v && a.v > running {
            if b.v < running {
                let cross = &a.u + (&b.u - &a.u) * (&a.v - &running) / (&a.v - &b.v);
                rev.push(Vertex::new(cross, running.clone()));
            }
            running = a.v.clone();
        }
        rev.push(Vertex::new(a.u.clone(), running.clone()));
    }
    rev.reverse();
    rev.dedup_by(|b, a| a.u == b.u);
    Pl::new(rev).expect("scan preserves ordering")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ViolationKind {
    Range,
    Lipschitz,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub at: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ViolationKind::Range => "Range",
            ViolationKind::Lipschitz => "Lipschitz",
        };
        write!(f, "{what} ({})", self.at)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CMembership {
    pub in_c: bool,
    pub violation: Option<Violation>,
}

impl CMembership {
    fn violated(kind: ViolationKind, at: String) -> Self {
        CMembership { in_c: false, violation: Some(Violation { kind, at }) }
    }
}

/// On-disk form: `{"minus_one":"p/q","breakpoints":[["u","v"],...]}`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Record {
    #[serde(with = "rational::as_str")]
    minus_one: Rational,
    breakpoints: Vec<Pair>,
}

#[derive(Serialize, Deserialize)]
struct Pair(
    #[serde(with = "rational::as_str")] Rational,
    #[serde(with = "rational::as_str")] Rational,
);

impl From<&OmegaFn> for Record {
    fn from(x: &OmegaFn) -> Self {
        Record {
            minus_one: x.minus_one.clone(),
            breakpoints: x.breakpoints().iter().map(|p| Pair(p.u.clone(), p.v.clone())).collect(),
        }
    }
}

impl TryFrom<Record> for OmegaFn {
    type Error = Error;

    fn try_from(rec: Record) -> Result<Self> {
        OmegaFn::from_pairs(rec.minus_one, rec.breakpoints.into_iter().map(|Pair(u, v)| (u, v)))
    }
}

impl Serialize for OmegaFn {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Record::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for OmegaFn {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Record::deserialize(d)?.try_into().map_err(serde::de::Error::custom)
    }
}

/// The zero function, as used throughout: `0` at `-1` and on `[0, ∞)`.
pub fn zero_fn() -> OmegaFn {
    OmegaFn::zero()
}

/// Helper for the common case of small integer literals.
pub fn omega(minus_one: Rational, pairs: &[(Rational, Rational)]) -> Result<OmegaFn> {
    OmegaFn::from_pairs(minus_one, pairs.iter().cloned())
}

pub(crate) fn unit_interval(r: &Rational) -> bool {
    !r.is_negative() && *r <= Rational::one()
}
