//! The semigroup `{T(t) : t ≥ 0}` acting on `C`.
//!
//! For `t ∈ [0, 1]`:
//!
//! * `(T(t)x)(-1) = x(-1)`;
//! * `(T(t)x)(u) = x(u - t)` for `u ≥ t`;
//! * on `[0, t]` the target `g(u) = 1 - α_x(1 - t + u)` is clamped into the band
//!   `[x(0) - t + u, x(0) + t - u]`.
//!
//! Larger times are split as `t = m/2 + t'` with `t' ∈ [0, 1/2)` and evaluated as
//! `T(1/2)^m ∘ T(t')`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pl::{Pl, Vertex};
use crate::pl_function::OmegaFn;
use crate::rational::{self, frac, half, int, Rational};

/// `t = m/2 + t_prime` with `t_prime ∈ [0, 1/2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub m: u64,
    #[serde(with = "rational::as_str")]
    pub t_prime: Rational,
}

impl Decomposition {
    pub fn time(&self) -> Rational {
        Rational::from_integer(BigInt::from(self.m)) * half() + &self.t_prime
    }
}

pub fn decompose(t: &Rational) -> Result<Decomposition> {
    if t.is_negative() {
        return Err(Error::Argument(format!("negative time {t}")));
    }
    let m_int = (t * int(2)).floor().to_integer();
    let m = m_int
        .to_u64()
        .ok_or_else(|| Error::Argument(format!("time {t} too large")))?;
    let t_prime = t - Rational::from_integer(m_int) * half();
    Ok(Decomposition { m, t_prime })
}

/// A family of maps indexed by rational time, evaluated through its unit-interval
/// form. Implemented by the semigroup itself and by the deliberately broken
/// variants used for mutation testing.
pub trait Evolution: Sync {
    /// `T(t)x` for `t ∈ [0, 1]`.
    fn step(&self, t: &Rational, x: &OmegaFn) -> Result<OmegaFn>;

    /// `T(t)x` for any `t ≥ 0`.
    fn apply(&self, t: &Rational, x: &OmegaFn) -> Result<OmegaFn> {
        by_half_steps(self, t, x)
    }
}

/// `T(t)x` through [`Evolution::step`]: a single step when `t ≤ 1`, otherwise
/// `T(1/2)^m ∘ T(t')`.
pub fn by_half_steps<E: Evolution + ?Sized>(evo: &E, t: &Rational, x: &OmegaFn) -> Result<OmegaFn> {
    if t.is_negative() {
        return Err(Error::Argument(format!("negative time {t}")));
    }
    if *t <= int(1) {
        return evo.step(t, x);
    }
    let d = decompose(t)?;
    let h = half();
    (0..d.m).try_fold(evo.step(&d.t_prime, x)?, |y, _| evo.step(&h, &y))
}

/// The shift-and-clamp semigroup.
#[derive(Clone, Copy, Debug, Default)]
pub struct ShiftClamp;

impl Evolution for ShiftClamp {
    fn step(&self, t: &Rational, x: &OmegaFn) -> Result<OmegaFn> {
        check_unit_time(t)?;
        let alpha = x.alpha_fn()?;
        let (lower, upper) = band(t, x.value_at_zero());
        let head = clamp_target(t, &alpha).max(&lower).min(&upper);
        Ok(glue(t, x, &head))
    }
}

pub(crate) fn check_unit_time(t: &Rational) -> Result<()> {
    if t.is_negative() || *t > int(1) {
        return Err(Error::Argument(format!("basic step needs t in [0, 1], got {t}")));
    }
    Ok(())
}

/// `T(t)x` for `t ∈ [0, 1]` from the three-case definition.
pub fn apply_basic(t: &Rational, x: &OmegaFn) -> Result<OmegaFn> {
    ShiftClamp.step(t, x)
}

/// `T(t)x` for any `t ≥ 0`.
pub fn apply(t: &Rational, x: &OmegaFn) -> Result<OmegaFn> {
    ShiftClamp.apply(t, x)
}

/// `u ↦ 1 - α(1 - t + u)` viewed on `[0, ∞)`; only its values on `[0, t]` are used.
pub fn clamp_target(t: &Rational, alpha: &Pl) -> Pl {
    let back = int(1) - t;
    alpha
        .shift(&-back)
        .restrict(&Rational::zero())
        .affine(&-Rational::one(), &Rational::one())
}

/// Lower and upper band lines `x(0) ∓ (t - u)`, each correct on `[0, t]`.
pub fn band(t: &Rational, x0: &Rational) -> (Pl, Pl) {
    let zero = Rational::zero();
    if t.is_zero() {
        let flat = Pl::constant(zero, x0.clone());
        return (flat.clone(), flat);
    }
    let lower = Pl::from_pairs([(zero.clone(), x0 - t), (t.clone(), x0.clone())]);
    let upper = Pl::from_pairs([(zero, x0 + t), (t.clone(), x0.clone())]);
    (lower.expect("t > 0"), upper.expect("t > 0"))
}

/// `head` on `[0, t)` followed by `x` shifted right by `t`.
pub fn glue(t: &Rational, x: &OmegaFn, head: &Pl) -> OmegaFn {
    let mut pts: Vec<Vertex> = head.vertices_until(t);
    pts.pop();
    pts.extend(x.profile().shift(t).vertices().iter().cloned());
    OmegaFn::new(x.minus_one_value().clone(), pts).expect("glued vertices are increasing from 0")
}

/// The profile `f` with `(T(t)0)(u) = f(u - t)`: zero outside `[-2, 0]`, peak 1 at `-1`.
pub fn zero_orbit_profile() -> Pl {
    Pl::from_pairs([(int(-2), int(0)), (int(-1), int(1)), (int(0), int(0))]).expect("static vertices")
}

/// `T(t)0` from its closed form, without running the semigroup.
pub fn orbit_zero_closed_form(t: &Rational) -> Result<OmegaFn> {
    if t.is_negative() {
        return Err(Error::Argument(format!("negative time {t}")));
    }
    Ok(OmegaFn::from_pl(Rational::zero(), &zero_orbit_profile().shift(t)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyKind {
    /// `v_s`: `1 - s` at `-1`, constant `s` on `[0, ∞)`.
    V,
    /// `w_s`: `s` at `-1`, constant `1/2` on `[0, ∞)`.
    W,
}

/// A member of one of the two families making up the common fixed points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FixedPointFamily {
    pub kind: FamilyKind,
    #[serde(with = "rational::as_str")]
    pub s: Rational,
}

impl FixedPointFamily {
    pub fn new(kind: FamilyKind, s: Rational) -> Result<Self> {
        if s.is_negative() || s > half() {
            return Err(Error::Argument(format!("family index {s} outside [0, 1/2]")));
        }
        Ok(FixedPointFamily { kind, s })
    }
}

pub fn fixed_point(fam: &FixedPointFamily) -> OmegaFn {
    match fam.kind {
        FamilyKind::V => OmegaFn::constant(int(1) - &fam.s, fam.s.clone()),
        FamilyKind::W => OmegaFn::constant(fam.s.clone(), half()),
    }
}

/// The family member equal to `x`, if any. `v_{1/2} = w_{1/2}` is reported as `V`.
pub fn classify_fixed_point(x: &OmegaFn) -> Result<Option<FixedPointFamily>> {
    x.require_c()?;
    let [only] = x.breakpoints() else {
        return Ok(None);
    };
    let c = &only.v;
    let at_minus_one = x.minus_one_value();
    if *c <= half() && *at_minus_one == int(1) - c {
        return Ok(Some(FixedPointFamily { kind: FamilyKind::V, s: c.clone() }));
    }
    if *c == half() && *at_minus_one <= half() {
        return Ok(Some(FixedPointFamily { kind: FamilyKind::W, s: at_minus_one.clone() }));
    }
    Ok(None)
}

pub fn is_common_fixed_point(x: &OmegaFn) -> Result<bool> {
    Ok(classify_fixed_point(x)?.is_some())
}

/// Times used to witness that a function is moved by the semigroup.
pub fn fixed_point_probes() -> [Rational; 3] {
    [frac(1, 4), half(), int(1)]
}

/// First probe time `t` with `T(t)x ≠ x`.
pub fn moving_probe(x: &OmegaFn) -> Result<Option<Rational>> {
    for t in fixed_point_probes() {
        if apply(&t, x)? != *x {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pl_function::{omega, zero_fn};

    #[test]
    fn decompositions() {
        let d = decompose(&frac(17, 10)).unwrap();
        assert_eq!((d.m, d.t_prime.clone()), (3, frac(1, 5)));
        assert_eq!(d.time(), frac(17, 10));
        let d = decompose(&frac(3, 2)).unwrap();
        assert_eq!((d.m, d.t_prime), (3, int(0)));
        let d = decompose(&int(2)).unwrap();
        assert_eq!((d.m, d.t_prime), (4, int(0)));
        let d = decompose(&frac(1, 3)).unwrap();
        assert_eq!((d.m, d.t_prime), (0, frac(1, 3)));
        assert!(decompose(&frac(-1, 3)).is_err());
    }

    #[test]
    fn zero_orbit_small_times() {
        let y = apply_basic(&half(), &zero_fn()).unwrap();
        assert_eq!(y, omega(int(0), &[(int(0), half()), (half(), int(0))]).unwrap());
        let y = apply(&int(1), &zero_fn()).unwrap();
        assert_eq!(y, omega(int(0), &[(int(0), int(1)), (int(1), int(0))]).unwrap());
    }

    #[test]
    fn zero_orbit_past_two() {
        let t = frac(1, 4);
        let y = apply(&(int(2) + &t), &zero_fn()).unwrap();
        for k in 0..=8 {
            let u = frac(k, 32);
            assert_eq!(y.eval(&u).unwrap(), int(0));
        }
        assert_eq!(y, orbit_zero_closed_form(&(int(2) + &t)).unwrap());
    }

    #[test]
    fn closed_form_shapes() {
        let two = orbit_zero_closed_form(&int(2)).unwrap();
        assert_eq!(two.eval(&int(-1)).unwrap(), int(0));
        assert_eq!(two.eval(&frac(1, 3)).unwrap(), frac(1, 3));
        assert_eq!(two.eval(&frac(3, 2)).unwrap(), frac(1, 2));
        assert_eq!(two.eval(&int(3)).unwrap(), int(0));
        assert_eq!(orbit_zero_closed_form(&int(0)).unwrap(), zero_fn());
        let five = orbit_zero_closed_form(&int(5)).unwrap();
        assert_eq!(five, apply(&int(5), &zero_fn()).unwrap());
        assert_eq!(
            five,
            omega(int(0), &[(int(0), int(0)), (int(3), int(0)), (int(4), int(1)), (int(5), int(0))]).unwrap()
        );
        assert!(orbit_zero_closed_form(&int(-1)).is_err());
    }

    #[test]
    fn identity_and_fixed_points() {
        let x = omega(frac(1, 3), &[(int(0), frac(1, 2)), (int(1), int(1)), (int(2), frac(1, 4))]).unwrap();
        assert_eq!(apply_basic(&int(0), &x).unwrap(), x);
        let v = fixed_point(&FixedPointFamily::new(FamilyKind::V, frac(1, 4)).unwrap());
        assert_eq!(apply_basic(&half(), &v).unwrap(), v);
        assert_eq!(apply(&frac(7, 3), &v).unwrap(), v);
    }

    #[test]
    fn family_members() {
        let v0 = fixed_point(&FixedPointFamily::new(FamilyKind::V, int(0)).unwrap());
        assert_eq!(v0, OmegaFn::constant(int(1), int(0)));
        let w_half = fixed_point(&FixedPointFamily::new(FamilyKind::W, half()).unwrap());
        let v_half = fixed_point(&FixedPointFamily::new(FamilyKind::V, half()).unwrap());
        assert_eq!(w_half, v_half);
        let w0 = fixed_point(&FixedPointFamily::new(FamilyKind::W, int(0)).unwrap());
        assert_eq!(w0, OmegaFn::constant(int(0), half()));
        assert!(FixedPointFamily::new(FamilyKind::V, frac(3, 5)).is_err());
        assert!(FixedPointFamily::new(FamilyKind::W, frac(-1, 5)).is_err());
    }

    #[test]
    fn fixed_point_membership() {
        let v = OmegaFn::constant(frac(3, 4), frac(1, 4));
        assert!(is_common_fixed_point(&v).unwrap());
        assert!(!is_common_fixed_point(&zero_fn()).unwrap());
        let c = OmegaFn::constant(frac(1, 4), frac(1, 4));
        assert!(!is_common_fixed_point(&c).unwrap());
        assert_ne!(apply(&int(1), &c).unwrap(), c);
        assert!(moving_probe(&c).unwrap().is_some());
        let w = OmegaFn::constant(frac(1, 5), half());
        assert_eq!(
            classify_fixed_point(&w).unwrap(),
            Some(FixedPointFamily { kind: FamilyKind::W, s: frac(1, 5) })
        );
        let outside = OmegaFn::constant(int(2), int(0));
        assert!(is_common_fixed_point(&outside).is_err());
    }

    #[test]
    fn argument_checks() {
        assert!(matches!(apply_basic(&frac(3, 2), &zero_fn()), Err(Error::Argument(_))));
        assert!(matches!(apply(&frac(-1, 2), &zero_fn()), Err(Error::Argument(_))));
        let steep = omega(int(0), &[(int(0), int(0)), (frac(1, 4), int(1))]).unwrap();
        assert!(matches!(apply(&half(), &steep), Err(Error::Domain(_))));
    }
}
