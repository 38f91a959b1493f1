//! Time averages `A(t)x = (1/t) ∫_0^t T(s)x ds`.
//!
//! Two routes:
//!
//! * the zero orbit is averaged exactly. Since `(T(s)0)(u) = f(u - s)`, the mean is
//!   `(F(u) - F(u - t)) / t` with `F` the antiderivative of `f`, a piecewise
//!   quadratic in `u`;
//! * any `x ∈ C` is averaged by the composite trapezoid rule on the grid `s_k = k h`.
//!   `s ↦ T(s)x` is 1-Lipschitz in the sup norm, which bounds the error of the mean
//!   by `h / 4`.

use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pl_function::OmegaFn;
use crate::quadratic::PiecewiseQuadratic;
use crate::rational::{int, Rational};
use crate::semigroup::{zero_orbit_profile, Evolution, ShiftClamp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ExactZeroOrbit,
    Quadrature,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CesaroMean {
    /// Value at `-1` and the exact piecewise-quadratic profile on `[0, ∞)`.
    Exact { minus_one: Rational, profile: PiecewiseQuadratic },
    Grid(OmegaFn),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CesaroResult {
    pub mean: CesaroMean,
    /// Sup-norm bound on the distance from `mean` to the true average; zero on the exact route.
    pub error_bound: Rational,
    pub t: Rational,
    pub method: Method,
}

impl CesaroResult {
    pub fn eval(&self, u: &Rational) -> Result<Rational> {
        match &self.mean {
            CesaroMean::Grid(x) => x.eval(u),
            CesaroMean::Exact { minus_one, profile } => {
                if *u == int(-1) {
                    Ok(minus_one.clone())
                } else if u.is_negative() {
                    Err(Error::Domain(format!("{u} is not a point of Ω")))
                } else {
                    Ok(profile.eval(u))
                }
            }
        }
    }

    /// Exact sup-norm distance from the computed mean to `x`.
    pub fn sup_dist_to(&self, x: &OmegaFn) -> Rational {
        match &self.mean {
            CesaroMean::Grid(m) => m.sup_dist(x),
            CesaroMean::Exact { minus_one, profile } => {
                let diff = profile.combine(&int(1), &PiecewiseQuadratic::from_pl(x.profile()), &int(-1));
                let on_half_line = diff
                    .sup_abs_from(&Rational::zero())
                    .expect("difference of bounded profiles is bounded");
                (minus_one - x.minus_one_value()).abs().max(on_half_line)
            }
        }
    }

    pub fn as_grid(&self) -> Option<&OmegaFn> {
        match &self.mean {
            CesaroMean::Grid(x) => Some(x),
            CesaroMean::Exact { .. } => None,
        }
    }
}

fn positive_time(t: &Rational) -> Result<()> {
    if !t.is_positive() {
        return Err(Error::Argument(format!("averaging time must be positive, got {t}")));
    }
    Ok(())
}

/// Exact mean of the orbit of `0` up to time `t`.
pub fn cesaro_zero_exact(t: &Rational) -> Result<CesaroResult> {
    positive_time(t)?;
    let big_f = PiecewiseQuadratic::antiderivative(&zero_orbit_profile());
    let inv = int(1) / t;
    let profile = big_f.combine(&inv, &big_f.shift(t), &-inv.clone());
    Ok(CesaroResult {
        mean: CesaroMean::Exact { minus_one: Rational::zero(), profile },
        error_bound: Rational::zero(),
        t: t.clone(),
        method: Method::ExactZeroOrbit,
    })
}

/// Number of grid intervals `t / h`, which must be a positive integer.
pub fn grid_intervals(t: &Rational, h: &Rational) -> Result<u64> {
    positive_time(t)?;
    if !h.is_positive() {
        return Err(Error::Argument(format!("step must be positive, got {h}")));
    }
    let n = t / h;
    if !n.is_integer() {
        return Err(Error::Argument(format!("step {h} does not divide {t}")));
    }
    n.to_integer().to_u64().ok_or_else(|| Error::Argument(format!("too many grid nodes: {n}")))
}

/// Composite trapezoid mean of `T(s)x` over `s ∈ [0, t]` with step `h`.
pub fn cesaro_quadrature(x: &OmegaFn, t: &Rational, h: &Rational) -> Result<CesaroResult> {
    cesaro_quadrature_with(&ShiftClamp, x, t, h)
}

/// [`cesaro_quadrature`] for an arbitrary [`Evolution`].
pub fn cesaro_quadrature_with(evo: &dyn Evolution, x: &OmegaFn, t: &Rational, h: &Rational) -> Result<CesaroResult> {
    let n = grid_intervals(t, h)?;
    x.require_c()?;
    let inner = h / t;
    let end = &inner / int(2);
    let mean = (0..=n)
        .into_par_iter()
        .map(|k| {
            let s = Rational::from_integer(k.into()) * h;
            let w = if k == 0 || k == n { &end } else { &inner };
            Ok(evo.apply(&s, x)?.scale(w))
        })
        .try_reduce_with(|a, b| Ok(a.combine(&int(1), &b, &int(1))))
        .expect("grid has at least two nodes")?;
    Ok(CesaroResult {
        mean: CesaroMean::Grid(mean),
        error_bound: h / int(4),
        t: t.clone(),
        method: Method::Quadrature,
    })
}

/// `(‖A(t)x - x‖, error bound)`. Without a step only the zero function is accepted
/// and the exact route is used.
pub fn cesaro_residual(x: &OmegaFn, t: &Rational, h: Option<&Rational>) -> Result<(Rational, Rational)> {
    let result = match h {
        Some(h) => cesaro_quadrature(x, t, h)?,
        None if x.is_zero() => cesaro_zero_exact(t)?,
        None => {
            return Err(Error::Argument("a quadrature step is required unless x is the zero function".into()))
        }
    };
    Ok((result.sup_dist_to(x), result.error_bound))
}

/// Exact residuals of the zero orbit at `t = 2, 4, …, 2^k`.
pub fn zero_residuals_dyadic(k: u32) -> Result<Vec<(Rational, Rational)>> {
    (1..=k)
        .map(|j| {
            let t = Rational::from_integer(num_bigint::BigInt::from(2u64).pow(j));
            let (r, _) = cesaro_residual(&OmegaFn::zero(), &t, None)?;
            Ok((t, r))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pl_function::omega;
    use crate::rational::{frac, half};
    use crate::semigroup::{apply, fixed_point, FamilyKind, FixedPointFamily};

    /// Composite trapezoid rule applied pointwise to the closed form `f(u - s)`.
    fn oracle_mean_at(u: &Rational, t: &Rational, steps: i64) -> Rational {
        let f = zero_orbit_profile();
        let h = t / int(steps);
        let mut acc = Rational::zero();
        for k in 0..=steps {
            let s = &h * int(k);
            let w = if k == 0 || k == steps { &h / int(2) } else { h.clone() };
            acc += w * f.eval(&(u - s));
        }
        acc / t
    }

    #[test]
    fn exact_profile_against_trapezoid_oracle() {
        let exact = cesaro_zero_exact(&int(10)).unwrap();
        for k in 0..24 {
            let u = frac(k, 2);
            let approx = oracle_mean_at(&u, &int(10), 10_000);
            assert!((exact.eval(&u).unwrap() - approx).abs() <= frac(1, 2000), "u = {u}");
        }
        let (residual, bound) = cesaro_residual(&OmegaFn::zero(), &int(10), None).unwrap();
        assert_eq!(residual, frac(1, 10));
        assert_eq!(bound, int(0));
    }

    #[test]
    fn short_horizon_values() {
        let r = cesaro_zero_exact(&half()).unwrap();
        assert_eq!(r.eval(&int(0)).unwrap(), frac(1, 4));
        assert!((oracle_mean_at(&int(0), &half(), 1000) - frac(1, 4)).abs() <= frac(1, 2000));
        assert_eq!(r.eval(&int(-1)).unwrap(), int(0));
        assert!(r.eval(&frac(-1, 2)).is_err());
        let (residual, _) = cesaro_residual(&OmegaFn::zero(), &int(1), None).unwrap();
        assert_eq!(residual, half());
        let approx = oracle_mean_at(&int(0), &int(1), 1000);
        assert!((approx - half()).abs() <= frac(1, 1000));
        let (hundred, _) = cesaro_residual(&OmegaFn::zero(), &int(100), None).unwrap();
        assert_eq!(hundred, frac(1, 100));
    }

    #[test]
    fn residual_at_most_inverse_time() {
        for (t, r) in zero_residuals_dyadic(10).unwrap() {
            assert!(r <= int(1) / &t);
        }
    }

    #[test]
    fn quadrature_fixed_point_is_exact() {
        let v = fixed_point(&FixedPointFamily::new(FamilyKind::V, frac(1, 4)).unwrap());
        let r = cesaro_quadrature(&v, &int(3), &frac(3, 4)).unwrap();
        assert_eq!(r.as_grid().unwrap(), &v);
        let w = fixed_point(&FixedPointFamily::new(FamilyKind::W, frac(1, 4)).unwrap());
        let (res, _) = cesaro_residual(&w, &int(4), Some(&frac(1, 4))).unwrap();
        assert_eq!(res, int(0));
    }

    #[test]
    fn quadrature_single_trapezoid() {
        let r = cesaro_quadrature(&OmegaFn::zero(), &int(2), &int(2)).unwrap();
        let t2 = apply(&int(2), &OmegaFn::zero()).unwrap();
        let expected = OmegaFn::zero().combine(&half(), &t2, &half());
        assert_eq!(r.as_grid().unwrap(), &expected);
        assert_eq!(r.error_bound, half());
    }

    #[test]
    fn quadrature_close_to_exact() {
        let q = cesaro_quadrature(&OmegaFn::zero(), &int(4), &frac(1, 8)).unwrap();
        let exact = cesaro_zero_exact(&int(4)).unwrap();
        assert!(exact.sup_dist_to(q.as_grid().unwrap()) <= frac(1, 32));
        assert!(q.as_grid().unwrap().in_c().in_c);
    }

    #[test]
    fn argument_errors() {
        assert!(cesaro_zero_exact(&int(0)).is_err());
        assert!(cesaro_quadrature(&OmegaFn::zero(), &int(1), &frac(2, 3)).is_err());
        assert!(cesaro_quadrature(&OmegaFn::zero(), &int(1), &int(0)).is_err());
        assert!(cesaro_quadrature(&OmegaFn::zero(), &int(-1), &int(1)).is_err());
        let steep = omega(int(0), &[(int(0), int(0)), (frac(1, 4), int(1))]).unwrap();
        assert!(matches!(cesaro_quadrature(&steep, &int(1), &half()), Err(Error::Domain(_))));
        let v = OmegaFn::constant(frac(3, 4), frac(1, 4));
        assert!(cesaro_residual(&v, &int(2), None).is_err());
    }
}
