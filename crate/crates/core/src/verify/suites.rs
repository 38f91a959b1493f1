use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{CheckId, InstanceGen, Sampler};
use crate::cesaro::{cesaro_quadrature_with, cesaro_residual, cesaro_zero_exact};
use crate::error::Error;
use crate::pl_function::OmegaFn;
use crate::rational::{self, frac, half, int, Rational};
use crate::semigroup::{
    classify_fixed_point, fixed_point, fixed_point_probes, is_common_fixed_point, orbit_zero_closed_form, Evolution,
    FamilyKind, FixedPointFamily,
};

pub(super) struct Failure {
    pub relation: String,
    pub lhs: String,
    pub rhs: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { relation: "error".into(), lhs: e.to_string(), rhs: String::new() }
    }
}

pub(super) struct Outcome {
    pub inputs: Vec<(String, String)>,
    pub verdict: Result<(), Failure>,
}

type Verdict = Result<(), Failure>;

fn holds(cond: bool, relation: &str, lhs: impl ToString, rhs: impl ToString) -> Verdict {
    if cond {
        Ok(())
    } else {
        Err(Failure { relation: relation.into(), lhs: lhs.to_string(), rhs: rhs.to_string() })
    }
}

fn eq<T: PartialEq + std::fmt::Display>(what: &str, lhs: &T, rhs: &T) -> Verdict {
    holds(lhs == rhs, &format!("{what}: lhs = rhs"), lhs, rhs)
}

fn le(what: &str, lhs: &Rational, rhs: &Rational) -> Verdict {
    holds(lhs <= rhs, &format!("{what}: lhs <= rhs"), lhs, rhs)
}

struct Inputs(Vec<(String, String)>);

impl Inputs {
    fn new() -> Self {
        Inputs(Vec::new())
    }

    fn f(mut self, name: &str, x: &OmegaFn) -> Self {
        self.0.push((name.into(), x.to_json()));
        self
    }

    fn r(mut self, name: &str, v: &Rational) -> Self {
        self.0.push((name.into(), rational::format(v)));
        self
    }

    fn done(self, verdict: Verdict) -> Outcome {
        Outcome { inputs: self.0, verdict }
    }
}

/// `α_x(w)` straight from the definition: the max of `x(-1)`, `x(w)` and every
/// vertex value to the right of `w`.
pub(super) fn alpha_pointwise(x: &OmegaFn, w: &Rational) -> Rational {
    x.breakpoints()
        .iter()
        .filter(|p| &p.u > w)
        .map(|p| p.v.clone())
        .chain([x.minus_one_value().clone(), x.profile().eval(w)])
        .max()
        .expect("nonempty")
}

/// `(T(t)x)(u)` for `t ∈ [0, 1]` from the three-case definition, evaluated pointwise.
pub(super) fn three_case_value(t: &Rational, x: &OmegaFn, u: &Rational) -> Rational {
    if *u == int(-1) {
        return x.minus_one_value().clone();
    }
    if u >= t {
        return x.profile().eval(&(u - t));
    }
    let x0 = x.value_at_zero();
    let g = int(1) - alpha_pointwise(x, &(int(1) - t + u));
    let lower = x0 - t + u;
    let upper = x0 + t - u;
    if g <= lower {
        lower
    } else if g >= upper {
        upper
    } else {
        g
    }
}

pub(super) fn run(id: CheckId, evo: &dyn Evolution, gen: &InstanceGen, s: &mut Sampler) -> Vec<Outcome> {
    let n = gen.count;
    let (t_lo, t_hi) = gen.t_range.clone();
    match id {
        CheckId::LemmaAlphaI => (0..n).map(|_| lemma_alpha_i(s)).collect(),
        CheckId::LemmaAlphaII => (0..n).map(|_| lemma_alpha_ii(s)).collect(),
        CheckId::Lemma3Trichotomy => (0..n).map(|_| trichotomy(evo, s)).collect(),
        CheckId::ThreeCaseDefinition => (0..n).map(|_| three_case(evo, s)).collect(),
        CheckId::EqNonex => (0..n).map(|_| pointwise_nonex(evo, s)).collect(),
        CheckId::EqIsometric => (0..n).map(|_| isometric(evo, s, &t_lo, &t_hi, true)).collect(),
        CheckId::Sg1 => (0..n).map(|_| isometric(evo, s, &t_lo, &t_hi, false)).collect(),
        CheckId::EqSPlusT => (0..n).map(|_| composition(evo, s, &half(), false)).collect(),
        CheckId::Sg3 => (0..n).map(|_| composition(evo, s, &int(3), true)).collect(),
        CheckId::Sg2 => (0..n).map(|_| identity(evo, s)).collect(),
        CheckId::Sg4 => (0..n).map(|_| time_lipschitz(evo, s, &t_lo, &t_hi)).collect(),
        CheckId::CInvariance => (0..n).map(|_| invariance(evo, s, &t_lo, &t_hi)).collect(),
        CheckId::EqF => fixed_point_set(evo, s, n),
        CheckId::EqTt0 => (0..n).map(|_| zero_orbit(evo, s)).collect(),
        CheckId::EqInt => vanishing_mean(evo),
        CheckId::QuadratureBound => quadrature_bound(evo),
    }
}

fn point_on_half_line(s: &mut Sampler) -> Rational {
    s.rational(&Rational::zero(), &int(8))
}

fn lemma_alpha_i(s: &mut Sampler) -> Outcome {
    let x = s.function();
    let (u1, u2) = (point_on_half_line(s), point_on_half_line(s));
    let inputs = Inputs::new().f("x", &x).r("u1", &u1).r("u2", &u2);
    let verdict = (|| {
        let alpha = x.alpha_fn()?;
        let (a1, a2) = (alpha.eval(&u1), alpha.eval(&u2));
        eq("alpha_x(u1) vs pointwise sup", &a1, &alpha_pointwise(&x, &u1))?;
        eq("alpha_x(u2) vs pointwise sup", &a2, &alpha_pointwise(&x, &u2))?;
        le("|alpha(u1) - alpha(u2)| vs |u1 - u2|", &(&a1 - &a2).abs(), &(&u1 - &u2).abs())?;
        for (p, slope) in alpha.slopes() {
            holds(
                !slope.is_positive() && slope >= -Rational::one(),
                &format!("alpha slope in [-1, 0] on segment at {}", p.u),
                &slope,
                "[-1, 0]",
            )?;
        }
        Ok(())
    })();
    inputs.done(verdict)
}

fn lemma_alpha_ii(s: &mut Sampler) -> Outcome {
    let (x, y) = (s.function(), s.function());
    let u = point_on_half_line(s);
    let inputs = Inputs::new().f("x", &x).f("y", &y).r("u", &u);
    let verdict = (|| {
        let diff = (x.alpha_fn()?.eval(&u) - y.alpha_fn()?.eval(&u)).abs();
        le("|alpha_x(u) - alpha_y(u)| vs ||x - y||", &diff, &x.sup_dist(&y))
    })();
    inputs.done(verdict)
}

fn trichotomy(evo: &dyn Evolution, s: &mut Sampler) -> Outcome {
    let x = s.function();
    let t = s.unit();
    let (a, b) = (s.rational(&Rational::zero(), &t), s.rational(&Rational::zero(), &t));
    let (u1, u2) = if a <= b { (a, b) } else { (b, a) };
    let inputs = Inputs::new().f("x", &x).r("t", &t).r("u1", &u1).r("u2", &u2);
    let verdict = (|| {
        let y = evo.step(&t, &x)?;
        let x0 = x.value_at_zero();
        let g1 = int(1) - x.alpha_fn()?.eval(&(int(1) - &t + &u1));
        let (y1, y2) = (y.profile().eval(&u1), y.profile().eval(&u2));
        let gap = &u2 - &u1;
        let below = g1 < &y2 - &gap;
        let above = g1 > &y2 + &gap;
        let inside = (&g1 - &y2).abs() <= gap;
        let count = [below, above, inside].iter().filter(|&&h| h).count();
        holds(count == 1, "exactly one hypothesis holds", count, 1)?;
        if below {
            eq("(i) value at u1", &y1, &(x0 - &t + &u1))?;
            eq("(i) value at u2", &y2, &(x0 - &t + &u2))?;
        } else if above {
            eq("(ii) value at u1", &y1, &(x0 + &t - &u1))?;
            eq("(ii) value at u2", &y2, &(x0 + &t - &u2))?;
        } else {
            eq("(iii) value at u1", &y1, &g1)?;
        }
        Ok(())
    })();
    inputs.done(verdict)
}

fn three_case(evo: &dyn Evolution, s: &mut Sampler) -> Outcome {
    let x = s.function();
    let t = s.unit();
    let inputs = Inputs::new().f("x", &x).r("t", &t);
    let verdict = (|| {
        let y = evo.step(&t, &x)?;
        let mut points: Vec<Rational> = y.breakpoints().iter().map(|p| p.u.clone()).collect();
        points.push(int(-1));
        for _ in 0..8 {
            points.push(s.rational(&Rational::zero(), &t));
            points.push(s.rational(&t, &(&t + int(6))));
        }
        for u in points {
            let expected = three_case_value(&t, &x, &u);
            eq(&format!("(T(t)x)({u}) vs definition"), &y.eval(&u)?, &expected)?;
        }
        Ok(())
    })();
    inputs.done(verdict)
}

fn pointwise_nonex(evo: &dyn Evolution, s: &mut Sampler) -> Outcome {
    let (x, y) = (s.mixed_function(), s.mixed_function());
    let t = s.unit();
    let inputs = Inputs::new().f("x", &x).f("y", &y).r("t", &t);
    let verdict = (|| {
        let (tx, ty) = (evo.step(&t, &x)?, evo.step(&t, &y)?);
        let bound = x.sup_dist(&y);
        let mut points: Vec<Rational> = tx.breakpoints().iter().chain(ty.breakpoints()).map(|p| p.u.clone()).collect();
        points.push(int(-1));
        points.extend((0..8).map(|_| s.rational(&Rational::zero(), &(&t + int(4)))));
        for u in points {
            let d = (tx.eval(&u)? - ty.eval(&u)?).abs();
            le(&format!("|(T(t)x)({u}) - (T(t)y)({u})| vs ||x - y||"), &d, &bound)?;
        }
        Ok(())
    })();
    inputs.done(verdict)
}

fn isometric(evo: &dyn Evolution, s: &mut Sampler, lo: &Rational, hi: &Rational, equality: bool) -> Outcome {
    let (x, y) = (s.mixed_function(), s.mixed_function());
    let t = s.rational(lo, hi);
    let inputs = Inputs::new().f("x", &x).f("y", &y).r("t", &t);
    let verdict = (|| {
        let lhs = evo.apply(&t, &x)?.sup_dist(&evo.apply(&t, &y)?);
        let rhs = x.sup_dist(&y);
        if equality {
            eq("||T(t)x - T(t)y|| vs ||x - y||", &lhs, &rhs)
        } else {
            le("||T(t)x - T(t)y|| vs ||x - y||", &lhs, &rhs)
        }
    })();
    inputs.done(verdict)
}

fn composition(evo: &dyn Evolution, s: &mut Sampler, max_t: &Rational, general: bool) -> Outcome {
    let x = s.mixed_function();
    let (t1, t2) = (s.rational(&Rational::zero(), max_t), s.rational(&Rational::zero(), max_t));
    let inputs = Inputs::new().f("x", &x).r("t1", &t1).r("t2", &t2);
    let verdict = (|| {
        let sum = &t1 + &t2;
        let (lhs, rhs) = if general {
            (evo.apply(&t1, &evo.apply(&t2, &x)?)?, evo.apply(&sum, &x)?)
        } else {
            (evo.step(&t1, &evo.step(&t2, &x)?)?, evo.step(&sum, &x)?)
        };
        eq("T(t1)T(t2)x vs T(t1 + t2)x", &lhs, &rhs)
    })();
    inputs.done(verdict)
}

fn identity(evo: &dyn Evolution, s: &mut Sampler) -> Outcome {
    let x = s.mixed_function();
    let inputs = Inputs::new().f("x", &x);
    let verdict = (|| {
        eq("T(0)x vs x", &evo.step(&Rational::zero(), &x)?, &x)?;
        eq("T(0)x vs x via apply", &evo.apply(&Rational::zero(), &x)?, &x)
    })();
    inputs.done(verdict)
}

fn time_lipschitz(evo: &dyn Evolution, s: &mut Sampler, lo: &Rational, hi: &Rational) -> Outcome {
    let x = s.mixed_function();
    let (t1, t2) = (s.rational(lo, hi), s.rational(lo, hi));
    let inputs = Inputs::new().f("x", &x).r("t1", &t1).r("t2", &t2);
    let verdict = (|| {
        let (a, b) = (evo.apply(&t1, &x)?, evo.apply(&t2, &x)?);
        le("||T(t1)x - T(t2)x|| vs |t1 - t2|", &a.sup_dist(&b), &(&t1 - &t2).abs())?;
        le("||T(t1)x - x|| vs t1", &a.sup_dist(&x), &t1)
    })();
    inputs.done(verdict)
}

fn invariance(evo: &dyn Evolution, s: &mut Sampler, lo: &Rational, hi: &Rational) -> Outcome {
    let x = s.mixed_function();
    let t = s.rational(lo, hi);
    let inputs = Inputs::new().f("x", &x).r("t", &t);
    let verdict = (|| {
        let y = evo.apply(&t, &x)?;
        let m = y.in_c();
        holds(m.in_c, "T(t)x in C", y.to_json(), m.violation.map(|v| v.to_string()).unwrap_or_default())
    })();
    inputs.done(verdict)
}

fn fixed_point_set(evo: &dyn Evolution, s: &mut Sampler, random: usize) -> Vec<Outcome> {
    let probe_times = [frac(1, 4), half(), int(1), frac(3, 2), int(2)];
    let mut out = Vec::new();
    for kind in [FamilyKind::V, FamilyKind::W] {
        for k in 0..=4 {
            let fam = FixedPointFamily::new(kind, frac(k, 8)).expect("index in range");
            let p = fixed_point(&fam);
            for t in &probe_times {
                let inputs = Inputs::new().f("x", &p).r("t", t);
                let verdict = (|| {
                    holds(is_common_fixed_point(&p)?, "family member recognized", p.to_json(), "fixed")?;
                    eq("T(t)x vs x", &evo.apply(t, &p)?, &p)
                })();
                out.push(inputs.done(verdict));
            }
        }
    }
    // random members outside both families must be moved by some probe time
    let mut produced = 0;
    while produced < random {
        let x = s.mixed_function();
        if classify_fixed_point(&x).expect("sampler stays in C").is_some() {
            continue;
        }
        produced += 1;
        let inputs = Inputs::new().f("x", &x);
        let verdict = (|| {
            for t in fixed_point_probes() {
                if evo.apply(&t, &x)? != x {
                    return Ok(());
                }
            }
            holds(false, "some probe time moves a non-member", x.to_json(), "unmoved")
        })();
        out.push(inputs.done(verdict));
    }
    out
}

fn zero_orbit(evo: &dyn Evolution, s: &mut Sampler) -> Outcome {
    let t = s.rational(&Rational::zero(), &int(6));
    let inputs = Inputs::new().r("t", &t);
    let verdict = (|| eq("T(t)0 vs closed form", &evo.apply(&t, &OmegaFn::zero())?, &orbit_zero_closed_form(&t)?))();
    inputs.done(verdict)
}

fn vanishing_mean(evo: &dyn Evolution) -> Vec<Outcome> {
    let zero = OmegaFn::zero();
    let mut out = Vec::new();
    let mut previous: Option<Rational> = None;
    for k in 1..=10u32 {
        let t = Rational::from_integer(BigInt::from(2u32).pow(k));
        let inputs = Inputs::new().r("t", &t);
        let verdict = (|| {
            let (residual, bound) = cesaro_residual(&zero, &t, None)?;
            eq("exact-route bound", &bound, &Rational::zero())?;
            eq("||A(t)0 - 0|| vs 1/t", &residual, &(int(1) / &t))?;
            if let Some(p) = &previous {
                holds(&residual < p, "strictly decreasing residual", &residual, p)?;
            }
            previous = Some(residual);
            Ok(())
        })();
        out.push(inputs.done(verdict));
    }
    let t_max = int(1024);
    let inputs = Inputs::new().r("t", &t_max);
    let verdict = (|| {
        let r = cesaro_zero_exact(&t_max)?.sup_dist_to(&zero);
        holds(r < frac(1, 1000), "||A(1024)0|| < 1/1000", &r, "1/1000")
    })();
    out.push(inputs.done(verdict));
    let inputs = Inputs::new().f("x", &zero);
    let verdict = (|| {
        let moved = evo.apply(&int(1), &zero)?.sup_dist(&zero);
        eq("||T(1)0 - 0||", &moved, &int(1))?;
        holds(!is_common_fixed_point(&zero)?, "0 is not a common fixed point", "fixed", "not fixed")
    })();
    out.push(inputs.done(verdict));
    out
}

fn quadrature_bound(evo: &dyn Evolution) -> Vec<Outcome> {
    let zero = OmegaFn::zero();
    let mut out = Vec::new();
    for t in [int(2), int(4), int(8)] {
        for h in [half(), frac(1, 8), frac(1, 32)] {
            let inputs = Inputs::new().r("t", &t).r("h", &h);
            let verdict = (|| {
                let q = cesaro_quadrature_with(evo, &zero, &t, &h)?;
                let exact = cesaro_zero_exact(&t)?;
                let approx = q.sup_dist_to(&zero);
                let truth = exact.sup_dist_to(&zero);
                le("|quadrature residual - exact residual| vs h/4", &(&approx - &truth).abs(), &q.error_bound)?;
                let mean = q.as_grid().expect("quadrature result");
                le("||quadrature mean - exact mean|| vs h/4", &exact.sup_dist_to(mean), &q.error_bound)?;
                let m = mean.in_c();
                holds(m.in_c, "quadrature mean in C", mean.to_json(), m.violation.map(|v| v.to_string()).unwrap_or_default())
            })();
            out.push(inputs.done(verdict));
        }
    }
    out
}
