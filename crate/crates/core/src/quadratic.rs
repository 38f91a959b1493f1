//! Piecewise-quadratic functions on the real line with rational data.
//!
//! Used to hold the exact time average of the zero orbit: the antiderivative of a
//! piecewise-linear function is piecewise quadratic, and so is any shifted
//! difference of antiderivatives.

use num_traits::{Signed, Zero};

use crate::pl::Pl;
use crate::rational::{int, Rational};

/// `a u² + b u + c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quadratic {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl Quadratic {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Self {
        Quadratic { a, b, c }
    }

    pub fn eval(&self, u: &Rational) -> Rational {
        (&self.a * u + &self.b) * u + &self.c
    }

    /// `u ↦ q(u - d)`.
    fn shift(&self, d: &Rational) -> Quadratic {
        let a = self.a.clone();
        let b = &self.b - int(2) * &self.a * d;
        let c = &self.a * d * d - &self.b * d + &self.c;
        Quadratic { a, b, c }
    }

    fn combine(&self, x: &Rational, other: &Quadratic, y: &Rational) -> Quadratic {
        Quadratic {
            a: x * &self.a + y * &other.a,
            b: x * &self.b + y * &other.b,
            c: x * &self.c + y * &other.c,
        }
    }
}

/// Pieces separated by strictly increasing `cuts`; piece `i` covers
/// `[cuts[i-1], cuts[i]]`, with the first and last pieces unbounded.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiecewiseQuadratic {
    cuts: Vec<Rational>,
    pieces: Vec<Quadratic>,
}

impl PiecewiseQuadratic {
    pub fn cuts(&self) -> &[Rational] {
        &self.cuts
    }

    pub fn pieces(&self) -> &[Quadratic] {
        &self.pieces
    }

    fn piece_at(&self, u: &Rational) -> &Quadratic {
        &self.pieces[self.cuts.partition_point(|c| c < u)]
    }

    pub fn eval(&self, u: &Rational) -> Rational {
        self.piece_at(u).eval(u)
    }

    /// The piecewise-linear function itself, extended constantly on both sides.
    pub fn from_pl(pl: &Pl) -> Self {
        let pts = pl.vertices();
        let cuts = pts.iter().map(|p| p.u.clone()).collect();
        let mut pieces = vec![Quadratic::new(int(0), int(0), pts[0].v.clone())];
        for w in pts.windows(2) {
            let k = (&w[1].v - &w[0].v) / (&w[1].u - &w[0].u);
            pieces.push(Quadratic::new(int(0), k.clone(), &w[0].v - k * &w[0].u));
        }
        pieces.push(Quadratic::new(int(0), int(0), pl.tail_value().clone()));
        PiecewiseQuadratic { cuts, pieces }
    }

    /// `r ↦ ∫_{start}^{r} pl`, with `pl` extended constantly left of its start.
    pub fn antiderivative(pl: &Pl) -> Self {
        let pts = pl.vertices();
        let two = int(2);
        // q(r) = acc + v (r - p) + k (r - p)² / 2
        let piece = |acc: &Rational, p: &Rational, v: &Rational, k: &Rational| {
            let a = k / &two;
            let b = v - k * p;
            let c = acc - v * p + k * p * p / &two;
            Quadratic::new(a, b, c)
        };
        let zero = Rational::zero();
        let mut acc = Rational::zero();
        let mut pieces = vec![piece(&acc, &pts[0].u, &pts[0].v, &zero)];
        for w in pts.windows(2) {
            let k = (&w[1].v - &w[0].v) / (&w[1].u - &w[0].u);
            pieces.push(piece(&acc, &w[0].u, &w[0].v, &k));
            acc += (&w[1].u - &w[0].u) * (&w[0].v + &w[1].v) / &two;
        }
        let last = &pts[pts.len() - 1];
        pieces.push(piece(&acc, &last.u, &last.v, &zero));
        PiecewiseQuadratic { cuts: pts.iter().map(|p| p.u.clone()).collect(), pieces }
    }

    /// `u ↦ self(u - d)`.
    pub fn shift(&self, d: &Rational) -> Self {
        PiecewiseQuadratic {
            cuts: self.cuts.iter().map(|c| c + d).collect(),
            pieces: self.pieces.iter().map(|q| q.shift(d)).collect(),
        }
    }

    /// `x * self + y * other`.
    pub fn combine(&self, x: &Rational, other: &Self, y: &Rational) -> Self {
        let mut cuts: Vec<Rational> = self.cuts.iter().chain(other.cuts.iter()).cloned().collect();
        cuts.sort();
        cuts.dedup();
        let mut pieces = Vec::with_capacity(cuts.len() + 1);
        for i in 0..=cuts.len() {
            // a point strictly inside the i-th interval selects the right piece of each input
            let probe = match (i.checked_sub(1).map(|j| &cuts[j]), cuts.get(i)) {
                (None, Some(hi)) => hi - int(1),
                (Some(lo), None) => lo + int(1),
                (Some(lo), Some(hi)) => (lo + hi) / int(2),
                (None, None) => int(0),
            };
            pieces.push(self.piece_at(&probe).combine(x, other.piece_at(&probe), y));
        }
        PiecewiseQuadratic { cuts, pieces }
    }

    /// Exact supremum over `[from, ∞)`, or `None` when unbounded above.
    pub fn sup_from(&self, from: &Rational) -> Option<Rational> {
        let mut best = self.eval(from);
        for (i, q) in self.pieces.iter().enumerate() {
            let lo = if i == 0 { None } else { Some(&self.cuts[i - 1]) };
            let hi = self.cuts.get(i);
            if hi.is_some_and(|h| h < from) {
                continue;
            }
            let lo = match lo {
                Some(l) if l > from => l.clone(),
                _ => from.clone(),
            };
            let mut candidates = vec![q.eval(&lo)];
            match hi {
                Some(h) => candidates.push(q.eval(h)),
                None => {
                    if q.a.is_positive() || (q.a.is_zero() && q.b.is_positive()) {
                        return None;
                    }
                }
            }
            if !q.a.is_zero() {
                let vertex = -&q.b / (int(2) * &q.a);
                if vertex > lo && hi.is_none_or(|h| &vertex < h) {
                    candidates.push(q.eval(&vertex));
                }
            }
            for c in candidates {
                if c > best {
                    best = c;
                }
            }
        }
        Some(best)
    }

    /// Exact supremum of `|self|` over `[from, ∞)`.
    pub fn sup_abs_from(&self, from: &Rational) -> Option<Rational> {
        let neg = self.combine(&int(-1), &PiecewiseQuadratic::constant(int(0)), &int(0));
        Some(self.sup_from(from)?.max(neg.sup_from(from)?))
    }

    pub fn constant(c: Rational) -> Self {
        PiecewiseQuadratic { cuts: vec![], pieces: vec![Quadratic::new(int(0), int(0), c)] }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn bump() -> Pl {
        Pl::from_pairs([(int(-2), int(0)), (int(-1), int(1)), (int(0), int(0))]).unwrap()
    }

    #[test]
    fn antiderivative_values() {
        let f = PiecewiseQuadratic::antiderivative(&bump());
        assert_eq!(f.eval(&int(-3)), int(0));
        assert_eq!(f.eval(&frac(-3, 2)), frac(1, 8));
        assert_eq!(f.eval(&int(-1)), frac(1, 2));
        assert_eq!(f.eval(&frac(-1, 2)), frac(7, 8));
        assert_eq!(f.eval(&int(0)), int(1));
        assert_eq!(f.eval(&int(9)), int(1));
    }

    #[test]
    fn antiderivative_matches_integrate() {
        let g = Pl::from_pairs([(int(0), frac(1, 3)), (int(1), int(1)), (frac(5, 2), frac(1, 4))]).unwrap();
        let big = PiecewiseQuadratic::antiderivative(&g);
        for k in 0..40 {
            let r = frac(k, 8);
            assert_eq!(big.eval(&r), g.integrate(&int(0), &r).unwrap());
        }
    }

    #[test]
    fn sup_with_interior_vertex() {
        // 1 - (u - 1)^2 on [0, 2], clamped flat outside
        let p = PiecewiseQuadratic {
            cuts: vec![int(0), int(2)],
            pieces: vec![
                Quadratic::new(int(0), int(0), int(0)),
                Quadratic::new(int(-1), int(2), int(0)),
                Quadratic::new(int(0), int(0), int(0)),
            ],
        };
        assert_eq!(p.sup_from(&int(0)), Some(int(1)));
        assert_eq!(p.sup_from(&frac(3, 2)), Some(frac(3, 4)));
        assert_eq!(p.sup_abs_from(&int(0)), Some(int(1)));
    }

    #[test]
    fn unbounded_detected() {
        let ramp = Pl::from_pairs([(int(0), int(1))]).unwrap();
        let p = PiecewiseQuadratic::antiderivative(&ramp);
        assert_eq!(p.sup_from(&int(0)), None);
    }

    #[test]
    fn from_pl_agrees() {
        let g = Pl::from_pairs([(int(0), frac(1, 3)), (int(1), int(1)), (frac(5, 2), frac(1, 4))]).unwrap();
        let q = PiecewiseQuadratic::from_pl(&g);
        for k in -8..40 {
            let r = frac(k, 8);
            assert_eq!(q.eval(&r), g.eval(&r));
        }
        let shifted = q.shift(&frac(1, 3));
        assert_eq!(shifted.eval(&frac(4, 3)), int(1));
    }
}
