use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::pl_function::OmegaFn;
use crate::rational::{frac, half, int, Rational};
use crate::semigroup::{fixed_point, FamilyKind, FixedPointFamily};

/// Denominators of the sampling lattice.
const DENOMS: [i64; 11] = [1, 2, 3, 4, 5, 6, 8, 12, 16, 32, 64];

/// Deterministic source of rational times, points and members of `C`.
pub struct Sampler {
    rng: ChaCha8Rng,
    budget: usize,
}

impl Sampler {
    pub fn new(seed: u64, budget: usize) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), budget: budget.max(1) }
    }

    /// Uniform point of `[lo, hi]` on a lattice with a randomly chosen denominator.
    pub fn rational(&mut self, lo: &Rational, hi: &Rational) -> Rational {
        let q = *DENOMS.choose(&mut self.rng).expect("nonempty");
        let qr = int(q);
        let a = (lo * &qr).ceil().to_integer();
        let b = (hi * &qr).floor().to_integer();
        if a > b {
            return lo.clone();
        }
        let span: i64 = (&b - &a).try_into().unwrap_or(i64::MAX - 1);
        let k = self.rng.gen_range(0..=span);
        Rational::new(a + BigInt::from(k), BigInt::from(q))
    }

    pub fn unit(&mut self) -> Rational {
        self.rational(&Rational::zero(), &Rational::one())
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    /// Random member of `C` with at most `budget` vertices on `[0, ∞)`.
    pub fn function(&mut self) -> OmegaFn {
        let n = self.rng.gen_range(1..=self.budget);
        let minus_one = self.unit();
        let mut u = Rational::zero();
        let mut v = self.unit();
        let mut pairs = vec![(u.clone(), v.clone())];
        for _ in 1..n {
            let du = self.rational(&frac(1, 64), &frac(3, 2));
            let slope = self.rational(&int(-1), &int(1));
            u += &du;
            v = (v + slope * du).clamp(Rational::zero(), Rational::one());
            pairs.push((u.clone(), v.clone()));
        }
        OmegaFn::from_pairs(minus_one, pairs).expect("increasing abscissae")
    }

    /// Mostly random members of `C`, occasionally a fixed point or a near miss.
    pub fn mixed_function(&mut self) -> OmegaFn {
        match self.index(10) {
            0 => {
                let kind = if self.coin(0.5) { FamilyKind::V } else { FamilyKind::W };
                let s = self.rational(&Rational::zero(), &half());
                fixed_point(&FixedPointFamily::new(kind, s).expect("s in range"))
            }
            1 => {
                let c = self.unit();
                let m = self.unit();
                OmegaFn::constant(m, c)
            }
            _ => self.function(),
        }
    }
}
