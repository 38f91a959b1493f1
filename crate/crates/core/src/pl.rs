//! Piecewise-linear functions on a half-line `[start, ∞)` with rational breakpoints.
//!
//! A [`Pl`] is a nonempty, strictly increasing list of vertices `(u, v)`. Between
//! vertices the function is the linear interpolant; after the last vertex it is
//! constant. Evaluation to the left of the first vertex extends the first value
//! constantly, which lets functions with different starting points be combined.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// One vertex of a piecewise-linear function.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vertex {
    #[serde(with = "crate::rational::as_str")]
    pub u: Rational,
    #[serde(with = "crate::rational::as_str")]
    pub v: Rational,
}

impl Vertex {
    pub fn new(u: Rational, v: Rational) -> Self {
        Vertex { u, v }
    }
}

/// Canonical piecewise-linear function on `[start, ∞)`, eventually constant.
///
/// Canonical means: the first vertex is kept, interior vertices are exactly the
/// points where the slope changes, and the last segment is never flat (a flat
/// final segment is absorbed into the constant tail). Two canonical values are
/// equal as functions on `[start, ∞)` iff they are structurally equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pl {
    pts: Vec<Vertex>,
}

impl Pl {
    /// Validates ordering and canonicalizes.
    pub fn new(pts: Vec<Vertex>) -> Result<Self> {
        if pts.is_empty() {
            return Err(Error::Structure("no breakpoints".into()));
        }
        if let Some(w) = pts.windows(2).find(|w| w[0].u >= w[1].u) {
            return Err(Error::Structure(format!(
                "abscissae not strictly increasing at {} -> {}",
                w[0].u, w[1].u
            )));
        }
        Ok(Pl { pts: canonical(pts) })
    }

    pub fn constant(start: Rational, value: Rational) -> Self {
        Pl { pts: vec![Vertex::new(start, value)] }
    }

    /// Builds from `(u, v)` pairs.
    pub fn from_pairs<I: IntoIterator<Item = (Rational, Rational)>>(pairs: I) -> Result<Self> {
        Pl::new(pairs.into_iter().map(|(u, v)| Vertex::new(u, v)).collect())
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.pts
    }

    pub fn start(&self) -> &Rational {
        &self.pts[0].u
    }

    /// Abscissa of the last vertex; the function is constant from here on.
    pub fn end(&self) -> &Rational {
        &self.pts[self.pts.len() - 1].u
    }

    pub fn tail_value(&self) -> &Rational {
        &self.pts[self.pts.len() - 1].v
    }

    pub fn eval(&self, u: &Rational) -> Rational {
        let pts = &self.pts;
        // index of the first vertex with abscissa > u
        let i = pts.partition_point(|p| &p.u <= u);
        if i == 0 {
            return pts[0].v.clone();
        }
        if i == pts.len() {
            return pts[i - 1].v.clone();
        }
        let (a, b) = (&pts[i - 1], &pts[i]);
        if &a.u == u {
            return a.v.clone();
        }
        lerp(a, b, u)
    }

    /// `u ↦ self(u - d)`: moves every vertex right by `d`.
    pub fn shift(&self, d: &Rational) -> Pl {
        Pl {
            pts: self.pts.iter().map(|p| Vertex::new(&p.u + d, p.v.clone())).collect(),
        }
    }

    /// `u ↦ scale * self(u) + offset`.
    pub fn affine(&self, scale: &Rational, offset: &Rational) -> Pl {
        let pts = self
            .pts
            .iter()
            .map(|p| Vertex::new(p.u.clone(), scale * &p.v + offset))
            .collect();
        Pl { pts: canonical(pts) }
    }

    /// The same function viewed on `[a, ∞)`.
    pub fn restrict(&self, a: &Rational) -> Pl {
        let mut pts = vec![Vertex::new(a.clone(), self.eval(a))];
        pts.extend(self.pts.iter().filter(|p| &p.u > a).cloned());
        Pl { pts: canonical(pts) }
    }

    /// Vertices on `[start, b]`, closed by the value at `b` (requires `b >= start`).
    pub fn vertices_until(&self, b: &Rational) -> Vec<Vertex> {
        let mut pts: Vec<Vertex> = self.pts.iter().filter(|p| &p.u < b).cloned().collect();
        pts.push(Vertex::new(b.clone(), self.eval(b)));
        pts
    }

    /// Sorted union of both vertex abscissae, restricted to `>= from`, with `from` included.
    fn merged_abscissae(&self, other: &Pl, from: &Rational) -> Vec<Rational> {
        let mut us: Vec<Rational> = std::iter::once(from.clone())
            .chain(self.pts.iter().map(|p| p.u.clone()))
            .chain(other.pts.iter().map(|p| p.u.clone()))
            .filter(|u| u >= from)
            .collect();
        us.sort();
        us.dedup();
        us
    }

    fn envelope(&self, other: &Pl, take_min: bool) -> Pl {
        let from = self.start().min(other.start()).clone();
        let us = self.merged_abscissae(other, &from);
        let pick = |a: Rational, b: Rational| {
            if (a <= b) == take_min {
                a
            } else {
                b
            }
        };
        let mut pts = Vec::with_capacity(us.len() * 2);
        let mut prev: Option<(Rational, Rational)> = None;
        for u in us {
            let d = self.eval(&u) - other.eval(&u);
            if let Some((pu, pd)) = &prev {
                if (pd.is_positive() && d.is_negative()) || (pd.is_negative() && d.is_positive()) {
                    let cross = pu + (&u - pu) * pd / (pd - &d);
                    let v = self.eval(&cross);
                    pts.push(Vertex::new(cross, v));
                }
            }
            let v = pick(self.eval(&u), other.eval(&u));
            pts.push(Vertex::new(u.clone(), v));
            prev = Some((u, d));
        }
        Pl { pts: canonical(pts) }
    }

    /// Pointwise minimum; segment crossings become vertices.
    pub fn min(&self, other: &Pl) -> Pl {
        self.envelope(other, true)
    }

    /// Pointwise maximum; segment crossings become vertices.
    pub fn max(&self, other: &Pl) -> Pl {
        self.envelope(other, false)
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: &Rational, other: &Pl, b: &Rational) -> Pl {
        let from = self.start().min(other.start()).clone();
        let pts = self
            .merged_abscissae(other, &from)
            .into_iter()
            .map(|u| {
                let v = a * self.eval(&u) + b * other.eval(&u);
                Vertex::new(u, v)
            })
            .collect();
        Pl { pts: canonical(pts) }
    }

    /// Supremum of `|self - other|` over `[from, ∞)`. Exact: the difference is
    /// piecewise linear, so its extremes sit at merged vertices or in the common tail.
    pub fn sup_abs_diff(&self, other: &Pl, from: &Rational) -> Rational {
        self.merged_abscissae(other, from)
            .iter()
            .map(|u| (self.eval(u) - other.eval(u)).abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Exact integral over `[a, b]` as a sum of trapezoids.
    pub fn integrate(&self, a: &Rational, b: &Rational) -> Result<Rational> {
        if a > b {
            return Err(Error::Argument(format!("integration bounds reversed: {a} > {b}")));
        }
        let mut us: Vec<Rational> = std::iter::once(a.clone())
            .chain(self.pts.iter().map(|p| p.u.clone()).filter(|u| u > a && u < b))
            .chain(std::iter::once(b.clone()))
            .collect();
        us.dedup();
        let two = Rational::from_integer(2.into());
        Ok(us
            .windows(2)
            .map(|w| (&w[1] - &w[0]) * (self.eval(&w[0]) + self.eval(&w[1])) / &two)
            .sum())
    }

    /// Slopes of consecutive segments, paired with their left vertex.
    pub fn slopes(&self) -> impl Iterator<Item = (&Vertex, Rational)> + '_ {
        self.pts.windows(2).map(|w| (&w[0], slope(&w[0], &w[1])))
    }
}

pub(crate) fn slope(a: &Vertex, b: &Vertex) -> Rational {
    (&b.v - &a.v) / (&b.u - &a.u)
}

fn lerp(a: &Vertex, b: &Vertex, u: &Rational) -> Rational {
    &a.v + (&b.v - &a.v) * (u - &a.u) / (&b.u - &a.u)
}

fn collinear(a: &Vertex, b: &Vertex, c: &Vertex) -> bool {
    (&b.v - &a.v) * (&c.u - &b.u) == (&c.v - &b.v) * (&b.u - &a.u)
}

/// Merges collinear interior vertices and drops a flat final segment.
/// Input must be strictly increasing in `u`.
pub(crate) fn canonical(pts: Vec<Vertex>) -> Vec<Vertex> {
    let mut out: Vec<Vertex> = Vec::with_capacity(pts.len());
    for p in pts {
        while out.len() >= 2 && collinear(&out[out.len() - 2], &out[out.len() - 1], &p) {
            out.pop();
        }
        out.push(p);
    }
    if out.len() >= 2 && out[out.len() - 1].v == out[out.len() - 2].v {
        out.pop();
    }
    out
}
