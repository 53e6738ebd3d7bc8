//! Finite metric spaces with rational distances.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::Error;

/// How a space was built; used by the index module to find cuts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceKind {
    Interval(usize),
    Circle(usize),
    Grid(Vec<usize>),
    Product(Box<SpaceKind>, Box<SpaceKind>),
    Explicit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricSpace {
    n: usize,
    dist: Vec<BigRational>,
    kind: SpaceKind,
}

fn int(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl MetricSpace {
    pub fn interval(n: usize) -> Result<MetricSpace, Error> {
        if n == 0 {
            return Err(Error::Metric("interval needs N >= 1".into()));
        }
        let dist = (0..n * n).map(|k| int((k / n).abs_diff(k % n))).collect();
        Ok(MetricSpace { n, dist, kind: SpaceKind::Interval(n) })
    }

    /// Sites `0..n` on a cycle with the arc metric.
    pub fn circle(n: usize) -> Result<MetricSpace, Error> {
        if n == 0 {
            return Err(Error::Metric("circle needs N >= 1".into()));
        }
        let dist = (0..n * n)
            .map(|k| {
                let d = (k / n).abs_diff(k % n);
                int(d.min(n - d))
            })
            .collect();
        Ok(MetricSpace { n, dist, kind: SpaceKind::Circle(n) })
    }

    /// Product of intervals with the L∞ metric; the first coordinate varies slowest.
    pub fn grid(dims: &[usize]) -> Result<MetricSpace, Error> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::Metric("grid dimensions must be positive".into()));
        }
        let mut s = MetricSpace::interval(dims[0])?;
        for &d in &dims[1..] {
            s = s.product(&MetricSpace::interval(d)?);
        }
        s.kind = SpaceKind::Grid(dims.to_vec());
        Ok(s)
    }

    /// `self × other` with `d((a,b),(a',b')) = max(d(a,a'), d(b,b'))`; site `(a,b)` gets id `a·|other| + b`.
    pub fn product(&self, other: &MetricSpace) -> MetricSpace {
        let (n1, n2) = (self.n, other.n);
        let n = n1 * n2;
        let mut dist = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let a = self.d(x / n2, y / n2);
                let b = other.d(x % n2, y % n2);
                dist.push(if a >= b { a.clone() } else { b.clone() });
            }
        }
        MetricSpace { n, dist, kind: SpaceKind::Product(Box::new(self.kind.clone()), Box::new(other.kind.clone())) }
    }

    /// A user-supplied table, validated as a metric.
    pub fn explicit(table: Vec<Vec<BigRational>>) -> Result<MetricSpace, Error> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Metric("empty distance table".into()));
        }
        let mut dist = Vec::with_capacity(n * n);
        for row in table {
            if row.len() != n {
                return Err(Error::Metric("distance table is not square".into()));
            }
            dist.extend(row);
        }
        let s = MetricSpace { n, dist, kind: SpaceKind::Explicit };
        s.validate()?;
        Ok(s)
    }

    /// Checks every metric axiom, including the triangle inequality on all triples.
    pub fn validate(&self) -> Result<(), Error> {
        let n = self.n;
        for x in 0..n {
            if !self.d(x, x).is_zero() {
                return Err(Error::Metric(format!("d({x},{x}) != 0")));
            }
            for y in 0..n {
                let d = self.d(x, y);
                if d.is_negative() {
                    return Err(Error::Metric(format!("d({x},{y}) < 0")));
                }
                if x != y && d.is_zero() {
                    return Err(Error::Metric(format!("d({x},{y}) = 0 for distinct sites")));
                }
                if d != self.d(y, x) {
                    return Err(Error::Metric(format!("d({x},{y}) != d({y},{x})")));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if self.d(x, z) > &(self.d(x, y) + self.d(y, z)) {
                        return Err(Error::Metric(format!("triangle inequality fails at ({x},{y},{z})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn kind(&self) -> &SpaceKind {
        &self.kind
    }

    #[inline]
    pub fn d(&self, x: usize, y: usize) -> &BigRational {
        &self.dist[x * self.n + y]
    }

    /// Sites within distance `r` of `x`, ascending.
    pub fn ball(&self, x: usize, r: &BigRational) -> Vec<usize> {
        (0..self.n).filter(|&y| self.d(x, y) <= r).collect()
    }

    /// Sites within distance `r` of some site of `set`, ascending.
    pub fn neighborhood(&self, set: &[usize], r: &BigRational) -> Vec<usize> {
        (0..self.n).filter(|&y| set.iter().any(|&x| self.d(x, y) <= r)).collect()
    }

    pub fn diameter(&self, set: &[usize]) -> BigRational {
        let mut m = BigRational::zero();
        for &x in set {
            for &y in set {
                if self.d(x, y) > &m {
                    m = self.d(x, y).clone();
                }
            }
        }
        m
    }

    /// Largest distance from `x` to a site of `set` (zero for an empty set).
    pub fn reach(&self, x: usize, set: &[usize]) -> BigRational {
        set.iter().map(|&y| self.d(x, y).clone()).max().unwrap_or_else(BigRational::zero)
    }

    /// Number of sites of a one-dimensional space, and whether it wraps.
    pub fn line(&self) -> Option<(usize, bool)> {
        match self.kind {
            SpaceKind::Interval(n) => Some((n, false)),
            SpaceKind::Circle(n) => Some((n, true)),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    #[test]
    fn builder_examples() {
        assert_eq!(MetricSpace::interval(3).unwrap().d(0, 2), &rat(2, 1));
        assert_eq!(MetricSpace::circle(4).unwrap().d(0, 3), &rat(1, 1));
        let p = MetricSpace::interval(2).unwrap().product(&MetricSpace::interval(2).unwrap());
        assert_eq!(p.d(0, 3), &rat(1, 1));
    }

    #[test]
    fn explicit_triangle_violation() {
        let t = vec![
            vec![rat(0, 1), rat(1, 1), rat(5, 1)],
            vec![rat(1, 1), rat(0, 1), rat(1, 1)],
            vec![rat(5, 1), rat(1, 1), rat(0, 1)],
        ];
        assert!(MetricSpace::explicit(t).is_err());
        let ok = vec![vec![rat(0, 1), rat(1, 2)], vec![rat(1, 2), rat(0, 1)]];
        assert!(MetricSpace::explicit(ok).is_ok());
    }

    #[test]
    fn grid_ball_cardinality() {
        let g = MetricSpace::grid(&[5, 5]).unwrap();
        assert_eq!(g.ball(12, &rat(1, 1)).len(), 9);
        assert_eq!(g.ball(0, &rat(1, 1)).len(), 4);
        g.validate().unwrap();
    }
}
