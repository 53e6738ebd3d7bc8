//! The certified boundary index of a QCA on a line, plus the pump family.
//!
//! For a cut between `γ` and `γ+1` and a radius `ℓ`:
//! `R = (γ−ℓ, γ+ℓ]` and `Y = (γ, γ+2ℓ]`; the left half of `R` is `M = (γ−ℓ, γ]`.
//! `B` is the commutant in `A(R)` of `α(A(Y))` and the index is `√dim B / q(M)`.
//! Sets are taken mod `N` on a circle and clipped on an interval.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::exactalg::{exact_sqrt, Field, Mat, Subspace};
use crate::qca::{apply, compose, int_rat, Homo};
use crate::space::MetricSpace;
use crate::spin::{digits, union, Element, SpinSystem};
use crate::subalg::{centralizer, commutant, verify_tensor_pair, Subalgebra, TensorPairCertificate};
use crate::Error;

/// A cut between sites `gamma` and `gamma + 1` with window radius `ell`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cut {
    pub gamma: usize,
    pub ell: usize,
}

/// The site sets attached to a cut.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutSets {
    pub window: Vec<usize>,
    pub right: Vec<usize>,
    pub left_half: Vec<usize>,
    pub left: Vec<usize>,
    pub far_left: Vec<usize>,
    pub zone: Vec<usize>,
}

fn arc(lo: i64, hi: i64, n: usize, wraps: bool) -> Vec<usize> {
    let mut v: Vec<usize> = (lo + 1..=hi)
        .filter_map(|k| {
            if wraps {
                Some(k.rem_euclid(n as i64) as usize)
            } else {
                (0..n as i64).contains(&k).then_some(k as usize)
            }
        })
        .collect();
    v.sort_unstable();
    v.dedup();
    v
}

impl Cut {
    pub fn new(gamma: usize, ell: usize) -> Cut {
        Cut { gamma, ell }
    }

    /// Validates the cut on `space` and returns its site sets.
    pub fn sets(&self, space: &MetricSpace) -> Result<CutSets, Error> {
        let (n, wraps) = space.line().ok_or_else(|| Error::Cut("cuts need an interval or a circle".into()))?;
        let (g, l) = (self.gamma as i64, self.ell as i64);
        if l == 0 {
            return Err(Error::Cut("window radius must be at least 1".into()));
        }
        if wraps {
            if self.gamma >= n {
                return Err(Error::Cut(format!("cut position {} outside circle({n})", self.gamma)));
            }
            if 4 * self.ell > n {
                return Err(Error::Cut(format!("4ℓ = {} exceeds circle size {n}", 4 * self.ell)));
            }
        } else if g + 1 >= n as i64 || g - l + 1 < 0 || g + l > n as i64 - 1 {
            return Err(Error::Cut(format!("window ({}, {}] leaves interval({n})", g - l, g + l)));
        }
        Ok(CutSets {
            window: arc(g - l, g + l, n, wraps),
            right: arc(g, g + 2 * l, n, wraps),
            left_half: arc(g - l, g, n, wraps),
            left: arc(g - 2 * l, g, n, wraps),
            far_left: arc(g - 3 * l, g - l, n, wraps),
            zone: arc(g - 2 * l, g + 2 * l, n, wraps),
        })
    }
}

fn check_local(alpha: &Homo, cut: &Cut, sets: &CutSets) -> Result<(), Error> {
    let ell = int_rat(cut.ell);
    for x in 0..alpha.source().len() {
        if sets.zone.contains(&x) {
            if alpha.site_spread(x) > ell {
                return Err(Error::Cut(format!("spread at site {x} exceeds ℓ = {}", cut.ell)));
            }
        } else if alpha.site_support(x).iter().any(|s| sets.window.contains(s)) {
            return Err(Error::Cut(format!("image of distant site {x} reaches the window")));
        }
    }
    Ok(())
}

fn generators(h: &Homo, x: usize) -> Vec<Element> {
    let q = h.source().q(x);
    (1..q).flat_map(|j| [h.image(x, 0, j).clone(), h.image(x, j, 0).clone()]).collect()
}

fn check_auto(alpha: &Homo) -> Result<(), Error> {
    if **alpha.source() != **alpha.target() {
        return Err(Error::Cut("index needs an automorphism of one spin system".into()));
    }
    Ok(())
}

/// `B`: elements of `A(R)` commuting with `α(e)` for every matrix unit at sites of `Y`.
pub fn boundary_algebra(alpha: &Homo, cut: &Cut) -> Result<Subalgebra, Error> {
    check_auto(alpha)?;
    let sets = cut.sets(alpha.source().space())?;
    check_local(alpha, cut, &sets)?;
    let ops: Vec<Element> = sets.right.iter().flat_map(|&y| generators(alpha, y)).collect();
    commutant(alpha.target().clone(), alpha.field(), &ops, &sets.window)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexCertificates {
    /// `B` and its centralizer in `A(R)` are mutual tensor factors.
    pub tensor_pair: TensorPairCertificate,
    /// Images of generators at sites of `(γ−2ℓ, γ]` lie in `A((γ−3ℓ, γ−ℓ]) ⊗ B`.
    pub left_images: bool,
}

impl IndexCertificates {
    pub fn passed(&self) -> bool {
        self.tensor_pair.passed() && self.left_images
    }
}

/// The index at one cut: the reduced fraction `d/m` together with `B`.
#[derive(Clone, Debug)]
pub struct AzClass {
    pub value: BigRational,
    pub d: u128,
    pub m: u128,
    pub dim_b: u128,
    pub field: Field,
    pub b: Subalgebra,
    pub certificates: IndexCertificates,
}

pub fn index(alpha: &Homo, cut: &Cut) -> Result<AzClass, Error> {
    let b = boundary_algebra(alpha, cut)?;
    let sets = cut.sets(alpha.source().space())?;
    let dim_b = b.dim();
    let d = exact_sqrt(dim_b).ok_or_else(|| Error::Cut(format!("dim B = {dim_b} is not a perfect square")))?;
    let m = alpha.source().dim(&sets.left_half) as u128;
    let tensor_pair = verify_tensor_pair(&b, &centralizer(&b)?)?;
    let mut left_images = true;
    'outer: for &y in &sets.left {
        for g in generators(alpha, y) {
            if !b.contains_with_outside(&g, &sets.far_left)? {
                left_images = false;
                break 'outer;
            }
        }
    }
    let value = BigRational::new(BigInt::from(d), BigInt::from(m));
    Ok(AzClass { value, d, m, dim_b, field: alpha.field(), b, certificates: IndexCertificates { tensor_pair, left_images } })
}

/// Index at every cut of a circle or interval that admits radius `ell`.
pub fn index_all_cuts(alpha: &Homo, ell: usize) -> Result<Vec<(Cut, AzClass)>, Error> {
    let (n, _) = alpha.source().space().line().ok_or_else(|| Error::Cut("cuts need an interval or a circle".into()))?;
    let mut out = Vec::new();
    for g in 0..n {
        let cut = Cut::new(g, ell);
        if cut.sets(alpha.source().space()).is_err() {
            continue;
        }
        out.push((cut, index(alpha, &cut)?));
    }
    Ok(out)
}

/// Brute-force `B` as `span α(A((γ−2ℓ, γ])) ∩ A(R)`, for small windows only.
pub fn boundary_by_intersection(alpha: &Homo, cut: &Cut) -> Result<Subalgebra, Error> {
    check_auto(alpha)?;
    let sets = cut.sets(alpha.source().space())?;
    check_local(alpha, cut, &sets)?;
    let sys = alpha.target().clone();
    let f = alpha.field();
    let l = &sets.left;
    let mut w = sets.window.clone();
    for &x in l {
        w = union(&w, &alpha.site_support(x));
    }
    let (dl, dw) = (sys.dim(l), sys.dim(&w));
    if (dl * dl) as u128 * (dw * dw) as u128 > 4_000_000 {
        return Err(Error::Cut("window too large for the intersection oracle".into()));
    }
    let dims: Vec<usize> = l.iter().map(|&x| sys.q(x)).collect();
    let mut images = Vec::with_capacity(dl * dl);
    for k in 0..dl * dl {
        let (row, col) = (digits(k / dl, &dims), digits(k % dl, &dims));
        let mut e = Element::identity(sys.clone(), f);
        for (t, &x) in l.iter().enumerate() {
            e = e.mul(&Element::matrix_unit(sys.clone(), f, x, row[t], col[t])?)?;
        }
        images.push(apply(alpha, &e)?.embed(&w)?.dense_data());
    }
    let span = Subspace::span(f, dw * dw, &images);
    let dr = sys.dim(&sets.window);
    let local: Vec<Vec<_>> = (0..dr * dr)
        .map(|k| {
            let e = Element::new(sys.clone(), sets.window.clone(), Mat::unit(f, dr, k / dr, k % dr)).unwrap();
            e.embed(&w).unwrap().dense_data()
        })
        .collect();
    let inter = span.intersect(&Subspace::span(f, dw * dw, &local))?;
    let elems = inter
        .vectors()
        .into_iter()
        .map(|v| Element::new(sys.clone(), w.clone(), Mat::from_vec(f, dw, dw, v).unwrap()).unwrap().minimize_support().embed(&sets.window))
        .collect::<Result<Vec<_>, _>>()?;
    Subalgebra::from_span(sys, f, &sets.window, &elems)
}

/// Outcome of checking `index(β∘α) = index(β)·index(α)` at one cut.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multiplicativity {
    pub alpha: BigRational,
    pub beta: BigRational,
    pub product: BigRational,
    pub holds: bool,
}

pub fn check_homomorphism(alpha: &Homo, beta: &Homo, cut: &Cut) -> Result<Multiplicativity, Error> {
    let ba = compose(beta, alpha)?;
    let a = index(alpha, cut)?.value;
    let b = index(beta, cut)?.value;
    let p = index(&ba, cut)?.value;
    let holds = p == &a * &b;
    Ok(Multiplicativity { alpha: a, beta: b, product: p, holds })
}

/// The pump on `interval(n)` with `q ≡ a·b`: the `a` leg of each site moves one step right,
/// the `b` leg one step left, and the two end legs are exchanged across the interval.
///
/// Site units are indexed `(i_a, i_b)` with the `a` leg slowest. Index `a/b` at central cuts.
pub fn pump(a: usize, b: usize, n: usize, field: Field) -> Result<Homo, Error> {
    if a == 0 || b == 0 {
        return Err(Error::Homo("pump needs a, b >= 1".into()));
    }
    if n < 6 {
        return Err(Error::Homo("pump needs an interval of at least 6 sites".into()));
    }
    let sys = Arc::new(SpinSystem::uniform(Arc::new(MetricSpace::interval(n)?), a * b)?);
    let q = a * b;
    let leg_a = |y: usize, i: usize, j: usize| Element::on_site(sys.clone(), y, Mat::unit(field, a, i, j).kron(&Mat::identity(field, b)));
    let leg_b = |y: usize, i: usize, j: usize| Element::on_site(sys.clone(), y, Mat::identity(field, a).kron(&Mat::unit(field, b, i, j)));
    let mut images = Vec::with_capacity(n);
    for x in 0..n {
        let ya = if x + 1 < n { x + 1 } else { 0 };
        let yb = if x > 0 { x - 1 } else { n - 1 };
        let mut list = Vec::with_capacity(q * q);
        for k in 0..q * q {
            let (row, col) = (k / q, k % q);
            let e = leg_a(ya, row / b, col / b)?.mul(&leg_b(yb, row % b, col % b)?)?;
            list.push(e);
        }
        images.push(list);
    }
    Homo::new(sys.clone(), sys, field, images)
}

/// The central cut of `interval(n)` with radius 1.
pub fn central_cut(n: usize) -> Cut {
    Cut::new(n / 2 - 1, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;
    use crate::qca::{translation, verify};

    fn circle(n: usize, d: usize) -> Arc<SpinSystem> {
        Arc::new(SpinSystem::uniform(Arc::new(MetricSpace::circle(n).unwrap()), d).unwrap())
    }

    #[test]
    fn identity_index_one() {
        let s = circle(8, 2);
        let id = Homo::identity(s, Field::Fp(3));
        let c = index(&id, &Cut::new(3, 1)).unwrap();
        assert_eq!(c.dim_b, 4);
        assert_eq!(c.value, rat(1, 1));
        assert!(c.certificates.passed());
    }

    #[test]
    fn translation_index_two() {
        let s = circle(8, 2);
        let t = translation(&s, Field::Fp(3), 1).unwrap();
        for ell in [1, 2] {
            for (_, c) in index_all_cuts(&t, ell).unwrap() {
                assert_eq!(c.value, rat(2, 1));
                assert!(c.certificates.passed());
            }
        }
        let c = index(&t, &Cut::new(0, 1)).unwrap();
        assert_eq!(c.dim_b, 16);
        let oracle = boundary_by_intersection(&t, &Cut::new(0, 1)).unwrap();
        assert!(oracle.equals(&c.b).unwrap());
    }

    #[test]
    fn pump_two_thirds() {
        let p = pump(2, 3, 6, Field::Fp(2)).unwrap();
        assert!(verify(&p).is_ok());
        let c = index(&p, &central_cut(6)).unwrap();
        assert_eq!((c.d, c.m, c.dim_b), (4, 6, 16));
        assert_eq!(c.value, rat(2, 3));
        assert!(c.certificates.passed());
        assert!(boundary_by_intersection(&p, &central_cut(6)).is_err());
        for (a, b) in [(2, 1), (1, 3), (3, 1)] {
            let p = pump(a, b, 6, Field::Fp(3)).unwrap();
            let c = index(&p, &central_cut(6)).unwrap();
            assert_eq!(c.value, rat(a as i64, b as i64));
            let oracle = boundary_by_intersection(&p, &central_cut(6)).unwrap();
            assert!(oracle.equals(&c.b).unwrap());
        }
    }

    #[test]
    fn cut_validation() {
        let s = circle(8, 2);
        let id = Homo::identity(s, Field::Q);
        assert!(index(&id, &Cut::new(0, 3)).is_err());
        assert!(index(&id, &Cut::new(8, 1)).is_err());
        let p = pump(2, 1, 6, Field::Q).unwrap();
        assert!(index(&p, &Cut::new(0, 1)).is_err());
    }
}
