//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use qcalab::qca::Homo;
use qcalab::spin::union;
use qcalab::{Element, Field, Mat, MetricSpace, Scalar, SpinSystem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn line(q: Vec<usize>) -> Arc<SpinSystem> {
    let n = q.len();
    Arc::new(SpinSystem::new(Arc::new(MetricSpace::interval(n).unwrap()), q).unwrap())
}

pub fn random_dims<R: Rng>(rng: &mut R, n: usize, max: usize) -> Vec<usize> {
    (0..n).map(|_| rng.gen_range(1..=max)).collect()
}

/// Determinant by cofactor expansion along the first row.
pub fn cofactor_det(m: &Mat) -> Scalar {
    let n = m.rows();
    let f = m.field();
    if n == 0 {
        return f.one();
    }
    if n == 1 {
        return m.get(0, 0).clone();
    }
    let mut acc = f.zero();
    for j in 0..n {
        let minor: Vec<Vec<Scalar>> = (1..n).map(|i| (0..n).filter(|&c| c != j).map(|c| m.get(i, c).clone()).collect()).collect();
        let term = m.get(0, j).checked_mul(&cofactor_det(&Mat::from_rows(f, minor).unwrap())).unwrap();
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Prime exponents of a positive integer by naive trial division.
pub fn factor(mut n: BigInt) -> BTreeMap<u64, i64> {
    let mut out = BTreeMap::new();
    let mut p = 2u64;
    while n > BigInt::from(1) {
        while &n % p == BigInt::from(0) {
            n /= p;
            *out.entry(p).or_insert(0) += 1;
        }
        p += 1;
    }
    out
}

/// `v_p(r)` for every prime, sign dropped.
pub fn rational_valuations(r: &BigRational) -> BTreeMap<u64, BigRational> {
    let mut out: BTreeMap<u64, BigRational> = BTreeMap::new();
    let abs = |x: &BigInt| if x < &BigInt::from(0) { -x } else { x.clone() };
    for (p, e) in factor(abs(r.numer())) {
        *out.entry(p).or_insert_with(|| BigRational::from_integer(0.into())) += BigRational::from_integer(e.into());
    }
    for (p, e) in factor(abs(r.denom())) {
        *out.entry(p).or_insert_with(|| BigRational::from_integer(0.into())) -= BigRational::from_integer(e.into());
    }
    out.retain(|_, v| *v != BigRational::from_integer(0.into()));
    out
}

/// Sites `(lo, hi]` taken modulo `n`.
pub fn arc_mod(lo: i64, hi: i64, n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (lo + 1..=hi).map(|k| k.rem_euclid(n as i64) as usize).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Dimension of the commutant, inside `A(R)` with `R = (γ−ℓ, γ+ℓ]`, of the images of all matrix
/// units at sites of `(γ, γ+2ℓ]`, by one dense nullspace computation on a common window.
pub fn brute_boundary_dim(alpha: &Homo, gamma: usize, ell: usize) -> usize {
    let sys = alpha.source();
    let n = sys.len();
    let (g, l) = (gamma as i64, ell as i64);
    let r = arc_mod(g - l, g + l, n);
    let y = arc_mod(g, g + 2 * l, n);
    let mut gens: Vec<Element> = Vec::new();
    for &x in &y {
        let q = sys.q(x);
        for i in 0..q {
            for j in 0..q {
                gens.push(alpha.image(x, i, j).clone());
            }
        }
    }
    let window = gens.iter().fold(r.clone(), |w, e| union(&w, e.support()));
    let f = alpha.field();
    let dr = sys.dim(&r);
    let dense_gens: Vec<Mat> = gens.iter().map(|e| e.embed(&window).unwrap().matrix()).collect();
    let mut columns: Vec<Vec<Scalar>> = Vec::new();
    for a in 0..dr {
        for b in 0..dr {
            let e = Element::unit_on(sys.clone(), f, r.clone(), a, b).embed(&window).unwrap().matrix();
            let mut col = Vec::new();
            for g in &dense_gens {
                col.extend(e.mul(g).sub(&g.mul(&e)).data().iter().cloned());
            }
            columns.push(col);
        }
    }
    let rows = columns[0].len();
    let m = Mat::from_vec(f, rows, columns.len(), (0..rows).flat_map(|i| columns.iter().map(move |c| c[i].clone())).collect()).unwrap();
    m.nullspace().len()
}

pub fn field_name(f: Field) -> String {
    f.to_string()
}
