//! Rationalized `K₁` of the tensor general linear group.
//!
//! A class is `det(A) ⊗ 1/n` in `R^× ⊗ ℚ`. Over `ℚ` this is a finitely supported
//! map prime → rational exponent; over `𝔽_p` every class is trivial.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactalg::{Field, Mat, Scalar};
use crate::qca::{gate_matrix, permutation_matrix, swap_matrix, GateSpec};
use crate::spin::SpinSystem;
use crate::Error;

/// Default trial-division bound when `QCALAB_PRIME_BOUND` is unset.
pub const DEFAULT_PRIME_BOUND: u64 = 1_000_000;

pub fn prime_bound() -> u64 {
    std::env::var("QCALAB_PRIME_BOUND").ok().and_then(|s| s.trim().parse().ok()).filter(|&b| b >= 2).unwrap_or(DEFAULT_PRIME_BOUND)
}

/// An element of `R^× ⊗ ℚ` for `R = ℚ` or `𝔽_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalizedUnits {
    field: Field,
    exps: BTreeMap<u64, BigRational>,
}

impl RationalizedUnits {
    pub fn trivial(field: Field) -> RationalizedUnits {
        RationalizedUnits { field, exps: BTreeMap::new() }
    }

    /// Builds a class from exponents; zero entries are dropped and any entry over `𝔽_p` vanishes.
    pub fn from_exponents(field: Field, exps: impl IntoIterator<Item = (u64, BigRational)>) -> RationalizedUnits {
        let mut r = RationalizedUnits::trivial(field);
        if field == Field::Q {
            for (p, e) in exps {
                r.add_at(p, e);
            }
        }
        r
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn exponents(&self) -> &BTreeMap<u64, BigRational> {
        &self.exps
    }

    pub fn exponent(&self, p: u64) -> BigRational {
        self.exps.get(&p).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.is_empty()
    }

    fn add_at(&mut self, p: u64, e: BigRational) {
        let v = self.exps.entry(p).or_insert_with(BigRational::zero);
        *v += e;
        if v.is_zero() {
            self.exps.remove(&p);
        }
    }

    pub fn add(&self, o: &RationalizedUnits) -> Result<RationalizedUnits, Error> {
        if self.field != o.field {
            return Err(Error::FieldMismatch(self.field, o.field));
        }
        let mut r = self.clone();
        for (&p, e) in &o.exps {
            r.add_at(p, e.clone());
        }
        Ok(r)
    }

    pub fn scale(&self, c: &BigRational) -> RationalizedUnits {
        RationalizedUnits::from_exponents(self.field, self.exps.iter().map(|(&p, e)| (p, e * c)))
    }
}

/// `v_p(n)` for every prime `p`, by trial division up to `bound`.
pub fn factorize(n: &BigUint, bound: u64) -> Result<BTreeMap<u64, u64>, Error> {
    if n.is_zero() {
        return Err(Error::Factor("cannot factor zero".into()));
    }
    let mut rem = n.clone();
    let mut out = BTreeMap::new();
    let mut p: u64 = 2;
    while p <= bound && BigUint::from(p) * BigUint::from(p) <= rem {
        let bp = BigUint::from(p);
        while (&rem % &bp).is_zero() {
            rem /= &bp;
            *out.entry(p).or_insert(0) += 1;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !rem.is_one() {
        if BigUint::from(p) * BigUint::from(p) <= rem {
            return Err(Error::Factor(format!("cofactor {rem} has no prime factor ≤ {bound} and is not certified prime")));
        }
        let q = rem.to_u64().ok_or_else(|| Error::Factor(format!("prime factor {rem} exceeds 64 bits")))?;
        *out.entry(q).or_insert(0) += 1;
    }
    Ok(out)
}

/// The class of a nonzero rational unit `r` (sign discarded).
pub fn unit_class(r: &BigRational, bound: u64) -> Result<RationalizedUnits, Error> {
    if r.is_zero() {
        return Err(Error::Factor("zero is not a unit".into()));
    }
    let num = factorize(&r.numer().abs().to_biguint().unwrap(), bound)?;
    let den = factorize(&r.denom().abs().to_biguint().unwrap(), bound)?;
    let mut exps: Vec<(u64, BigRational)> = num.into_iter().map(|(p, e)| (p, BigRational::from_integer(e.into()))).collect();
    exps.extend(den.into_iter().map(|(p, e)| (p, -BigRational::from_integer(e.into()))));
    Ok(RationalizedUnits::from_exponents(Field::Q, exps))
}

/// `f_n(A) = det(A) ⊗ 1/n`, with the bound read from `QCALAB_PRIME_BOUND`.
pub fn k1_class(a: &Mat, n: usize) -> Result<RationalizedUnits, Error> {
    k1_class_bounded(a, n, prime_bound())
}

pub fn k1_class_bounded(a: &Mat, n: usize, bound: u64) -> Result<RationalizedUnits, Error> {
    if !a.is_square() || a.rows() != n || n == 0 {
        return Err(Error::Shape(format!("declared size {n} does not match a {}x{} matrix", a.rows(), a.cols())));
    }
    let det = a.det_ff()?;
    if det.is_zero() {
        return Err(Error::Factor("singular matrix".into()));
    }
    match det {
        Scalar::Q(r) => Ok(unit_class(&r, bound)?.scale(&BigRational::new(1.into(), (n as u64).into()))),
        Scalar::Fp { .. } => Ok(RationalizedUnits::trivial(a.field())),
    }
}

/// Classes of `A`, `A ⊗ I_k` and `I_k ⊗ A`.
#[derive(Clone, Debug)]
pub struct StabilizationCertificate {
    pub base: RationalizedUnits,
    pub right: RationalizedUnits,
    pub left: RationalizedUnits,
}

impl StabilizationCertificate {
    pub fn holds(&self) -> bool {
        self.base == self.right && self.base == self.left
    }
}

pub fn check_stabilization(a: &Mat, k: usize) -> Result<StabilizationCertificate, Error> {
    let n = a.rows();
    let id = Mat::identity(a.field(), k);
    Ok(StabilizationCertificate {
        base: k1_class(a, n)?,
        right: k1_class(&a.kron(&id), k * n)?,
        left: k1_class(&id.kron(a), k * n)?,
    })
}

/// The section `g(r ⊗ p/q) = diag(r^p, 1, …, 1)` of size `q`.
pub fn split_g(r: &BigRational, p: i64, q: usize) -> Result<Mat, Error> {
    if r.is_zero() {
        return Err(Error::Factor("r must be nonzero".into()));
    }
    if q == 0 {
        return Err(Error::Shape("q must be at least 1".into()));
    }
    let pow = if p >= 0 { num_traits::pow(r.clone(), p as usize) } else { num_traits::pow(r.recip(), p.unsigned_abs() as usize) };
    let mut d = vec![Field::Q.one(); q];
    d[0] = Scalar::Q(pow);
    Ok(Mat::diag(Field::Q, &d))
}

/// Whether a permutation (in one-line form) is odd.
pub fn is_odd(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut transpositions = 0;
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions % 2 == 1
}

/// The swap gate of `Mat(a) ⊗ Mat(b)` after stabilization.
#[derive(Clone, Debug)]
pub struct SwapClass {
    pub a: usize,
    pub b: usize,
    pub odd: bool,
    /// Determinant of the gate after stabilization by `I₂` when odd.
    pub det: Scalar,
    pub class: RationalizedUnits,
}

pub fn swap_gate_class(field: Field, a: usize, b: usize) -> Result<SwapClass, Error> {
    let perm: Vec<usize> = (0..a * b).map(|k| (k % b) * a + k / b).collect();
    let odd = is_odd(&perm);
    let m = permutation_matrix(field, &perm)?;
    debug_assert_eq!(m, swap_matrix(field, a, b));
    let m = if odd { m.kron(&Mat::identity(field, 2)) } else { m };
    let det = m.det_ff()?;
    let class = k1_class(&m, m.rows())?;
    Ok(SwapClass { a, b, odd, det, class })
}

/// Per-site swap gate classes of the stacked pair `(q, r)`.
pub fn swap_class(q: &SpinSystem, r: &SpinSystem, field: Field) -> Result<Vec<SwapClass>, Error> {
    if !q.same_space(r) {
        return Err(Error::System("systems on different spaces".into()));
    }
    (0..q.len()).map(|x| swap_gate_class(field, q.q(x), r.q(x))).collect()
}

/// Sum of the gate classes of one circuit layer.
pub fn layer_class(sys: &SpinSystem, field: Field, layer: &[GateSpec]) -> Result<RationalizedUnits, Error> {
    let mut total = RationalizedUnits::trivial(field);
    for spec in layer {
        let g = gate_matrix(sys, field, spec)?;
        total = total.add(&k1_class(&g, g.rows())?)?;
    }
    Ok(total)
}

impl std::fmt::Display for RationalizedUnits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.exps.iter().map(|(p, e)| format!("{p}^{e}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}
