//! Exact scalars over ℚ or 𝔽_p with dense matrices and canonical subspaces.
//!
//! Every matrix carries a single [`Field`] tag. Mixing tags is an error at
//! construction time and a panic inside arithmetic operators.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::Error;

/// The base field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Q,
    Fp(u64),
}

impl Field {
    /// 𝔽_p after checking that `p` is prime.
    pub fn fp(p: u64) -> Result<Field, Error> {
        if is_prime(p) {
            Ok(Field::Fp(p))
        } else {
            Err(Error::Field(format!("{p} is not prime")))
        }
    }

    pub fn zero(self) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::zero()),
            Field::Fp(p) => Scalar::Fp { v: 0, p },
        }
    }

    pub fn one(self) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::one()),
            Field::Fp(p) => Scalar::Fp { v: 1 % p, p },
        }
    }

    pub fn int(self, n: i64) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Fp(p) => Scalar::Fp { v: n.rem_euclid(p as i64) as u64, p },
        }
    }

    /// Image of an arbitrary rational; fails over 𝔽_p when p divides the denominator.
    pub fn rational(self, r: &BigRational) -> Result<Scalar, Error> {
        match self {
            Field::Q => Ok(Scalar::Q(r.clone())),
            Field::Fp(p) => {
                let m = BigInt::from(p);
                let num = r.numer().mod_floor(&m);
                let den = r.denom().mod_floor(&m);
                if den.is_zero() {
                    return Err(Error::Field(format!("denominator vanishes mod {p}")));
                }
                let n = u64::try_from(num).unwrap();
                let d = u64::try_from(den).unwrap();
                Ok(Scalar::Fp { v: mulmod(n, invmod(d, p), p), p })
            }
        }
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Field::Q => 0,
            Field::Fp(p) => p,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Q => write!(f, "Q"),
            Field::Fp(p) => write!(f, "Fp:{p}"),
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[inline]
fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn invmod(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "inverse of zero in F_{p}");
    powmod(a, p - 2, p)
}

/// A field element tagged with its field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { v: u64, p: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Q,
            Scalar::Fp { p, .. } => Field::Fp(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    fn same(&self, other: &Scalar) {
        assert_eq!(self.field(), other.field(), "mixed field tags");
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar, Error> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch(self.field(), other.field()));
        }
        Ok(self + other)
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar, Error> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch(self.field(), other.field()));
        }
        Ok(self * other)
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Q(r) => Scalar::Q(r.recip()),
            Scalar::Fp { v, p } => Scalar::Fp { v: invmod(*v, *p), p: *p },
        })
    }

    pub fn div(&self, other: &Scalar) -> Option<Scalar> {
        other.inv().map(|i| self * &i)
    }

    pub fn pow(&self, e: u64) -> Scalar {
        match self {
            Scalar::Q(r) => {
                let mut acc = BigRational::one();
                for _ in 0..e {
                    acc *= r;
                }
                Scalar::Q(acc)
            }
            Scalar::Fp { v, p } => Scalar::Fp { v: powmod(*v, e, *p), p: *p },
        }
    }

    /// The rational value, if this is a ℚ scalar.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Q(r) => Some(r),
            Scalar::Fp { .. } => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        self.same(o);
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => {
                Scalar::Fp { v: ((*a as u128 + *b as u128) % *p as u128) as u64, p: *p }
            }
            _ => unreachable!(),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self + &(-o)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        self.same(o);
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => {
                Scalar::Fp { v: mulmod(*a, *b, *p), p: *p }
            }
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { v, p } => Scalar::Fp { v: (*p - *v) % *p, p: *p },
        }
    }
}

/// Dense row-major matrix over one field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Mat {
        Mat { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    /// Matrix unit with a single 1 at `(i, j)`.
    pub fn unit(field: Field, n: usize, i: usize, j: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        m.data[i * n + j] = field.one();
        m
    }

    pub fn diag(field: Field, d: &[Scalar]) -> Mat {
        let n = d.len();
        let mut m = Mat::zeros(field, n, n);
        for (i, x) in d.iter().enumerate() {
            m.data[i * n + i] = x.clone();
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Mat, Error> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::Shape("ragged rows".into()));
            }
            for s in row {
                if s.field() != field {
                    return Err(Error::FieldMismatch(field, s.field()));
                }
                data.push(s);
            }
        }
        Ok(Mat { field, rows: r, cols: c, data })
    }

    pub fn from_vec(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Mat, Error> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!("{} entries for {rows}x{cols}", data.len())));
        }
        if let Some(s) = data.iter().find(|s| s.field() != field) {
            return Err(Error::FieldMismatch(field, s.field()));
        }
        Ok(Mat { field, rows, cols, data })
    }

    pub fn from_ints(field: Field, rows: &[&[i64]]) -> Mat {
        let data = rows.iter().map(|r| r.iter().map(|&x| field.int(x)).collect()).collect();
        Mat::from_rows(field, data).expect("well-formed integer rows")
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn data(&self) -> &[Scalar] {
        &self.data
    }
    pub fn into_data(self) -> Vec<Scalar> {
        self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert_eq!(v.field(), self.field, "mixed field tags");
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j { x.is_one() } else { x.is_zero() }
                })
            })
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn scale(&self, c: &Scalar) -> Mat {
        Mat { field: self.field, rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn add(&self, o: &Mat) -> Mat {
        self.check_same_shape(o);
        Mat {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Mat) -> Mat {
        self.check_same_shape(o);
        Mat {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }

    fn check_same_shape(&self, o: &Mat) {
        assert_eq!(self.field, o.field, "mixed field tags");
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.field, o.field, "mixed field tags");
        assert_eq!(self.cols, o.rows, "shape mismatch");
        match self.field {
            Field::Fp(p) => {
                let a = to_u64(&self.data);
                let b = to_u64(&o.data);
                let (n, k, m) = (self.rows, self.cols, o.cols);
                let mut c = vec![0u64; n * m];
                for i in 0..n {
                    for l in 0..k {
                        let x = a[i * k + l];
                        if x == 0 {
                            continue;
                        }
                        let brow = &b[l * m..(l + 1) * m];
                        let crow = &mut c[i * m..(i + 1) * m];
                        for j in 0..m {
                            crow[j] = (crow[j] + mulmod(x, brow[j], p)) % p;
                        }
                    }
                }
                Mat { field: self.field, rows: n, cols: m, data: from_u64(&c, p) }
            }
            Field::Q => {
                let (n, k, m) = (self.rows, self.cols, o.cols);
                let mut c = vec![BigRational::zero(); n * m];
                for i in 0..n {
                    for l in 0..k {
                        let Scalar::Q(x) = &self.data[i * k + l] else { unreachable!() };
                        if x.is_zero() {
                            continue;
                        }
                        for j in 0..m {
                            let Scalar::Q(y) = &o.data[l * m + j] else { unreachable!() };
                            if !y.is_zero() {
                                c[i * m + j] += x * y;
                            }
                        }
                    }
                }
                Mat { field: self.field, rows: n, cols: m, data: c.into_iter().map(Scalar::Q).collect() }
            }
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    /// Kronecker product with block layout `(a_ij B)`.
    pub fn kron(&self, o: &Mat) -> Mat {
        assert_eq!(self.field, o.field, "mixed field tags");
        let (r, c) = (self.rows * o.rows, self.cols * o.cols);
        let mut m = Mat::zeros(self.field, r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        let b = o.get(k, l);
                        if !b.is_zero() {
                            m.data[(i * o.rows + k) * c + j * o.cols + l] = a * b;
                        }
                    }
                }
            }
        }
        m
    }

    pub fn try_kron(&self, o: &Mat) -> Result<Mat, Error> {
        if self.field != o.field {
            return Err(Error::FieldMismatch(self.field, o.field));
        }
        Ok(self.kron(o))
    }

    /// Commutator `self·o − o·self`.
    pub fn commutator(&self, o: &Mat) -> Mat {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn trace(&self) -> Scalar {
        let mut acc = self.field.zero();
        for i in 0..self.rows.min(self.cols) {
            acc = &acc + self.get(i, i);
        }
        acc
    }

    /// Reduced row-echelon form; returns rank and the reduced matrix.
    pub fn rref(&self) -> (usize, Mat) {
        let mut m = self.clone();
        let piv = rref_in_place(self.field, self.rows, self.cols, &mut m.data);
        (piv.len(), m)
    }

    pub fn rank(&self) -> usize {
        self.rref().0
    }

    /// Basis of the right nullspace `{x : Mx = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let piv = rref_in_place(self.field, self.rows, self.cols, &mut m.data);
        nullspace_from_rref(&m, &piv)
    }

    /// One solution of `Mx = b`, if any.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Mat::zeros(self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.data[i * (self.cols + 1) + j] = self.get(i, j).clone();
            }
            aug.data[i * (self.cols + 1) + self.cols] = b[i].clone();
        }
        let piv = rref_in_place(self.field, aug.rows, aug.cols, &mut aug.data);
        if piv.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (r, &c) in piv.iter().enumerate() {
            x[c] = aug.get(r, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Mat::zeros(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.data[i * 2 * n + j] = self.get(i, j).clone();
            }
            aug.data[i * 2 * n + n + i] = self.field.one();
        }
        let piv = rref_in_place(self.field, n, 2 * n, &mut aug.data);
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Mat::zeros(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.data[i * n + j] = aug.get(i, n + j).clone();
            }
        }
        Some(inv)
    }

    /// Determinant by fraction-free elimination.
    pub fn det_ff(&self) -> Result<Scalar, Error> {
        det_ff(self)
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

pub(crate) fn to_u64(d: &[Scalar]) -> Vec<u64> {
    d.iter()
        .map(|s| match s {
            Scalar::Fp { v, .. } => *v,
            Scalar::Q(_) => unreachable!("mixed field tags"),
        })
        .collect()
}

pub(crate) fn from_u64(d: &[u64], p: u64) -> Vec<Scalar> {
    d.iter().map(|&v| Scalar::Fp { v, p }).collect()
}

/// RREF in place over a row-major buffer; returns pivot columns.
pub(crate) fn rref_in_place(field: Field, rows: usize, cols: usize, data: &mut [Scalar]) -> Vec<usize> {
    match field {
        Field::Fp(p) => {
            let mut a = to_u64(data);
            let piv = rref_u64(&mut a, rows, cols, p);
            for (s, v) in data.iter_mut().zip(a) {
                *s = Scalar::Fp { v, p };
            }
            piv
        }
        Field::Q => {
            let mut a: Vec<BigRational> = data
                .iter()
                .map(|s| match s {
                    Scalar::Q(r) => r.clone(),
                    _ => unreachable!("mixed field tags"),
                })
                .collect();
            let piv = rref_q(&mut a, rows, cols);
            for (s, v) in data.iter_mut().zip(a) {
                *s = Scalar::Q(v);
            }
            piv
        }
    }
}

pub(crate) fn rref_u64(a: &mut [u64], rows: usize, cols: usize, p: u64) -> Vec<usize> {
    let mut piv = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(k) = (r..rows).find(|&k| a[k * cols + c] != 0) else { continue };
        if k != r {
            for j in 0..cols {
                a.swap(k * cols + j, r * cols + j);
            }
        }
        let inv = invmod(a[r * cols + c], p);
        for j in c..cols {
            a[r * cols + j] = mulmod(a[r * cols + j], inv, p);
        }
        let (head, tail) = a.split_at_mut(r * cols);
        let (prow, rest) = tail.split_at_mut(cols);
        let elim = |row: &mut [u64]| {
            let f = row[c];
            if f != 0 {
                let g = p - f;
                for j in c..cols {
                    if prow[j] != 0 {
                        row[j] = ((row[j] as u128 + g as u128 * prow[j] as u128) % p as u128) as u64;
                    }
                }
            }
        };
        for row in head.chunks_mut(cols) {
            elim(row);
        }
        for row in rest.chunks_mut(cols) {
            elim(row);
        }
        piv.push(c);
        r += 1;
    }
    piv
}

fn rref_q(a: &mut [BigRational], rows: usize, cols: usize) -> Vec<usize> {
    let mut piv = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(k) = (r..rows).find(|&k| !a[k * cols + c].is_zero()) else { continue };
        if k != r {
            for j in 0..cols {
                a.swap(k * cols + j, r * cols + j);
            }
        }
        let inv = a[r * cols + c].recip();
        for j in c..cols {
            if !a[r * cols + j].is_zero() {
                a[r * cols + j] *= &inv;
            }
        }
        for k in 0..rows {
            if k == r || a[k * cols + c].is_zero() {
                continue;
            }
            let f = a[k * cols + c].clone();
            for j in c..cols {
                if !a[r * cols + j].is_zero() {
                    let t = &f * &a[r * cols + j];
                    a[k * cols + j] -= t;
                }
            }
        }
        piv.push(c);
        r += 1;
    }
    piv
}

fn nullspace_from_rref(m: &Mat, piv: &[usize]) -> Vec<Vec<Scalar>> {
    let field = m.field;
    let mut is_piv = vec![false; m.cols];
    for &c in piv {
        is_piv[c] = true;
    }
    let mut out = Vec::new();
    for free in (0..m.cols).filter(|&c| !is_piv[c]) {
        let mut v = vec![field.zero(); m.cols];
        v[free] = field.one();
        for (r, &c) in piv.iter().enumerate() {
            v[c] = -m.get(r, free);
        }
        out.push(v);
    }
    out
}

/// Exact determinant. Over ℚ the rows are cleared to integers and Bareiss
/// elimination keeps every intermediate value integral.
pub fn det_ff(m: &Mat) -> Result<Scalar, Error> {
    if !m.is_square() {
        return Err(Error::Shape(format!("determinant of {}x{}", m.rows, m.cols)));
    }
    let n = m.rows;
    match m.field {
        Field::Fp(p) => {
            let mut a = to_u64(&m.data);
            let mut det = 1u64;
            for c in 0..n {
                let Some(k) = (c..n).find(|&k| a[k * n + c] != 0) else {
                    return Ok(Scalar::Fp { v: 0, p });
                };
                if k != c {
                    for j in 0..n {
                        a.swap(k * n + j, c * n + j);
                    }
                    det = (p - det) % p;
                }
                let pv = a[c * n + c];
                det = mulmod(det, pv, p);
                let inv = invmod(pv, p);
                for r in c + 1..n {
                    let f = mulmod(a[r * n + c], inv, p);
                    if f == 0 {
                        continue;
                    }
                    for j in c..n {
                        let t = mulmod(f, a[c * n + j], p);
                        a[r * n + j] = (a[r * n + j] + p - t) % p;
                    }
                }
            }
            Ok(Scalar::Fp { v: det, p })
        }
        Field::Q => {
            let mut scale = BigInt::one();
            let mut a: Vec<BigInt> = Vec::with_capacity(n * n);
            for i in 0..n {
                let mut l = BigInt::one();
                for s in m.row(i) {
                    l = l.lcm(s.as_rational().unwrap().denom());
                }
                scale *= &l;
                for s in m.row(i) {
                    let r = s.as_rational().unwrap();
                    a.push(r.numer() * (&l / r.denom()));
                }
            }
            let d = bareiss(&mut a, n);
            Ok(Scalar::Q(BigRational::new(d, scale)))
        }
    }
}

/// Bareiss elimination on an integer matrix; every division is exact.
pub fn bareiss(a: &mut [BigInt], n: usize) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k * n + k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                return BigInt::zero();
            };
            for j in 0..n {
                a.swap(r * n + j, k * n + j);
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                a[i * n + j] = v / &prev;
            }
        }
        prev = a[k * n + k].clone();
    }
    sign * a[n * n - 1].clone()
}

/// A subspace of `field^dim` in canonical reduced row-echelon form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    dim: usize,
    basis: Mat,
}

impl Subspace {
    pub fn zero(field: Field, dim: usize) -> Subspace {
        Subspace { dim, basis: Mat::zeros(field, 0, dim) }
    }

    pub fn full(field: Field, dim: usize) -> Subspace {
        Subspace { dim, basis: Mat::identity(field, dim) }
    }

    /// Span of the given vectors.
    pub fn span(field: Field, dim: usize, vecs: &[Vec<Scalar>]) -> Subspace {
        let mut data = Vec::with_capacity(vecs.len() * dim);
        for v in vecs {
            assert_eq!(v.len(), dim, "vector length");
            data.extend(v.iter().cloned());
        }
        Self::from_rows_data(field, dim, vecs.len(), data)
    }

    pub(crate) fn from_rows_data(field: Field, dim: usize, rows: usize, mut data: Vec<Scalar>) -> Subspace {
        let piv = rref_in_place(field, rows, dim, &mut data);
        data.truncate(piv.len() * dim);
        Subspace { dim, basis: Mat { field, rows: piv.len(), cols: dim, data } }
    }

    /// Row space of `m`.
    pub fn row_space(m: &Mat) -> Subspace {
        Self::from_rows_data(m.field, m.cols, m.rows, m.data.clone())
    }

    pub fn field(&self) -> Field {
        self.basis.field
    }
    pub fn ambient(&self) -> usize {
        self.dim
    }
    pub fn rank(&self) -> usize {
        self.basis.rows
    }
    pub fn basis(&self) -> &Mat {
        &self.basis
    }
    pub fn vectors(&self) -> Vec<Vec<Scalar>> {
        (0..self.basis.rows).map(|i| self.basis.row(i).to_vec()).collect()
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Coordinates of `v` in the canonical basis, if it lies in the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(v.len(), self.dim);
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        for r in 0..self.rank() {
            let row = self.basis.row(r);
            let c = row.iter().position(|x| !x.is_zero()).unwrap();
            let f = rest[c].clone();
            if !f.is_zero() {
                for (x, b) in rest.iter_mut().zip(row) {
                    if !b.is_zero() {
                        *x = &*x - &(&f * b);
                    }
                }
            }
            coords.push(f);
        }
        rest.iter().all(Scalar::is_zero).then_some(coords)
    }

    pub fn sum(&self, o: &Subspace) -> Result<Subspace, Error> {
        self.compatible(o)?;
        let mut data = self.basis.data.clone();
        data.extend(o.basis.data.iter().cloned());
        Ok(Self::from_rows_data(self.field(), self.dim, self.rank() + o.rank(), data))
    }

    pub fn intersect(&self, o: &Subspace) -> Result<Subspace, Error> {
        subspace_intersect(self, o)
    }

    pub fn is_subspace_of(&self, o: &Subspace) -> bool {
        self.dim == o.dim && (0..self.rank()).all(|i| o.contains(self.basis.row(i)))
    }

    fn compatible(&self, o: &Subspace) -> Result<(), Error> {
        if self.field() != o.field() {
            return Err(Error::FieldMismatch(self.field(), o.field()));
        }
        if self.dim != o.dim {
            return Err(Error::Shape(format!("ambient {} vs {}", self.dim, o.dim)));
        }
        Ok(())
    }
}

/// Canonical basis of `U ∩ V`.
pub fn subspace_intersect(u: &Subspace, v: &Subspace) -> Result<Subspace, Error> {
    u.compatible(v)?;
    let field = u.field();
    let (k, l, d) = (u.rank(), v.rank(), u.dim);
    if k == 0 || l == 0 {
        return Ok(Subspace::zero(field, d));
    }
    // (a, b) with aU = bV, as the nullspace of [U; V]^T.
    let mut m = Mat::zeros(field, d, k + l);
    for i in 0..k {
        for j in 0..d {
            m.data[j * (k + l) + i] = u.basis.get(i, j).clone();
        }
    }
    for i in 0..l {
        for j in 0..d {
            m.data[j * (k + l) + k + i] = v.basis.get(i, j).clone();
        }
    }
    let ns = m.nullspace();
    let vecs: Vec<Vec<Scalar>> = ns
        .iter()
        .map(|a| {
            let mut w = vec![field.zero(); d];
            for (i, c) in a[..k].iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (x, b) in w.iter_mut().zip(u.basis.row(i)) {
                    *x = &*x + &(c * b);
                }
            }
            w
        })
        .collect();
    Ok(Subspace::span(field, d, &vecs))
}

pub fn rref(m: &Mat) -> (usize, Mat) {
    m.rref()
}

pub fn kron(a: &Mat, b: &Mat) -> Result<Mat, Error> {
    a.try_kron(b)
}

/// Largest `r` with `r² = n`, if `n` is a perfect square.
pub fn exact_sqrt(n: u128) -> Option<u128> {
    let mut r = (n as f64).sqrt() as u128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    (r * r == n).then_some(r)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_examples() {
        let q = Field::Q;
        let i2 = Mat::identity(q, 2);
        assert_eq!(i2.rref(), (2, i2.clone()));
        assert_eq!(Mat::zeros(q, 2, 2).rref().0, 0);
        assert_eq!(Mat::from_ints(q, &[&[1, 2], &[2, 4]]).rref().0, 1);
    }

    #[test]
    fn intersect_examples() {
        let q = Field::Q;
        let e1 = vec![q.one(), q.zero()];
        let e2 = vec![q.zero(), q.one()];
        let s1 = Subspace::span(q, 2, &[e1.clone()]);
        let s2 = Subspace::span(q, 2, &[e2.clone()]);
        assert_eq!(s1.intersect(&s1).unwrap(), s1);
        assert_eq!(s1.intersect(&s2).unwrap().rank(), 0);
        let u = Subspace::span(q, 2, &[vec![q.one(), q.one()], e2]);
        assert_eq!(u.intersect(&s1).unwrap(), s1);
        assert!(Subspace::zero(q, 3).intersect(&s1).is_err());
    }

    #[test]
    fn det_examples() {
        for f in [Field::Q, Field::Fp(5)] {
            assert!(det_ff(&Mat::identity(f, 4)).unwrap().is_one());
            assert_eq!(det_ff(&Mat::from_ints(f, &[&[0, 1], &[1, 0]])).unwrap(), f.int(-1));
            let mut e = Mat::identity(f, 3);
            e.set(0, 2, f.int(7));
            assert!(det_ff(&e).unwrap().is_one());
        }
        let half = Mat::from_rows(Field::Q, vec![vec![Scalar::Q(rat(1, 2)), Field::Q.zero()], vec![Field::Q.zero(), Scalar::Q(rat(2, 3))]]).unwrap();
        assert_eq!(det_ff(&half).unwrap(), Scalar::Q(rat(1, 3)));
        assert!(det_ff(&Mat::zeros(Field::Q, 2, 3)).is_err());
    }

    #[test]
    fn kron_block_layout() {
        let f = Field::Q;
        let b = Mat::from_ints(f, &[&[1, 2], &[3, 4]]);
        let k = Mat::unit(f, 2, 0, 0).kron(&b);
        for i in 0..4 {
            for j in 0..4 {
                let want = if i < 2 && j < 2 { b.get(i, j).clone() } else { f.zero() };
                assert_eq!(k.get(i, j), &want);
            }
        }
        assert!(Mat::identity(f, 2).kron(&Mat::identity(f, 3)).is_identity());
        assert!(Mat::identity(Field::Q, 2).try_kron(&Mat::identity(Field::Fp(3), 2)).is_err());
    }

    #[test]
    fn mixed_tags_rejected() {
        assert!(Field::Q.one().checked_add(&Field::Fp(3).one()).is_err());
        assert!(Mat::from_rows(Field::Q, vec![vec![Field::Fp(2).one()]]).is_err());
        assert!(Field::fp(9).is_err());
    }

    #[test]
    fn rational_into_fp() {
        let f = Field::Fp(7);
        let x = f.rational(&rat(1, 2)).unwrap();
        assert!((&x * &f.int(2)).is_one());
        assert!(f.rational(&rat(1, 7)).is_err());
    }
}
