//! Spin systems and windowed elements of the observable algebra.
//!
//! An [`Element`] is a dense matrix over an ascending support. Inside a
//! support the earlier site is the slower-varying Kronecker index, so on
//! support `[x, y]` the basis vector `(i, j)` has flat index `i·q_y + j`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::exactalg::{Field, Mat, Scalar, Subspace};
use crate::space::MetricSpace;
use crate::Error;

#[derive(Clone, Debug)]
pub struct SpinSystem {
    space: Arc<MetricSpace>,
    q: Vec<usize>,
}

impl PartialEq for SpinSystem {
    fn eq(&self, o: &SpinSystem) -> bool {
        self.q == o.q && (Arc::ptr_eq(&self.space, &o.space) || self.space == o.space)
    }
}
impl Eq for SpinSystem {}

impl SpinSystem {
    pub fn new(space: Arc<MetricSpace>, q: Vec<usize>) -> Result<SpinSystem, Error> {
        if q.len() != space.len() {
            return Err(Error::System(format!("{} dimensions for {} sites", q.len(), space.len())));
        }
        if let Some(x) = q.iter().position(|&d| d == 0) {
            return Err(Error::System(format!("q at site {x} is 0")));
        }
        Ok(SpinSystem { space, q })
    }

    pub fn uniform(space: Arc<MetricSpace>, d: usize) -> Result<SpinSystem, Error> {
        let n = space.len();
        SpinSystem::new(space, vec![d; n])
    }

    pub fn space(&self) -> &Arc<MetricSpace> {
        &self.space
    }

    pub fn q(&self, x: usize) -> usize {
        self.q[x]
    }

    pub fn dims(&self) -> &[usize] {
        &self.q
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    /// Sites with `q_x > 1`.
    pub fn carrier(&self) -> Vec<usize> {
        (0..self.q.len()).filter(|&x| self.q[x] > 1).collect()
    }

    /// `q(S) = ∏_{x∈S} q_x`.
    pub fn dim(&self, support: &[usize]) -> usize {
        support.iter().map(|&x| self.q[x]).product()
    }

    pub fn same_space(&self, o: &SpinSystem) -> bool {
        Arc::ptr_eq(&self.space, &o.space) || self.space == o.space
    }

    /// Sitewise quotient `self / o`, if `o` divides `self`.
    pub fn quotient(&self, o: &SpinSystem) -> Result<SpinSystem, Error> {
        if !self.same_space(o) {
            return Err(Error::System("space mismatch".into()));
        }
        let mut q = Vec::with_capacity(self.q.len());
        for (x, (&a, &b)) in self.q.iter().zip(&o.q).enumerate() {
            if a % b != 0 {
                return Err(Error::System(format!("{b} does not divide {a} at site {x}")));
            }
            q.push(a / b);
        }
        SpinSystem::new(self.space.clone(), q)
    }

    /// Sitewise least common multiple.
    pub fn lcm(&self, o: &SpinSystem) -> Result<SpinSystem, Error> {
        use num_integer::Integer;
        if !self.same_space(o) {
            return Err(Error::System("space mismatch".into()));
        }
        SpinSystem::new(self.space.clone(), self.q.iter().zip(&o.q).map(|(a, b)| a.lcm(b)).collect())
    }
}

/// Pointwise product `(q·r)_x = q_x r_x`.
pub fn stack_systems(q: &SpinSystem, r: &SpinSystem) -> Result<SpinSystem, Error> {
    if !q.same_space(r) {
        return Err(Error::System("space mismatch".into()));
    }
    SpinSystem::new(q.space.clone(), q.q.iter().zip(&r.q).map(|(a, b)| a * b).collect())
}

/// Mixed-radix digits of `k` for the given dimensions, slowest first.
pub fn digits(mut k: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (i, &d) in dims.iter().enumerate().rev() {
        out[i] = k % d;
        k /= d;
    }
    out
}

pub fn undigits(ds: &[usize], dims: &[usize]) -> usize {
    ds.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x)
}

/// For every flat index over `outer`, its flat index over the sub-support `inner`
/// and over the remaining sites.
fn projections(sys: &SpinSystem, outer: &[usize], inner: &[usize]) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let dims: Vec<usize> = outer.iter().map(|&x| sys.q[x]).collect();
    let is_inner: Vec<bool> = outer.iter().map(|x| inner.contains(x)).collect();
    let total: usize = dims.iter().product();
    let mut pin = Vec::with_capacity(total);
    let mut prest = Vec::with_capacity(total);
    let rest_dims: Vec<usize> = dims.iter().zip(&is_inner).filter(|(_, &b)| !b).map(|(&d, _)| d).collect();
    let mut ds = vec![0usize; dims.len()];
    for _ in 0..total {
        let (mut a, mut b) = (0, 0);
        for (k, &d) in ds.iter().enumerate() {
            if is_inner[k] {
                a = a * dims[k] + d;
            } else {
                b = b * dims[k] + d;
            }
        }
        pin.push(a);
        prest.push(b);
        for k in (0..dims.len()).rev() {
            ds[k] += 1;
            if ds[k] < dims[k] {
                break;
            }
            ds[k] = 0;
        }
    }
    (pin, prest, rest_dims)
}

/// Sparse matrix entries keyed by `(row, col)`; zeros are never stored.
pub type Entries = BTreeMap<(usize, usize), Scalar>;

fn accumulate(m: &mut Entries, key: (usize, usize), v: Scalar) {
    match m.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            if !v.is_zero() {
                e.insert(v);
            }
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = &*e.get() + &v;
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

/// An element of `A(S, q)` for an ascending support `S`, stored sparsely.
#[derive(Clone, Debug)]
pub struct Element {
    sys: Arc<SpinSystem>,
    support: Vec<usize>,
    field: Field,
    dim: usize,
    entries: Entries,
}

impl Element {
    pub fn new(sys: Arc<SpinSystem>, support: Vec<usize>, mat: Mat) -> Result<Element, Error> {
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Support("support must be strictly ascending".into()));
        }
        if let Some(&x) = support.iter().find(|&&x| x >= sys.len()) {
            return Err(Error::Support(format!("site {x} outside the space")));
        }
        let d = sys.dim(&support);
        if mat.rows() != d || mat.cols() != d {
            return Err(Error::Shape(format!("matrix {}x{} on a support of dimension {d}", mat.rows(), mat.cols())));
        }
        let mut entries = Entries::new();
        for i in 0..d {
            for j in 0..d {
                let v = mat.get(i, j);
                if !v.is_zero() {
                    entries.insert((i, j), v.clone());
                }
            }
        }
        Ok(Element { sys, support, field: mat.field(), dim: d, entries })
    }

    /// Builds an element from sparse entries; zero values are dropped.
    pub fn from_entries(sys: Arc<SpinSystem>, support: Vec<usize>, field: Field, entries: Entries) -> Result<Element, Error> {
        if support.windows(2).any(|w| w[0] >= w[1]) || support.iter().any(|&x| x >= sys.len()) {
            return Err(Error::Support("support must be strictly ascending sites of the space".into()));
        }
        let dim = sys.dim(&support);
        if entries.keys().any(|&(i, j)| i >= dim || j >= dim) {
            return Err(Error::Shape(format!("entry outside a support of dimension {dim}")));
        }
        if let Some(v) = entries.values().find(|v| v.field() != field) {
            return Err(Error::FieldMismatch(field, v.field()));
        }
        let entries = entries.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(Element { sys, support, field, dim, entries })
    }

    fn raw(sys: Arc<SpinSystem>, support: Vec<usize>, field: Field, entries: Entries) -> Element {
        let dim = sys.dim(&support);
        Element { sys, support, field, dim, entries }
    }

    pub fn scalar(sys: Arc<SpinSystem>, c: Scalar) -> Element {
        let f = c.field();
        let mut entries = Entries::new();
        if !c.is_zero() {
            entries.insert((0, 0), c);
        }
        Element { sys, support: vec![], field: f, dim: 1, entries }
    }

    pub fn identity(sys: Arc<SpinSystem>, field: Field) -> Element {
        Element::scalar(sys, field.one())
    }

    pub fn zero(sys: Arc<SpinSystem>, field: Field) -> Element {
        Element::scalar(sys, field.zero())
    }

    /// The matrix unit `e_ij` at site `x` (0-based indices).
    pub fn matrix_unit(sys: Arc<SpinSystem>, field: Field, x: usize, i: usize, j: usize) -> Result<Element, Error> {
        if x >= sys.len() {
            return Err(Error::Range(format!("site {x}")));
        }
        let d = sys.q(x);
        if i >= d || j >= d {
            return Err(Error::Range(format!("unit ({i},{j}) at a site of dimension {d}")));
        }
        Ok(Element::raw(sys, vec![x], field, Entries::from([((i, j), field.one())])))
    }

    /// The product unit `E_IJ` over `support` for flat indices `I, J`.
    pub fn unit_on(sys: Arc<SpinSystem>, field: Field, support: Vec<usize>, i: usize, j: usize) -> Element {
        Element::raw(sys, support, field, Entries::from([((i, j), field.one())]))
    }

    /// The full matrix `m` placed on a single site.
    pub fn on_site(sys: Arc<SpinSystem>, x: usize, m: Mat) -> Result<Element, Error> {
        Element::new(sys, vec![x], m)
    }

    pub fn system(&self) -> &Arc<SpinSystem> {
        &self.sys
    }
    pub fn support(&self) -> &[usize] {
        &self.support
    }
    pub fn field(&self) -> Field {
        self.field
    }
    /// Dimension `q(S)` of the support.
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn entries(&self) -> &Entries {
        &self.entries
    }
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Dense matrix on the support.
    pub fn matrix(&self) -> Mat {
        Mat::from_vec(self.field, self.dim, self.dim, self.dense_data()).unwrap()
    }

    /// Row-major dense entries on the support.
    pub fn dense_data(&self) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); self.dim * self.dim];
        for (&(i, j), x) in &self.entries {
            v[i * self.dim + j] = x.clone();
        }
        v
    }

    fn check_system(&self, o: &Element) -> Result<(), Error> {
        if !(Arc::ptr_eq(&self.sys, &o.sys) || *self.sys == *o.sys) {
            return Err(Error::System("elements over different spin systems".into()));
        }
        if self.field != o.field {
            return Err(Error::FieldMismatch(self.field, o.field));
        }
        Ok(())
    }

    /// Inserts identity legs so that the support becomes `target`.
    pub fn embed(&self, target: &[usize]) -> Result<Element, Error> {
        if target.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Support("target support must be strictly ascending".into()));
        }
        if let Some(x) = self.support.iter().find(|x| !target.contains(x)) {
            return Err(Error::Support(format!("site {x} missing from the target support")));
        }
        if target.len() == self.support.len() {
            return Ok(self.clone());
        }
        let (pin, prest, rest_dims) = projections(&self.sys, target, &self.support);
        let dr: usize = rest_dims.iter().product();
        let mut comb = vec![0usize; self.dim * dr];
        for (r, (&a, &b)) in pin.iter().zip(&prest).enumerate() {
            comb[a * dr + b] = r;
        }
        let mut m = Entries::new();
        for (&(i, j), v) in &self.entries {
            for t in 0..dr {
                m.insert((comb[i * dr + t], comb[j * dr + t]), v.clone());
            }
        }
        Ok(Element::raw(self.sys.clone(), target.to_vec(), self.field, m))
    }

    fn pair(&self, o: &Element) -> Result<(Element, Element), Error> {
        self.check_system(o)?;
        let u = union(&self.support, &o.support);
        Ok((self.embed(&u)?, o.embed(&u)?))
    }

    pub fn mul(&self, o: &Element) -> Result<Element, Error> {
        let (a, b) = self.pair(o)?;
        let mut m = Entries::new();
        for (&(i, k), x) in &a.entries {
            for (&(_, j), y) in b.entries.range((k, 0)..(k + 1, 0)) {
                accumulate(&mut m, (i, j), x * y);
            }
        }
        Ok(Element { entries: m, ..a })
    }

    pub fn add(&self, o: &Element) -> Result<Element, Error> {
        let (mut a, b) = self.pair(o)?;
        for (k, v) in b.entries {
            accumulate(&mut a.entries, k, v);
        }
        Ok(a)
    }

    pub fn sub(&self, o: &Element) -> Result<Element, Error> {
        let (mut a, b) = self.pair(o)?;
        for (k, v) in b.entries {
            accumulate(&mut a.entries, k, -&v);
        }
        Ok(a)
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        let entries = if c.is_zero() { Entries::new() } else { self.entries.iter().map(|(&k, v)| (k, v * c)).collect() };
        Element { entries, ..self.clone() }
    }

    pub fn commutator(&self, o: &Element) -> Result<Element, Error> {
        self.mul(o)?.sub(&o.mul(self)?)
    }

    /// Checks commutation on the overlap of the supports only: with
    /// `a = Σ A_k ⊗ P_k` and `b = Σ B_l ⊗ Q_l` split over the overlap, the
    /// products `P_k ⊗ Q_l` are independent, so `[a, b] = 0` iff every `[A_k, B_l] = 0`.
    pub fn commutes(&self, o: &Element) -> Result<bool, Error> {
        self.check_system(o)?;
        let overlap: Vec<usize> = self.support.iter().copied().filter(|x| o.support.contains(x)).collect();
        if overlap.is_empty() {
            return Ok(true);
        }
        let a = self.overlap_blocks(&overlap);
        let b = o.overlap_blocks(&overlap);
        for x in &a {
            for y in &b {
                if x.mul(y)?.entries != y.mul(x)?.entries {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// A spanning set of the blocks of `self` on `overlap`, reduced to a basis.
    fn overlap_blocks(&self, overlap: &[usize]) -> Vec<Element> {
        let rest: Vec<usize> = self.support.iter().copied().filter(|x| !overlap.contains(x)).collect();
        let blocks: Vec<Element> = if rest.is_empty() {
            vec![self.clone()]
        } else {
            self.split_legs(&rest).into_iter().map(|(_, _, e)| e).collect()
        };
        if blocks.len() <= 2 {
            return blocks;
        }
        let d = blocks[0].dim;
        let vecs: Vec<Vec<Scalar>> = blocks.iter().map(|b| b.dense_data()).collect();
        Subspace::span(self.field, d * d, &vecs)
            .vectors()
            .into_iter()
            .map(|v| Element::new(self.sys.clone(), overlap.to_vec(), Mat::from_vec(self.field, d, d, v).unwrap()).unwrap())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// `Some(c)` when the element is `c·1`.
    pub fn as_scalar(&self) -> Option<Scalar> {
        if self.entries.is_empty() {
            return Some(self.field.zero());
        }
        if self.entries.len() != self.dim {
            return None;
        }
        let c = self.entries.get(&(0, 0))?.clone();
        self.entries.iter().all(|(&(i, j), v)| i == j && *v == c).then_some(c)
    }

    /// Equality after embedding both elements into the union support.
    pub fn equals(&self, o: &Element) -> Result<bool, Error> {
        if self.support == o.support {
            self.check_system(o)?;
            return Ok(self.entries == o.entries);
        }
        let (a, b) = self.pair(o)?;
        Ok(a.entries == b.entries)
    }

    /// Splits `self = Σ_{k,l} E^T_{kl} ⊗ a_{kl}` for `T ⊆ support`; returns the
    /// nonzero blocks `(k, l, a_kl)` with `a_kl` supported on `support ∖ T`, ordered by `(k, l)`.
    pub fn split_legs(&self, t: &[usize]) -> Vec<(usize, usize, Element)> {
        let t: Vec<usize> = self.support.iter().copied().filter(|x| t.contains(x)).collect();
        let rest: Vec<usize> = self.support.iter().copied().filter(|x| !t.contains(x)).collect();
        let (pin, prest, _) = projections(&self.sys, &self.support, &t);
        let mut blocks: BTreeMap<(usize, usize), Entries> = BTreeMap::new();
        for (&(r, c), v) in &self.entries {
            blocks.entry((pin[r], pin[c])).or_default().insert((prest[r], prest[c]), v.clone());
        }
        blocks
            .into_iter()
            .map(|((k, l), m)| (k, l, Element::raw(self.sys.clone(), rest.clone(), self.field, m)))
            .collect()
    }

    /// Whether the element lies in the embedded copy of `A(support ∖ {s})`.
    pub fn trivial_at(&self, s: usize) -> Option<Element> {
        if !self.support.contains(&s) {
            return Some(self.clone());
        }
        let d = self.sys.q(s);
        let blocks = self.split_legs(&[s]);
        let rest: Vec<usize> = self.support.iter().copied().filter(|&x| x != s).collect();
        let zero = Element::raw(self.sys.clone(), rest, self.field, Entries::new());
        let diag0 = blocks.iter().find(|b| b.0 == 0 && b.1 == 0).map(|b| b.2.clone()).unwrap_or(zero);
        let mut diag_count = 0;
        for (k, l, b) in &blocks {
            if k != l || b.entries != diag0.entries {
                return None;
            }
            diag_count += 1;
        }
        (diag0.is_zero() || diag_count == d).then_some(diag0)
    }

    /// Smallest support on which the element lives.
    pub fn minimize_support(&self) -> Element {
        let mut a = self.clone();
        for &s in &self.support {
            if let Some(b) = a.trivial_at(s) {
                a = b;
            }
        }
        a
    }

    /// Drops legs of sites with `q_x = 1`.
    pub fn strip_trivial(&self) -> Element {
        let keep: Vec<usize> = self.support.iter().copied().filter(|&x| self.sys.q(x) > 1).collect();
        Element { support: keep, ..self.clone() }
    }
}

pub fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut u: Vec<usize> = a.iter().chain(b).copied().collect();
    u.sort_unstable();
    u.dedup();
    u
}

/// Maps `(I, J)` over `q(U)` and `r(U)` to the flat index over `(q·r)(U)`,
/// pairing the two indices at every site with the `q` index slower.
fn phi_index_map(q: &SpinSystem, r: &SpinSystem, u: &[usize]) -> Vec<usize> {
    let dq: Vec<usize> = u.iter().map(|&x| q.q(x)).collect();
    let dr: Vec<usize> = u.iter().map(|&x| r.q(x)).collect();
    let ds: Vec<usize> = dq.iter().zip(&dr).map(|(a, b)| a * b).collect();
    let nq: usize = dq.iter().product();
    let nr: usize = dr.iter().product();
    let mut map = vec![0; nq * nr];
    for i in 0..nq {
        let di = digits(i, &dq);
        for j in 0..nr {
            let dj = digits(j, &dr);
            let s: Vec<usize> = (0..u.len()).map(|k| di[k] * dr[k] + dj[k]).collect();
            map[i * nr + j] = undigits(&s, &ds);
        }
    }
    map
}

/// Φ(a ⊗ b): sitewise Kronecker stacking of an element over `q` with one over `r`.
pub fn phi_stack(a: &Element, b: &Element, qr: &Arc<SpinSystem>) -> Result<Element, Error> {
    if !a.sys.same_space(&b.sys) {
        return Err(Error::System("space mismatch".into()));
    }
    if **qr != stack_systems(&a.sys, &b.sys)? {
        return Err(Error::System("target system is not the stacked system".into()));
    }
    if a.field != b.field {
        return Err(Error::FieldMismatch(a.field, b.field));
    }
    let u = union(&a.support, &b.support);
    let (ea, eb) = (a.embed(&u)?, b.embed(&u)?);
    let map = phi_index_map(&a.sys, &b.sys, &u);
    let nb = eb.dim;
    let mut m = Entries::new();
    for (&(i, i2), x) in &ea.entries {
        for (&(j, j2), y) in &eb.entries {
            m.insert((map[i * nb + j], map[i2 * nb + j2]), x * y);
        }
    }
    Ok(Element::raw(qr.clone(), u, a.field, m))
}

/// One term `e^{(q)}_{IJ} ⊗ C_{IJ}` of the inverse stacking expansion.
#[derive(Clone, Debug)]
pub struct PhiTerm {
    pub i: usize,
    pub j: usize,
    pub coeff: Element,
}

/// Φ⁻¹(c) = Σ e^{(q)}_{IJ} ⊗ C_{IJ} over the support of `c`; only nonzero terms are returned.
pub fn phi_unstack(c: &Element, q: &Arc<SpinSystem>, r: &Arc<SpinSystem>) -> Result<Vec<PhiTerm>, Error> {
    if *c.sys != stack_systems(q, r)? {
        return Err(Error::System("element is not over the stacked system".into()));
    }
    let u = c.support.clone();
    let map = phi_index_map(q, r, &u);
    let nr = r.dim(&u);
    let mut inv = vec![(0, 0); map.len()];
    for (k, &flat) in map.iter().enumerate() {
        inv[flat] = (k / nr, k % nr);
    }
    let mut terms: BTreeMap<(usize, usize), Entries> = BTreeMap::new();
    for (&(row, col), v) in &c.entries {
        let ((i, j), (i2, j2)) = (inv[row], inv[col]);
        terms.entry((i, i2)).or_default().insert((j, j2), v.clone());
    }
    Ok(terms
        .into_iter()
        .map(|((i, j), m)| PhiTerm { i, j, coeff: Element::raw(r.clone(), u.clone(), c.field, m) })
        .collect())
}

/// Reassembles Σ Φ(e_{IJ} ⊗ C_{IJ}) on `support`.
pub fn phi_restack(terms: &[PhiTerm], q: &Arc<SpinSystem>, qr: &Arc<SpinSystem>, support: &[usize], field: Field) -> Result<Element, Error> {
    let mut acc = Element::zero(qr.clone(), field).embed(support)?;
    for t in terms {
        let e = Element::unit_on(q.clone(), field, support.to_vec(), t.i, t.j);
        acc = acc.add(&phi_stack(&e, &t.coeff, qr)?)?;
    }
    Ok(acc)
}
