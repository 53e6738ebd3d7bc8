//! Locality-preserving homomorphisms, circuits and the group operations.
//!
//! A [`Homo`] is stored by the images of all matrix units at every site.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::exactalg::{Field, Mat, Scalar, Subspace};
use crate::spin::{digits, phi_stack, stack_systems, union, Element, SpinSystem};
use crate::Error;

#[derive(Clone, Debug)]
pub struct Homo {
    source: Arc<SpinSystem>,
    target: Arc<SpinSystem>,
    field: Field,
    images: Vec<Vec<Element>>,
    spread: BigRational,
}

/// Violated relations found by [`verify`]; empty means a valid homomorphism.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub violations: Vec<String>,
}

impl Report {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl Homo {
    /// Builds a homomorphism from unit images `images[x][i·q_x + j]`; supports are minimised.
    pub fn new(source: Arc<SpinSystem>, target: Arc<SpinSystem>, field: Field, images: Vec<Vec<Element>>) -> Result<Homo, Error> {
        if !source.same_space(&target) {
            return Err(Error::Homo("source and target live on different spaces".into()));
        }
        if images.len() != source.len() {
            return Err(Error::Homo(format!("{} image lists for {} sites", images.len(), source.len())));
        }
        let mut imgs = Vec::with_capacity(images.len());
        for (x, list) in images.into_iter().enumerate() {
            let q = source.q(x);
            if list.len() != q * q {
                return Err(Error::Homo(format!("site {x} needs {} images, got {}", q * q, list.len())));
            }
            let mut out = Vec::with_capacity(list.len());
            for e in list {
                if *e.system().as_ref() != *target {
                    return Err(Error::Homo(format!("image at site {x} is not over the target system")));
                }
                if e.field() != field {
                    return Err(Error::FieldMismatch(field, e.field()));
                }
                out.push(e.minimize_support());
            }
            imgs.push(out);
        }
        let spread = compute_spread(&source, &imgs);
        Ok(Homo { source, target, field, images: imgs, spread })
    }

    pub fn identity(sys: Arc<SpinSystem>, field: Field) -> Homo {
        let images = (0..sys.len())
            .map(|x| {
                let q = sys.q(x);
                (0..q * q).map(|k| Element::matrix_unit(sys.clone(), field, x, k / q, k % q).unwrap().minimize_support()).collect()
            })
            .collect();
        Homo { source: sys.clone(), target: sys, field, images, spread: BigRational::zero() }
    }

    pub fn source(&self) -> &Arc<SpinSystem> {
        &self.source
    }
    pub fn target(&self) -> &Arc<SpinSystem> {
        &self.target
    }
    pub fn field(&self) -> Field {
        self.field
    }
    pub fn images(&self) -> &[Vec<Element>] {
        &self.images
    }

    pub fn image(&self, x: usize, i: usize, j: usize) -> &Element {
        &self.images[x][i * self.source.q(x) + j]
    }

    /// Cached spread: the largest distance from a site to the support of one of its images.
    pub fn spread(&self) -> &BigRational {
        &self.spread
    }

    /// Largest distance from `x` to the support of an image of a unit at `x`.
    pub fn site_spread(&self, x: usize) -> BigRational {
        let space = self.source.space();
        self.images[x].iter().map(|e| space.reach(x, e.support())).max().unwrap_or_else(BigRational::zero)
    }

    /// Union of the supports of all images at `x`.
    pub fn site_support(&self, x: usize) -> Vec<usize> {
        self.images[x].iter().fold(Vec::new(), |acc, e| union(&acc, e.support()))
    }

    /// Exact equality of systems and all unit images.
    pub fn equals(&self, o: &Homo) -> Result<bool, Error> {
        if *self.source != *o.source || *self.target != *o.target || self.field != o.field {
            return Ok(false);
        }
        for (a, b) in self.images.iter().zip(&o.images) {
            for (x, y) in a.iter().zip(b) {
                if !x.equals(y)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Replaces one image entry; used to build corrupted inputs.
    pub fn with_image(&self, x: usize, k: usize, e: Element) -> Result<Homo, Error> {
        let mut images = self.images.clone();
        images[x][k] = e;
        Homo::new(self.source.clone(), self.target.clone(), self.field, images)
    }
}

fn compute_spread(source: &SpinSystem, images: &[Vec<Element>]) -> BigRational {
    let space = source.space();
    let mut s = BigRational::zero();
    for (x, list) in images.iter().enumerate() {
        for e in list {
            let r = space.reach(x, e.support());
            if r > s {
                s = r;
            }
        }
    }
    s
}

/// Checks unit relations, unit sum, cross-site commutation and the cached spread.
pub fn verify(h: &Homo) -> Report {
    let mut v = Vec::new();
    let f = h.field;
    let one = Element::identity(h.target.clone(), f);
    for x in 0..h.source.len() {
        let q = h.source.q(x);
        for i in 0..q {
            for j in 0..q {
                let p = h.image(x, i, 0).mul(h.image(x, 0, j)).unwrap();
                if !p.equals(h.image(x, i, j)).unwrap() {
                    v.push(format!("site {x}: e{i}0·e0{j} != e{i}{j}"));
                }
                let p = h.image(x, 0, i).mul(h.image(x, j, 0)).unwrap();
                let want = if i == j { h.image(x, 0, 0).clone() } else { Element::zero(h.target.clone(), f) };
                if !p.equals(&want).unwrap() {
                    v.push(format!("site {x}: e0{i}·e{j}0 violates the unit relation"));
                }
            }
        }
        let mut sum = Element::zero(h.target.clone(), f);
        for i in 0..q {
            sum = sum.add(h.image(x, i, i)).unwrap();
        }
        if !sum.equals(&one).unwrap() {
            v.push(format!("site {x}: unit images do not sum to 1"));
        }
    }
    let gens = |x: usize| -> Vec<&Element> {
        let q = h.source.q(x);
        (1..q).flat_map(|j| [h.image(x, 0, j), h.image(x, j, 0)]).collect()
    };
    let supports: Vec<Vec<usize>> = (0..h.source.len()).map(|x| h.site_support(x)).collect();
    for x in 0..h.source.len() {
        for y in x + 1..h.source.len() {
            if supports[x].iter().all(|s| !supports[y].contains(s)) {
                continue;
            }
            'pair: for a in gens(x) {
                for b in gens(y) {
                    if !a.commutes(b).unwrap() {
                        v.push(format!("images at sites {x} and {y} do not commute"));
                        break 'pair;
                    }
                }
            }
        }
    }
    let s = compute_spread(&h.source, &h.images);
    if s != h.spread {
        v.push(format!("cached spread {} differs from recomputed {}", h.spread, s));
    }
    Report { violations: v }
}

/// The restriction of a unital homomorphism to `A(S)` written as
/// `X ↦ P (X ⊗ 1_r) P⁻¹` on a target window.
pub struct Rep {
    pub support: Vec<usize>,
    pub window: Vec<usize>,
    p: Mat,
    pinv: Mat,
    ds: usize,
    r: usize,
}

impl Rep {
    pub fn new(h: &Homo, support: &[usize], extra: &[usize]) -> Result<Rep, Error> {
        let f = h.field;
        let mut window = extra.to_vec();
        window.sort_unstable();
        window.dedup();
        for &x in support {
            window = union(&window, &h.site_support(x));
        }
        let dw = h.target.dim(&window);
        let ds = h.source.dim(support);
        if dw % ds != 0 {
            return Err(Error::Homo("window dimension is not a multiple of the source dimension".into()));
        }
        let r = dw / ds;
        let emb = |x: usize, i: usize, j: usize| h.image(x, i, j).embed(&window).map(|e| e.matrix().clone());
        let mut h00 = Mat::identity(f, dw);
        for &x in support {
            h00 = emb(x, 0, 0)?.mul(&h00);
        }
        let col = Subspace::row_space(&h00.transpose());
        if col.rank() != r {
            return Err(Error::Homo(format!("corner projection has rank {} instead of {r}", col.rank())));
        }
        let w0 = col.basis().transpose();
        let mut p = Mat::zeros(f, dw, dw);
        let dims: Vec<usize> = support.iter().map(|&x| h.source.q(x)).collect();
        let site_units: Vec<Vec<Mat>> = support
            .iter()
            .map(|&x| (0..h.source.q(x)).map(|i| emb(x, i, 0)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<_, _>>()?;
        for big_i in 0..ds {
            let di = digits(big_i, &dims);
            let mut m = w0.clone();
            for (k, &i) in di.iter().enumerate() {
                m = site_units[k][i].mul(&m);
            }
            for row in 0..dw {
                for c in 0..r {
                    p.set(row, big_i * r + c, m.get(row, c).clone());
                }
            }
        }
        let pinv = p.inverse().ok_or_else(|| Error::Homo("images do not form a full system of matrix units".into()))?;
        Ok(Rep { support: support.to_vec(), window, p, pinv, ds, r })
    }

    /// `h(x)` for `x ∈ A(support)`, as a matrix on the window.
    pub fn image(&self, x: &Mat) -> Mat {
        let f = x.field();
        let lifted = x.kron(&Mat::identity(f, self.r));
        self.p.mul(&lifted.mul(&self.pinv))
    }

    /// The unique `x` with `h(x) = t`, or `None` when `t` is not in the image.
    pub fn preimage(&self, t: &Mat) -> Option<Mat> {
        let y = self.pinv.mul(&t.mul(&self.p));
        let f = t.field();
        let mut x = Mat::zeros(f, self.ds, self.ds);
        for i in 0..self.ds {
            for j in 0..self.ds {
                x.set(i, j, y.get(i * self.r, j * self.r).clone());
            }
        }
        (x.kron(&Mat::identity(f, self.r)) == y).then_some(x)
    }
}

/// Image of an element of the source algebra.
pub fn apply(h: &Homo, a: &Element) -> Result<Element, Error> {
    if **a.system() != *h.source {
        return Err(Error::System("element is not over the source system".into()));
    }
    if a.field() != h.field {
        return Err(Error::FieldMismatch(h.field, a.field()));
    }
    let a = a.minimize_support().strip_trivial();
    let s = a.support().to_vec();
    if s.is_empty() {
        return Ok(Element::scalar(h.target.clone(), a.get(0, 0)));
    }
    Ok(apply_rec(h, &a, &s)?.minimize_support())
}

fn apply_rec(h: &Homo, a: &Element, s: &[usize]) -> Result<Element, Error> {
    let x = s[0];
    let q = h.source.q(x);
    let mut acc = Element::zero(h.target.clone(), h.field);
    if s.len() == 1 {
        for (&(i, j), c) in a.entries() {
            acc = acc.add(&h.images[x][i * q + j].scale(c))?;
        }
        return Ok(acc);
    }
    for (i, j, blk) in a.split_legs(&[x]) {
        let rest = apply_rec(h, &blk, &s[1..])?;
        acc = acc.add(&h.images[x][i * q + j].mul(&rest)?)?;
    }
    Ok(acc)
}

fn stabilize_pair(a: &Homo, b: &Homo) -> Result<(Homo, Homo), Error> {
    if *a.target == *b.source {
        return Ok((a.clone(), b.clone()));
    }
    let l = a.target.lcm(&b.source)?;
    let ta = Arc::new(l.quotient(&a.target)?);
    let tb = Arc::new(l.quotient(&b.source)?);
    Ok((stabilize(a, &ta)?, stabilize(b, &tb)?))
}

/// `b ∘ a`, stabilising both to the sitewise lcm of the middle systems when they differ.
pub fn compose(b: &Homo, a: &Homo) -> Result<Homo, Error> {
    if !a.source.same_space(&b.source) {
        return Err(Error::Homo("incompatible spaces".into()));
    }
    if a.field != b.field {
        return Err(Error::FieldMismatch(a.field, b.field));
    }
    let (a, b) = stabilize_pair(a, b)?;
    let mut images = Vec::with_capacity(a.source.len());
    for x in 0..a.source.len() {
        let mut list = Vec::with_capacity(a.images[x].len());
        for e in &a.images[x] {
            list.push(apply(&b, e)?);
        }
        images.push(list);
    }
    Homo::new(a.source.clone(), b.target.clone(), a.field, images)
}

/// `Φ ∘ (a ⊗ b) ∘ Φ⁻¹` from `q·q′` to `r·r′`.
pub fn stack(a: &Homo, b: &Homo) -> Result<Homo, Error> {
    if !a.source.same_space(&b.source) {
        return Err(Error::Homo("space mismatch".into()));
    }
    if a.field != b.field {
        return Err(Error::FieldMismatch(a.field, b.field));
    }
    let src = Arc::new(stack_systems(&a.source, &b.source)?);
    let tgt = Arc::new(stack_systems(&a.target, &b.target)?);
    let mut images = Vec::with_capacity(src.len());
    for x in 0..src.len() {
        let (qa, qb) = (a.source.q(x), b.source.q(x));
        let q = qa * qb;
        let mut list = Vec::with_capacity(q * q);
        for k in 0..q * q {
            let (row, col) = (k / q, k % q);
            let (i, i2) = (row / qb, row % qb);
            let (j, j2) = (col / qb, col % qb);
            list.push(phi_stack(a.image(x, i, j), b.image(x, i2, j2), &tgt)?);
        }
        images.push(list);
    }
    Homo::new(src, tgt, a.field, images)
}

/// `ι(α) = α ⊗ id_t`, conjugated by Φ.
pub fn stabilize(a: &Homo, t: &Arc<SpinSystem>) -> Result<Homo, Error> {
    stack(a, &Homo::identity(t.clone(), a.field))
}

/// Stabilises an automorphism of `q` to the system `s`, which `q` must divide.
pub fn stabilize_to(a: &Homo, s: &Arc<SpinSystem>) -> Result<Homo, Error> {
    let t = Arc::new(s.quotient(&a.source)?);
    stabilize(a, &t)
}

/// Inverse of a verified isomorphism, or the first target unit without a local preimage.
pub fn is_isomorphism(h: &Homo) -> Result<(bool, Option<Homo>), Error> {
    let n = h.source.len();
    if h.source.dims().iter().product::<usize>() != h.target.dims().iter().product::<usize>() {
        return Ok((false, None));
    }
    let supports: Vec<Vec<usize>> = (0..n).map(|x| h.site_support(x)).collect();
    let mut images = Vec::with_capacity(n);
    for y in 0..n {
        let r = h.target.q(y);
        if r == 1 {
            images.push(vec![Element::identity(h.source.clone(), h.field)]);
            continue;
        }
        let s: Vec<usize> = (0..n).filter(|&x| h.source.q(x) > 1 && supports[x].contains(&y)).collect();
        let rep = match Rep::new(h, &s, &[y]) {
            Ok(rep) => rep,
            Err(_) => return Ok((false, None)),
        };
        let pre = |i: usize, j: usize| -> Option<Element> {
            let t = Element::matrix_unit(h.target.clone(), h.field, y, i, j).unwrap().embed(&rep.window).unwrap();
            rep.preimage(&t.matrix()).map(|m| Element::new(h.source.clone(), s.clone(), m).unwrap().minimize_support())
        };
        let mut col = Vec::with_capacity(r);
        let mut row = Vec::with_capacity(r);
        for i in 0..r {
            let (Some(a), Some(b)) = (pre(i, 0), pre(0, i)) else { return Ok((false, None)) };
            col.push(a);
            row.push(b);
        }
        let mut list = Vec::with_capacity(r * r);
        for i in 0..r {
            for j in 0..r {
                list.push(col[i].mul(&row[j])?.minimize_support());
            }
        }
        images.push(list);
    }
    let inv = Homo::new(h.target.clone(), h.source.clone(), h.field, images)?;
    Ok((true, Some(inv)))
}

/// An elementary factor `1 + λ e_ij` with `i ≠ j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Elementary {
    pub i: usize,
    pub j: usize,
    pub lambda: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GateKind {
    /// Images of the block units `E_IJ` (flat index `I·D + J`); realised as inner.
    General(Vec<Mat>),
    Inner(Mat),
    /// Inner by `g` with `det g = 1`.
    Special(Mat),
    /// Inner by an explicit product of elementary matrices.
    Elementary(Vec<Elementary>),
    /// Inner by the permutation matrix sending basis vector `k` to `perm[k]`.
    Permutation(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GateSpec {
    pub block: Vec<usize>,
    pub kind: GateKind,
}

impl GateSpec {
    pub fn inner(block: Vec<usize>, g: Mat) -> GateSpec {
        GateSpec { block, kind: GateKind::Inner(g) }
    }
}

pub fn permutation_matrix(field: Field, perm: &[usize]) -> Result<Mat, Error> {
    let n = perm.len();
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::Gate("not a permutation".into()));
        }
        seen[p] = true;
    }
    let mut m = Mat::zeros(field, n, n);
    for (k, &p) in perm.iter().enumerate() {
        m.set(p, k, field.one());
    }
    Ok(m)
}

pub fn elementary_product(field: Field, n: usize, factors: &[Elementary]) -> Result<Mat, Error> {
    let mut g = Mat::identity(field, n);
    for e in factors {
        if e.i == e.j || e.i >= n || e.j >= n {
            return Err(Error::Gate(format!("invalid elementary factor ({}, {})", e.i, e.j)));
        }
        let mut m = Mat::identity(field, n);
        m.set(e.i, e.j, e.lambda.clone());
        g = g.mul(&m);
    }
    Ok(g)
}

/// Solves `g E_IJ = φ(E_IJ) g` for a conjugating matrix.
pub fn skolem_noether(field: Field, images: &[Mat]) -> Result<Mat, Error> {
    let d2 = images.len();
    let d = crate::exactalg::exact_sqrt(d2 as u128).ok_or_else(|| Error::Gate("automorphism table has non-square length".into()))? as usize;
    let mut eqs: Vec<Vec<Scalar>> = Vec::new();
    let idx: Vec<(usize, usize)> = (0..d).flat_map(|i| [(i, 0), (0, i)]).collect();
    for &(i, j) in &idx {
        let e = Mat::unit(field, d, i, j);
        let phi = &images[i * d + j];
        for r in 0..d {
            for c in 0..d {
                let mut row = vec![field.zero(); d * d];
                for k in 0..d {
                    let a = e.get(k, c);
                    if !a.is_zero() {
                        row[r * d + k] = &row[r * d + k] + a;
                    }
                    let b = phi.get(r, k);
                    if !b.is_zero() {
                        row[k * d + c] = &row[k * d + c] - b;
                    }
                }
                eqs.push(row);
            }
        }
    }
    let m = Mat::from_rows(field, eqs)?;
    let ns = m.nullspace();
    if ns.len() != 1 {
        return Err(Error::Gate(format!("conjugator space has dimension {}", ns.len())));
    }
    let g = Mat::from_vec(field, d, d, ns[0].clone())?;
    let gi = g.inverse().ok_or_else(|| Error::Gate("table is not an automorphism".into()))?;
    for i in 0..d {
        for j in 0..d {
            if g.mul(&Mat::unit(field, d, i, j)).mul(&gi) != images[i * d + j] {
                return Err(Error::Gate("table is not an automorphism".into()));
            }
        }
    }
    Ok(g)
}

/// The conjugating matrix of a gate after validating its kind.
pub fn gate_matrix(sys: &SpinSystem, field: Field, spec: &GateSpec) -> Result<Mat, Error> {
    let d = sys.dim(&spec.block);
    let g = match &spec.kind {
        GateKind::General(table) => {
            if table.len() != d * d || table.iter().any(|m| m.rows() != d || m.cols() != d) {
                return Err(Error::Gate("automorphism table has the wrong shape".into()));
            }
            skolem_noether(field, table)?
        }
        GateKind::Inner(g) => g.clone(),
        GateKind::Special(g) => {
            if !g.is_square() || !g.det_ff()?.is_one() {
                return Err(Error::Gate("special gate needs det = 1".into()));
            }
            g.clone()
        }
        GateKind::Elementary(fs) => elementary_product(field, d, fs)?,
        GateKind::Permutation(p) => permutation_matrix(field, p)?,
    };
    if g.rows() != d || g.cols() != d {
        return Err(Error::Gate(format!("gate of size {} on a block of dimension {d}", g.rows())));
    }
    if g.field() != field {
        return Err(Error::FieldMismatch(field, g.field()));
    }
    if g.det_ff()?.is_zero() {
        return Err(Error::Gate("gate is not invertible".into()));
    }
    Ok(g)
}

/// One layer of gates acting on disjoint blocks; uncovered sites are left alone.
pub fn circuit_single_layer(sys: &Arc<SpinSystem>, field: Field, layer: &[GateSpec]) -> Result<Homo, Error> {
    let n = sys.len();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut gates = Vec::with_capacity(layer.len());
    for (k, spec) in layer.iter().enumerate() {
        let mut block = spec.block.clone();
        block.sort_unstable();
        if block.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Gate("repeated site in a block".into()));
        }
        for &x in &block {
            if x >= n {
                return Err(Error::Gate(format!("site {x} outside the space")));
            }
            if owner[x].is_some() {
                return Err(Error::Gate(format!("blocks overlap at site {x}")));
            }
            owner[x] = Some(k);
        }
        let spec = GateSpec { block: block.clone(), kind: spec.kind.clone() };
        let g = gate_matrix(sys, field, &spec)?;
        let gi = g.inverse().unwrap();
        gates.push((block, g, gi));
    }
    let mut images = Vec::with_capacity(n);
    for x in 0..n {
        let q = sys.q(x);
        let list = match owner[x] {
            None => (0..q * q).map(|k| Element::matrix_unit(sys.clone(), field, x, k / q, k % q).unwrap()).collect(),
            Some(k) => {
                let (block, g, gi) = &gates[k];
                (0..q * q)
                    .map(|u| {
                        let e = Element::matrix_unit(sys.clone(), field, x, u / q, u % q).unwrap().embed(block).unwrap();
                        Element::new(sys.clone(), block.clone(), g.mul(&e.matrix()).mul(gi)).unwrap()
                    })
                    .collect()
            }
        };
        images.push(list);
    }
    Homo::new(sys.clone(), sys.clone(), field, images)
}

/// The layer undoing `layer`.
pub fn inverse_layer(sys: &SpinSystem, field: Field, layer: &[GateSpec]) -> Result<Vec<GateSpec>, Error> {
    layer
        .iter()
        .map(|spec| {
            let g = gate_matrix(sys, field, spec)?;
            Ok(GateSpec { block: spec.block.clone(), kind: GateKind::Inner(g.inverse().unwrap()) })
        })
        .collect()
}

/// Composition of layers, first layer applied first.
pub fn circuit(sys: &Arc<SpinSystem>, field: Field, layers: &[Vec<GateSpec>]) -> Result<Homo, Error> {
    let mut h = Homo::identity(sys.clone(), field);
    for layer in layers {
        h = compose(&circuit_single_layer(sys, field, layer)?, &h)?;
    }
    Ok(h)
}

/// Exchanges the two Kronecker factors at every site: `A(q·r) → A(r·q)`.
pub fn swap_circuit(q: &Arc<SpinSystem>, r: &Arc<SpinSystem>, field: Field) -> Result<Homo, Error> {
    let src = Arc::new(stack_systems(q, r)?);
    let tgt = Arc::new(stack_systems(r, q)?);
    let mut images = Vec::with_capacity(src.len());
    for x in 0..src.len() {
        let (a, b) = (q.q(x), r.q(x));
        let d = a * b;
        let mut list = Vec::with_capacity(d * d);
        for k in 0..d * d {
            let (row, col) = (k / d, k % d);
            let (i, i2) = (row / b, row % b);
            let (j, j2) = (col / b, col % b);
            list.push(Element::matrix_unit(tgt.clone(), field, x, i2 * a + i, j2 * a + j)?);
        }
        images.push(list);
    }
    Homo::new(src, tgt, field, images)
}

/// The permutation matrix of the sitewise factor exchange `k^a ⊗ k^b → k^b ⊗ k^a`.
pub fn swap_matrix(field: Field, a: usize, b: usize) -> Mat {
    let perm: Vec<usize> = (0..a * b).map(|k| (k % b) * a + k / b).collect();
    permutation_matrix(field, &perm).unwrap()
}

/// Translation by `step` on a circle with uniform site dimension.
pub fn translation(sys: &Arc<SpinSystem>, field: Field, step: i64) -> Result<Homo, Error> {
    let n = match sys.space().kind() {
        crate::space::SpaceKind::Circle(n) => *n,
        _ => return Err(Error::Homo("translation needs a circle".into())),
    };
    let d = sys.q(0);
    if sys.dims().iter().any(|&q| q != d) {
        return Err(Error::Homo("translation needs a uniform system".into()));
    }
    let images = (0..n)
        .map(|x| {
            let y = (x as i64 + step).rem_euclid(n as i64) as usize;
            (0..d * d).map(|k| Element::matrix_unit(sys.clone(), field, y, k / d, k % d).unwrap()).collect()
        })
        .collect();
    Homo::new(sys.clone(), sys.clone(), field, images)
}

pub fn spread(h: &Homo) -> BigRational {
    h.spread.clone()
}

/// The spread as an integer, for spaces with integral distances.
pub fn integer_spread(h: &Homo) -> Option<usize> {
    let s = h.spread();
    s.is_integer().then(|| usize::try_from(s.to_integer()).ok()).flatten()
}

pub fn int_rat(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::MetricSpace;

    fn circle(n: usize, d: usize) -> Arc<SpinSystem> {
        Arc::new(SpinSystem::uniform(Arc::new(MetricSpace::circle(n).unwrap()), d).unwrap())
    }

    fn line(q: Vec<usize>) -> Arc<SpinSystem> {
        let n = q.len();
        Arc::new(SpinSystem::new(Arc::new(MetricSpace::interval(n).unwrap()), q).unwrap())
    }

    #[test]
    fn identity_and_translation() {
        let s = circle(8, 2);
        let f = Field::Fp(3);
        assert!(verify(&Homo::identity(s.clone(), f)).is_ok());
        let t = translation(&s, f, 1).unwrap();
        assert!(verify(&t).is_ok());
        assert_eq!(t.spread(), &int_rat(1));
        assert!(translation(&s, f, 0).unwrap().equals(&Homo::identity(s.clone(), f)).unwrap());
        assert!(translation(&s, f, 8).unwrap().equals(&Homo::identity(s.clone(), f)).unwrap());
        let t2 = compose(&t, &t).unwrap();
        assert!(t2.equals(&translation(&s, f, 2).unwrap()).unwrap());
        let e = Element::matrix_unit(s.clone(), f, 0, 0, 0).unwrap();
        let img = apply(&t, &e).unwrap();
        assert!(img.equals(&Element::matrix_unit(s.clone(), f, 1, 0, 0).unwrap()).unwrap());
    }

    #[test]
    fn non_unital_images_flagged() {
        let s = line(vec![2, 2]);
        let f = Field::Q;
        let id = Homo::identity(s.clone(), f);
        let bad = id.with_image(0, 3, Element::zero(s.clone(), f)).unwrap();
        assert!(verify(&bad).violations.iter().any(|v| v.contains("sum")));
    }

    #[test]
    fn inner_gate_layer() {
        let s = line(vec![2, 2, 2]);
        let f = Field::Fp(5);
        let g = Mat::from_ints(f, &[&[1, 1, 0, 0], &[0, 1, 0, 1], &[0, 0, 1, 0], &[1, 0, 0, 1]]);
        let h = circuit_single_layer(&s, f, &[GateSpec::inner(vec![0, 1], g.clone())]).unwrap();
        assert!(verify(&h).is_ok());
        assert!(h.spread() <= &int_rat(1));
        let (ok, inv) = is_isomorphism(&h).unwrap();
        assert!(ok);
        let back = compose(&inv.unwrap(), &h).unwrap();
        assert!(back.equals(&Homo::identity(s.clone(), f)).unwrap());
        let undo = circuit_single_layer(&s, f, &inverse_layer(&s, f, &[GateSpec::inner(vec![0, 1], g)]).unwrap()).unwrap();
        assert!(compose(&undo, &h).unwrap().equals(&Homo::identity(s, f)).unwrap());
    }

    #[test]
    fn embedding_is_not_surjective() {
        let q = line(vec![2, 2]);
        let t = line(vec![2, 2]);
        let f = Field::Q;
        let emb = stabilize(&Homo::identity(q.clone(), f), &t).unwrap();
        let qt = emb.target().clone();
        let images = (0..2)
            .map(|x| (0..4).map(|k| {
                let e = Element::matrix_unit(q.clone(), f, x, k / 2, k % 2).unwrap();
                phi_stack(&e, &Element::identity(t.clone(), f), &qt).unwrap()
            }).collect())
            .collect();
        let inc = Homo::new(q.clone(), qt, f, images).unwrap();
        assert!(verify(&inc).is_ok());
        assert!(!is_isomorphism(&inc).unwrap().0);
    }

    #[test]
    fn swap_is_involution() {
        let q = line(vec![2, 3]);
        let r = line(vec![3, 2]);
        let f = Field::Q;
        let s1 = swap_circuit(&q, &r, f).unwrap();
        let s2 = swap_circuit(&r, &q, f).unwrap();
        assert!(verify(&s1).is_ok());
        let back = compose(&s2, &s1).unwrap();
        assert!(back.equals(&Homo::identity(s1.source().clone(), f)).unwrap());
    }

    #[test]
    fn gate_kinds_validated() {
        let s = line(vec![2]);
        let f = Field::Q;
        let g = Mat::from_ints(f, &[&[2, 0], &[0, 1]]);
        assert!(circuit_single_layer(&s, f, &[GateSpec { block: vec![0], kind: GateKind::Special(g.clone()) }]).is_err());
        assert!(circuit_single_layer(&s, f, &[GateSpec::inner(vec![0], Mat::zeros(f, 2, 2))]).is_err());
        let table: Vec<Mat> = (0..4).map(|k| {
            let e = Mat::unit(f, 2, k / 2, k % 2);
            g.mul(&e).mul(&g.inverse().unwrap())
        }).collect();
        let gen = circuit_single_layer(&s, f, &[GateSpec { block: vec![0], kind: GateKind::General(table) }]).unwrap();
        let inner = circuit_single_layer(&s, f, &[GateSpec::inner(vec![0], g)]).unwrap();
        assert!(gen.equals(&inner).unwrap());
        let two = line(vec![2, 2]);
        assert!(circuit_single_layer(&two, f, &[GateSpec::inner(vec![0, 1], Mat::identity(f, 4)), GateSpec::inner(vec![1], Mat::identity(f, 2))]).is_err());
    }
}
