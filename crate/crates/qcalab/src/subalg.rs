//! Unital subalgebras of a windowed observable algebra.
//!
//! A [`Subalgebra`] is stored as a tensor product of factors over disjoint
//! groups of window sites. Generated subalgebras have a single factor;
//! commutants split into one factor per cluster of sites linked by the
//! constraints, which keeps large windows tractable.

use std::sync::Arc;

use crate::exactalg::{Field, Mat, Scalar, Subspace};
use crate::spin::{union, Element, SpinSystem};
use crate::Error;

/// One tensor factor: a subspace of `Mat(q(sites))`, vectorised row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub sites: Vec<usize>,
    pub space: Subspace,
}

#[derive(Clone, Debug)]
pub struct Subalgebra {
    sys: Arc<SpinSystem>,
    field: Field,
    window: Vec<usize>,
    factors: Vec<Factor>,
}

fn vectorize(a: &Element, support: &[usize]) -> Result<Vec<Scalar>, Error> {
    Ok(a.embed(support)?.dense_data())
}

fn devectorize(sys: &Arc<SpinSystem>, field: Field, support: &[usize], v: &[Scalar]) -> Element {
    let d = sys.dim(support);
    Element::new(sys.clone(), support.to_vec(), Mat::from_vec(field, d, d, v.to_vec()).unwrap()).unwrap()
}

fn check_window(window: &[usize]) -> Result<(), Error> {
    if window.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Support("window must be strictly ascending".into()));
    }
    Ok(())
}

impl Subalgebra {
    /// A single-factor subalgebra spanned by `elems`; closure is not checked.
    pub fn from_span(sys: Arc<SpinSystem>, field: Field, window: &[usize], elems: &[Element]) -> Result<Subalgebra, Error> {
        check_window(window)?;
        let d = sys.dim(window);
        let vecs = elems.iter().map(|e| vectorize(e, window)).collect::<Result<Vec<_>, _>>()?;
        let space = Subspace::span(field, d * d, &vecs);
        Ok(Subalgebra { sys, field, window: window.to_vec(), factors: vec![Factor { sites: window.to_vec(), space }] })
    }

    /// The full algebra `A(window)`, one factor per site.
    pub fn full(sys: Arc<SpinSystem>, field: Field, window: &[usize]) -> Result<Subalgebra, Error> {
        check_window(window)?;
        let factors = window
            .iter()
            .map(|&x| Factor { sites: vec![x], space: Subspace::full(field, sys.q(x) * sys.q(x)) })
            .collect();
        Ok(Subalgebra { sys, field, window: window.to_vec(), factors })
    }

    pub fn scalars(sys: Arc<SpinSystem>, field: Field, window: &[usize]) -> Result<Subalgebra, Error> {
        let one = Element::identity(sys.clone(), field);
        Subalgebra::from_span(sys, field, window, &[one])
    }

    pub fn system(&self) -> &Arc<SpinSystem> {
        &self.sys
    }
    pub fn field(&self) -> Field {
        self.field
    }
    pub fn window(&self) -> &[usize] {
        &self.window
    }
    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Dimension as a vector space.
    pub fn dim(&self) -> u128 {
        self.factors.iter().map(|f| f.space.rank() as u128).product()
    }

    /// Dimension of the ambient window algebra.
    pub fn window_dim(&self) -> u128 {
        let d = self.sys.dim(&self.window) as u128;
        d * d
    }

    /// Basis elements of one factor, supported on its sites.
    pub fn factor_basis(&self, k: usize) -> Vec<Element> {
        let f = &self.factors[k];
        f.space.vectors().iter().map(|v| devectorize(&self.sys, self.field, &f.sites, v)).collect()
    }

    /// Every product basis element, embedded in the window.
    pub fn basis(&self) -> Vec<Element> {
        let mut acc = vec![Element::identity(self.sys.clone(), self.field)];
        for k in 0..self.factors.len() {
            let fb = self.factor_basis(k);
            let mut next = Vec::with_capacity(acc.len() * fb.len());
            for a in &acc {
                for b in &fb {
                    next.push(a.mul(b).unwrap());
                }
            }
            acc = next;
        }
        acc.into_iter().map(|a| a.embed(&self.window).unwrap()).collect()
    }

    /// The same subalgebra as a single factor over the whole window.
    pub fn flatten(&self) -> Subalgebra {
        if self.factors.len() == 1 && self.factors[0].sites == self.window {
            return self.clone();
        }
        Subalgebra::from_span(self.sys.clone(), self.field, &self.window, &self.basis()).unwrap()
    }

    /// Membership test; the element may carry legs outside the window only as identities.
    pub fn contains(&self, a: &Element) -> Result<bool, Error> {
        let a = a.minimize_support();
        if a.support().iter().any(|x| !self.window.contains(x)) {
            return Ok(false);
        }
        let a = a.embed(&self.window)?;
        self.contains_with_outside(&a, &[])
    }

    /// Whether `a` lies in `A(outside) ⊗ self`, where `outside` is disjoint from the window.
    pub fn contains_with_outside(&self, a: &Element, outside: &[usize]) -> Result<bool, Error> {
        if a.support().iter().any(|x| !self.window.contains(x) && !outside.contains(x)) {
            return Ok(false);
        }
        for f in &self.factors {
            let others: Vec<usize> = a.support().iter().copied().filter(|x| !f.sites.contains(x)).collect();
            let blocks = if others.is_empty() { vec![a.clone()] } else { a.split_legs(&others).into_iter().map(|b| b.2).collect() };
            for blk in blocks {
                let v = vectorize(&blk, &f.sites)?;
                if !f.space.contains(&v) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn equals(&self, o: &Subalgebra) -> Result<bool, Error> {
        if self.window != o.window {
            return Ok(false);
        }
        if self.dim() != o.dim() {
            return Ok(false);
        }
        if self.factors == o.factors {
            return Ok(true);
        }
        Ok(self.flatten().factors[0].space == o.flatten().factors[0].space)
    }

    /// Whether every basis element of `self` lies in `o`.
    pub fn is_subalgebra_of(&self, o: &Subalgebra) -> Result<bool, Error> {
        for b in self.basis() {
            if !o.contains(&b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Center: elements of the subalgebra commuting with all of it.
    pub fn center(&self) -> Result<Subalgebra, Error> {
        let mut factors = Vec::with_capacity(self.factors.len());
        for (k, f) in self.factors.iter().enumerate() {
            let basis = self.factor_basis(k);
            let dsq = self.sys.dim(&f.sites).pow(2);
            let z = solve_commuting_combinations(&basis, &basis, &f.sites)?;
            let vecs = z.iter().map(|e| vectorize(e, &f.sites)).collect::<Result<Vec<_>, _>>()?;
            factors.push(Factor { sites: f.sites.clone(), space: Subspace::span(self.field, dsq, &vecs) });
        }
        Ok(Subalgebra { sys: self.sys.clone(), field: self.field, window: self.window.clone(), factors })
    }

    /// Trivial center and square dimension.
    pub fn is_central_simple(&self) -> Result<bool, Error> {
        Ok(self.center()?.dim() == 1 && crate::exactalg::exact_sqrt(self.dim()).is_some())
    }

    /// Structure constants `b_i b_j = Σ_k c_ijk b_k` in the flattened basis.
    pub fn structure_constants(&self) -> Result<Vec<Vec<Vec<Scalar>>>, Error> {
        let flat = self.flatten();
        let space = &flat.factors[0].space;
        let basis = flat.basis();
        let mut out = Vec::with_capacity(basis.len());
        for a in &basis {
            let mut row = Vec::with_capacity(basis.len());
            for b in &basis {
                let v = vectorize(&a.mul(b)?, &self.window)?;
                row.push(space.coordinates(&v).ok_or_else(|| Error::Subalgebra("not closed under multiplication".into()))?);
            }
            out.push(row);
        }
        Ok(out)
    }
}

/// Combinations of `cands` commuting with every element of `ops`, all on `support`.
fn solve_commuting_combinations(cands: &[Element], ops: &[Element], support: &[usize]) -> Result<Vec<Element>, Error> {
    let mut cur: Vec<Element> = cands.iter().map(|c| c.embed(support)).collect::<Result<_, _>>()?;
    for op in ops {
        if cur.is_empty() {
            break;
        }
        let op = op.embed(support)?;
        let field = op.field();
        let d = op.dim();
        let k = cur.len();
        let mut m = Mat::zeros(field, d * d, k);
        let mut any = false;
        for (c, x) in cur.iter().enumerate() {
            for (&(i, j), v) in x.commutator(&op)?.entries() {
                m.set(i * d + j, c, v.clone());
                any = true;
            }
        }
        if !any {
            continue;
        }
        let ns = m.nullspace();
        cur = ns
            .iter()
            .map(|coef| {
                let mut acc = Element::zero(op.system().clone(), field).embed(support).unwrap();
                for (c, x) in coef.iter().zip(&cur) {
                    if !c.is_zero() {
                        acc = acc.add(&x.scale(c)).unwrap();
                    }
                }
                acc
            })
            .collect();
    }
    Ok(cur)
}

/// Smallest unital subalgebra of `A(window)` containing `gens`.
pub fn generate(sys: Arc<SpinSystem>, field: Field, gens: &[Element], window: &[usize]) -> Result<Subalgebra, Error> {
    check_window(window)?;
    let d = sys.dim(window);
    let gens: Vec<Element> = gens.iter().map(|g| g.embed(window)).collect::<Result<_, _>>()?;
    let mut elems = vec![Element::identity(sys.clone(), field).embed(window)?];
    elems.extend(gens.iter().cloned());
    let mut space = Subspace::span(field, d * d, &elems.iter().map(|e| e.dense_data()).collect::<Vec<_>>());
    let cap = d * d;
    for _ in 0..cap {
        let basis: Vec<Element> = space.vectors().iter().map(|v| devectorize(&sys, field, window, v)).collect();
        let mut vecs = space.vectors();
        for b in &basis {
            for g in &gens {
                vecs.push(b.mul(g)?.dense_data());
            }
        }
        let next = Subspace::span(field, d * d, &vecs);
        if next.rank() == space.rank() {
            return Ok(Subalgebra { sys, field, window: window.to_vec(), factors: vec![Factor { sites: window.to_vec(), space }] });
        }
        space = next;
    }
    Err(Error::Subalgebra(format!("closure did not stabilise within {cap} rounds")))
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let r = self.find(self.0[x]);
            self.0[x] = r;
        }
        self.0[x]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Elements of `A(window)` commuting with every operator in `ops`.
///
/// Operators may reach outside the window; their outside legs are expanded
/// in matrix units and each coefficient becomes a constraint on the window.
pub fn commutant(sys: Arc<SpinSystem>, field: Field, ops: &[Element], window: &[usize]) -> Result<Subalgebra, Error> {
    check_window(window)?;
    let mut reduced: Vec<Element> = Vec::new();
    for op in ops {
        let op = op.minimize_support();
        let outside: Vec<usize> = op.support().iter().copied().filter(|x| !window.contains(x)).collect();
        let pieces = if outside.is_empty() { vec![op] } else { op.split_legs(&outside).into_iter().map(|b| b.2).collect() };
        for p in pieces {
            let p = p.minimize_support();
            if !p.support().is_empty() {
                reduced.push(p);
            }
        }
    }
    let reduced = dedupe_spans(&sys, field, reduced);

    let pos = |x: usize| window.iter().position(|&w| w == x).unwrap();
    let mut uf = UnionFind((0..window.len()).collect());
    for op in &reduced {
        let s = op.support();
        for w in s.windows(2) {
            uf.union(pos(w[0]), pos(w[1]));
        }
    }
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; window.len()];
    for (i, &x) in window.iter().enumerate() {
        let r = uf.find(i);
        match root_of[r] {
            Some(c) => clusters[c].push(x),
            None => {
                root_of[r] = Some(clusters.len());
                clusters.push(vec![x]);
            }
        }
    }

    let mut factors = Vec::with_capacity(clusters.len());
    for cl in clusters {
        let mine: Vec<&Element> = reduced.iter().filter(|op| op.support().iter().all(|x| cl.contains(x))).collect();
        let mut site_bases: Vec<Vec<Element>> = Vec::with_capacity(cl.len());
        for &x in &cl {
            let single: Vec<Element> = mine.iter().filter(|op| op.support() == [x]).map(|op| (*op).clone()).collect();
            let q = sys.q(x);
            let units: Vec<Element> = (0..q * q).map(|k| Element::unit_on(sys.clone(), field, vec![x], k / q, k % q)).collect();
            site_bases.push(if single.is_empty() { units } else { solve_commuting_combinations(&units, &single, &[x])? });
        }
        let dsq = sys.dim(&cl).pow(2);
        let space = if cl.len() == 1 {
            let vecs = site_bases[0].iter().map(|e| vectorize(e, &cl)).collect::<Result<Vec<_>, _>>()?;
            Subspace::span(field, dsq, &vecs)
        } else {
            let mut cands = vec![Element::identity(sys.clone(), field)];
            for sb in &site_bases {
                let mut next = Vec::with_capacity(cands.len() * sb.len());
                for a in &cands {
                    for b in sb {
                        next.push(a.mul(b)?);
                    }
                }
                cands = next;
            }
            let mut multi: Vec<Element> = mine.iter().filter(|op| op.support().len() > 1).map(|op| (*op).clone()).collect();
            multi.sort_by_key(|op| op.support().len());
            let sol = solve_commuting_combinations(&cands, &multi, &cl)?;
            let vecs = sol.iter().map(|e| vectorize(e, &cl)).collect::<Result<Vec<_>, _>>()?;
            Subspace::span(field, dsq, &vecs)
        };
        factors.push(Factor { sites: cl, space });
    }
    Ok(Subalgebra { sys, field, window: window.to_vec(), factors })
}

/// Replaces operators sharing a support by a basis of their span.
fn dedupe_spans(sys: &Arc<SpinSystem>, field: Field, ops: Vec<Element>) -> Vec<Element> {
    let mut groups: Vec<(Vec<usize>, Vec<Vec<Scalar>>)> = Vec::new();
    for op in ops {
        let v = op.matrix().data().to_vec();
        match groups.iter_mut().find(|g| g.0 == op.support()) {
            Some(g) => g.1.push(v),
            None => groups.push((op.support().to_vec(), vec![v])),
        }
    }
    let mut out = Vec::new();
    for (s, vecs) in groups {
        let d = sys.dim(&s);
        for v in Subspace::span(field, d * d, &vecs).vectors() {
            out.push(devectorize(sys, field, &s, &v));
        }
    }
    out
}

/// `C = {a ∈ A(window) : ab = ba for all b ∈ B}`.
pub fn centralizer(b: &Subalgebra) -> Result<Subalgebra, Error> {
    let mut factors = Vec::with_capacity(b.factors.len());
    for k in 0..b.factors.len() {
        let sites = &b.factors[k].sites;
        let c = commutant(b.sys.clone(), b.field, &b.factor_basis(k), sites)?.flatten();
        factors.push(Factor { sites: sites.clone(), space: c.factors[0].space.clone() });
    }
    Ok(Subalgebra { sys: b.sys.clone(), field: b.field, window: b.window.clone(), factors })
}

/// `D = {c ∈ A(c_sites) : 1 ⊗ c ∈ B}` together with the factorisation check.
#[derive(Clone, Debug)]
pub struct TensorSplit {
    pub d: Subalgebra,
    pub dims_match: bool,
    pub contains_products: bool,
}

pub fn tensor_split(b: &Subalgebra, a_sites: &[usize], c_sites: &[usize]) -> Result<TensorSplit, Error> {
    let mut win = union(a_sites, c_sites);
    win.dedup();
    if win != b.window || a_sites.iter().any(|x| c_sites.contains(x)) {
        return Err(Error::Subalgebra("split must partition the window".into()));
    }
    let sys = b.sys.clone();
    let f = b.field;
    for &x in a_sites {
        let q = sys.q(x);
        for k in 0..q * q {
            let e = Element::unit_on(sys.clone(), f, vec![x], k / q, k % q);
            if !b.contains(&e)? {
                return Err(Error::Subalgebra(format!("A-part unit at site {x} is not in B")));
            }
        }
    }
    let flat = b.flatten();
    let dc = sys.dim(c_sites);
    let units: Vec<Element> = (0..dc * dc).map(|k| Element::unit_on(sys.clone(), f, c_sites.to_vec(), k / dc, k % dc)).collect();
    let w = sys.dim(&b.window);
    let emb = units.iter().map(|u| vectorize(u, &b.window)).collect::<Result<Vec<_>, _>>()?;
    let img = Subspace::span(f, w * w, &emb);
    let inter = img.intersect(&flat.factors[0].space)?;
    let d_elems: Vec<Element> = inter
        .vectors()
        .iter()
        .map(|v| {
            let e = devectorize(&sys, f, &b.window, v);
            e.split_legs(a_sites).into_iter().find(|t| t.0 == 0 && t.1 == 0).map(|t| t.2).unwrap()
        })
        .collect();
    let d = Subalgebra::from_span(sys.clone(), f, c_sites, &d_elems)?;
    let da = sys.dim(a_sites) as u128;
    let dims_match = b.dim() == da * da * d.dim();
    let mut contains_products = true;
    'outer: for x in d.basis() {
        for &s in a_sites {
            let q = sys.q(s);
            for k in 0..q * q {
                let e = Element::unit_on(sys.clone(), f, vec![s], k / q, k % q);
                if !b.contains(&e.mul(&x)?)? {
                    contains_products = false;
                    break 'outer;
                }
            }
        }
    }
    Ok(TensorSplit { d, dims_match, contains_products })
}

/// The four checks that `B` and `C` are mutual tensor factors of the window algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorPairCertificate {
    pub commute: bool,
    pub dims_multiply: bool,
    pub multiplication_full_rank: bool,
    pub trivial_intersection: bool,
}

impl TensorPairCertificate {
    pub fn passed(&self) -> bool {
        self.commute && self.dims_multiply && self.multiplication_full_rank && self.trivial_intersection
    }
}

fn pair_checks(sys: &Arc<SpinSystem>, field: Field, sites: &[usize], b: &[Element], c: &[Element], bs: &Subspace, cs: &Subspace) -> Result<TensorPairCertificate, Error> {
    let mut commute = true;
    'outer: for x in b {
        for y in c {
            if !x.commutes(y)? {
                commute = false;
                break 'outer;
            }
        }
    }
    let d = sys.dim(sites);
    let dims_multiply = b.len() * c.len() == d * d;
    let multiplication_full_rank = if dims_multiply {
        let mut vecs = Vec::with_capacity(b.len() * c.len());
        for x in b {
            for y in c {
                vecs.push(vectorize(&x.mul(y)?, sites)?);
            }
        }
        Subspace::span(field, d * d, &vecs).rank() == d * d
    } else {
        false
    };
    let inter = bs.intersect(cs)?;
    let one = vectorize(&Element::identity(sys.clone(), field), sites)?;
    let trivial_intersection = inter.rank() == 1 && inter.contains(&one);
    Ok(TensorPairCertificate { commute, dims_multiply, multiplication_full_rank, trivial_intersection })
}

pub fn verify_tensor_pair(b: &Subalgebra, c: &Subalgebra) -> Result<TensorPairCertificate, Error> {
    if b.window != c.window || b.field != c.field {
        return Err(Error::Subalgebra("subalgebras live in different windows".into()));
    }
    let same_shape = b.factors.len() == c.factors.len() && b.factors.iter().zip(&c.factors).all(|(x, y)| x.sites == y.sites);
    let (b, c) = if same_shape { (b.clone(), c.clone()) } else { (b.flatten(), c.flatten()) };
    let mut cert = TensorPairCertificate { commute: true, dims_multiply: true, multiplication_full_rank: true, trivial_intersection: true };
    for k in 0..b.factors.len() {
        let sites = &b.factors[k].sites;
        let part = pair_checks(&b.sys, b.field, sites, &b.factor_basis(k), &c.factor_basis(k), &b.factors[k].space, &c.factors[k].space)?;
        cert.commute &= part.commute;
        cert.dims_multiply &= part.dims_multiply;
        cert.multiplication_full_rank &= part.multiplication_full_rank;
        cert.trivial_intersection &= part.trivial_intersection;
    }
    Ok(cert)
}
