//! Coarse chains with prime-indexed integer coefficients.
//!
//! Degree chains of spin systems, boundaries, the `l`-homologous decision with
//! tree-flow certificates, and homology of the full chain complex of a finite space.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::exactalg::Field;
use crate::qca::{int_rat, Homo};
use crate::shiftnorm::{prime_factors, shift_from_moves, LegMove, PrimeLegs};
use crate::space::MetricSpace;
use crate::spin::SpinSystem;
use crate::Error;

/// A finitely supported map prime → integer with no zero entries.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimeVector(BTreeMap<u64, i64>);

impl PrimeVector {
    pub fn zero() -> PrimeVector {
        PrimeVector::default()
    }

    pub fn single(p: u64, n: i64) -> PrimeVector {
        let mut v = PrimeVector::zero();
        v.add_at(p, n);
        v
    }

    /// `(v_p(n))_p`.
    pub fn of(n: u64) -> PrimeVector {
        let mut v = PrimeVector::zero();
        for p in prime_factors(n) {
            v.add_at(p, 1);
        }
        v
    }

    pub fn get(&self, p: u64) -> i64 {
        self.0.get(&p).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> &BTreeMap<u64, i64> {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_at(&mut self, p: u64, n: i64) {
        let e = self.0.entry(p).or_insert(0);
        *e += n;
        if *e == 0 {
            self.0.remove(&p);
        }
    }

    pub fn add(&self, o: &PrimeVector) -> PrimeVector {
        let mut r = self.clone();
        for (&p, &n) in &o.0 {
            r.add_at(p, n);
        }
        r
    }

    pub fn neg(&self) -> PrimeVector {
        PrimeVector(self.0.iter().map(|(&p, &n)| (p, -n)).collect())
    }

    pub fn sub(&self, o: &PrimeVector) -> PrimeVector {
        self.add(&o.neg())
    }
}

/// A finitely supported map site → prime vector.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Chain0(BTreeMap<usize, PrimeVector>);

impl Chain0 {
    pub fn zero() -> Chain0 {
        Chain0::default()
    }

    pub fn get(&self, x: usize) -> PrimeVector {
        self.0.get(&x).cloned().unwrap_or_default()
    }

    pub fn entries(&self) -> &BTreeMap<usize, PrimeVector> {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_at(&mut self, x: usize, v: &PrimeVector) {
        let e = self.0.entry(x).or_default();
        *e = e.add(v);
        if e.is_zero() {
            self.0.remove(&x);
        }
    }

    pub fn add(&self, o: &Chain0) -> Chain0 {
        let mut r = self.clone();
        for (&x, v) in &o.0 {
            r.add_at(x, v);
        }
        r
    }

    pub fn sub(&self, o: &Chain0) -> Chain0 {
        let mut r = self.clone();
        for (&x, v) in &o.0 {
            r.add_at(x, &v.neg());
        }
        r
    }

    pub fn primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self.0.values().flat_map(|v| v.0.keys().copied()).collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }

    /// Σ_x of the coefficients.
    pub fn total(&self) -> PrimeVector {
        self.0.values().fold(PrimeVector::zero(), |acc, v| acc.add(v))
    }
}

/// A 1-chain of ordered pairs, each within distance `2l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain1 {
    bound: BigRational,
    terms: BTreeMap<(usize, usize), PrimeVector>,
}

impl Chain1 {
    pub fn new(bound: BigRational) -> Chain1 {
        Chain1 { bound, terms: BTreeMap::new() }
    }

    pub fn bound(&self) -> &BigRational {
        &self.bound
    }

    pub fn terms(&self) -> &BTreeMap<(usize, usize), PrimeVector> {
        &self.terms
    }

    /// Adds `v·[x0, x1]`; the pair must satisfy `d(x0, x1) ≤ 2l`.
    pub fn add_term(&mut self, space: &MetricSpace, x0: usize, x1: usize, v: &PrimeVector) -> Result<(), Error> {
        if space.d(x0, x1) > &(&self.bound * int_rat(2)) {
            return Err(Error::Chain(format!("pair ({x0},{x1}) exceeds the bound 2·{}", self.bound)));
        }
        let e = self.terms.entry((x0, x1)).or_default();
        *e = e.add(v);
        if e.is_zero() {
            self.terms.remove(&(x0, x1));
        }
        Ok(())
    }

    /// Whether every stored pair is within `2l` in `space`.
    pub fn respects_bound(&self, space: &MetricSpace) -> bool {
        let b = &self.bound * int_rat(2);
        self.terms.keys().all(|&(x, y)| space.d(x, y) <= &b)
    }
}

/// `deg(q)`: site `x` carries `(v_p(q_x))_p`.
pub fn deg(q: &SpinSystem) -> Chain0 {
    let mut c = Chain0::zero();
    for (x, &d) in q.dims().iter().enumerate() {
        c.add_at(x, &PrimeVector::of(d as u64));
    }
    c
}

/// `∂[x0, x1] = [x1] − [x0]`.
pub fn boundary(c: &Chain1) -> Chain0 {
    let mut out = Chain0::zero();
    for (&(x0, x1), v) in &c.terms {
        out.add_at(x1, v);
        out.add_at(x0, &v.neg());
    }
    out
}

/// The total degree: the class of `q` in `CH₀` of a bounded space.
pub fn ch0_bounded(q: &SpinSystem) -> PrimeVector {
    deg(q).total()
}

/// Connected components of the graph joining sites at distance `≤ l`, ascending.
pub fn threshold_components(space: &MetricSpace, l: &BigRational) -> Vec<Vec<usize>> {
    let n = space.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if !seen[v] && space.d(u, v) <= l {
                    seen[v] = true;
                    comp.push(v);
                    queue.push_back(v);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// A prime and a component of the threshold graph on which the two sums differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    pub prime: u64,
    pub component: Vec<usize>,
    pub sum_a: i64,
    pub sum_b: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Homology {
    /// A 1-chain `c` with `∂c = a − b`.
    Homologous(Chain1),
    NotHomologous(Obstruction),
}

impl Homology {
    pub fn holds(&self) -> bool {
        matches!(self, Homology::Homologous(_))
    }
}

/// Decides whether `a − b` bounds a 1-chain with bound `l`, with a certificate either way.
pub fn l_homologous(space: &MetricSpace, a: &Chain0, b: &Chain0, l: &BigRational) -> Result<Homology, Error> {
    if let Some(&x) = a.0.keys().chain(b.0.keys()).find(|&&x| x >= space.len()) {
        return Err(Error::Chain(format!("site {x} outside the space")));
    }
    let delta = a.sub(b);
    let comps = threshold_components(space, l);
    let mut primes = a.primes();
    primes.extend(b.primes());
    primes.sort_unstable();
    primes.dedup();
    for p in &primes {
        for comp in &comps {
            let sa: i64 = comp.iter().map(|&x| a.get(x).get(*p)).sum();
            let sb: i64 = comp.iter().map(|&x| b.get(x).get(*p)).sum();
            if sa != sb {
                return Ok(Homology::NotHomologous(Obstruction { prime: *p, component: comp.clone(), sum_a: sa, sum_b: sb }));
            }
        }
    }
    let mut cert = Chain1::new(l.clone());
    for comp in &comps {
        let root = comp[0];
        let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
        let mut order = vec![root];
        let mut queue = VecDeque::from([root]);
        let mut seen = BTreeMap::from([(root, ())]);
        while let Some(u) = queue.pop_front() {
            for &v in comp {
                if !seen.contains_key(&v) && space.d(u, v) <= l {
                    seen.insert(v, ());
                    parent.insert(v, u);
                    order.push(v);
                    queue.push_back(v);
                }
            }
        }
        let mut subtree: BTreeMap<usize, PrimeVector> = comp.iter().map(|&x| (x, delta.get(x))).collect();
        for &v in order.iter().rev() {
            if let Some(&u) = parent.get(&v) {
                let s = subtree[&v].clone();
                if !s.is_zero() {
                    cert.add_term(space, u, v, &s)?;
                }
                let su = subtree.get_mut(&u).unwrap();
                *su = su.add(&s);
            }
        }
    }
    debug_assert_eq!(boundary(&cert), delta);
    Ok(Homology::Homologous(cert))
}

/// A shift of spread `≤ l` carrying `q` to `r`, found as an integral transport of prime legs
/// along pairs at distance `≤ l`; `None` when no such transport exists.
pub fn transport_shift(q: &Arc<SpinSystem>, r: &Arc<SpinSystem>, l: &BigRational, field: Field) -> Result<Option<Homo>, Error> {
    if !q.same_space(r) {
        return Err(Error::Chain("systems on different spaces".into()));
    }
    let space = q.space().clone();
    let n = space.len();
    let (ql, rl) = (PrimeLegs::of(q), PrimeLegs::of(r));
    let mut primes = ql.primes();
    primes.extend(rl.primes());
    primes.sort_unstable();
    primes.dedup();
    let mut moves = Vec::new();
    for p in primes {
        let src: Vec<(usize, usize)> = (0..n).flat_map(|x| ql.legs[x].iter().enumerate().filter(|l| *l.1 == p).map(move |(k, _)| (x, k))).collect();
        let dst: Vec<(usize, usize)> = (0..n).flat_map(|y| rl.legs[y].iter().enumerate().filter(|l| *l.1 == p).map(move |(t, _)| (y, t))).collect();
        if src.len() != dst.len() {
            return Ok(None);
        }
        let adj: Vec<Vec<usize>> = src.iter().map(|&(x, _)| (0..dst.len()).filter(|&j| space.d(x, dst[j].0) <= l).collect()).collect();
        let Some(matching) = bipartite_matching(&adj, dst.len()) else { return Ok(None) };
        for (i, j) in matching.into_iter().enumerate() {
            moves.push(LegMove { prime: p, from_site: src[i].0, from_leg: src[i].1, to_site: dst[j].0, to_leg: dst[j].1 });
        }
    }
    Ok(Some(shift_from_moves(q, r, field, &moves)?))
}

/// A perfect matching of the left side, by augmenting paths.
fn bipartite_matching(adj: &[Vec<usize>], right: usize) -> Option<Vec<usize>> {
    fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                if owner[v].is_none_or(|w| augment(w, adj, seen, owner)) {
                    owner[v] = Some(u);
                    return true;
                }
            }
        }
        false
    }
    let mut owner = vec![None; right];
    for u in 0..adj.len() {
        let mut seen = vec![false; right];
        if !augment(u, adj, &mut seen, &mut owner) {
            return None;
        }
    }
    let mut out = vec![0; adj.len()];
    for (v, u) in owner.into_iter().enumerate() {
        if let Some(u) = u {
            out[u] = v;
        }
    }
    Some(out)
}

/// An integer `n`-chain: `(n+1)`-tuples of sites with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChainN {
    pub degree: usize,
    pub terms: BTreeMap<Vec<usize>, i64>,
}

impl ChainN {
    pub fn new(degree: usize) -> ChainN {
        ChainN { degree, terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, tuple: Vec<usize>, c: i64) {
        assert_eq!(tuple.len(), self.degree + 1, "tuple length must be degree + 1");
        let e = self.terms.entry(tuple.clone()).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.remove(&tuple);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// `∂_n = Σ_i (−1)^i d_i`, where `d_i` omits the `i`-th entry; `∂_0 = 0`.
pub fn boundary_n(c: &ChainN) -> ChainN {
    if c.degree == 0 {
        return ChainN::new(0);
    }
    let mut out = ChainN::new(c.degree - 1);
    for (t, &k) in &c.terms {
        for i in 0..t.len() {
            let mut face = t.clone();
            face.remove(i);
            out.add_term(face, if i % 2 == 0 { k } else { -k });
        }
    }
    out
}

/// A finitely generated abelian group `ℤ^rank ⊕ ⊕ ℤ/d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroup {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

impl std::fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Diagonal of the Smith normal form of an integer matrix (nonzero entries, each dividing the next).
pub fn smith_diagonal(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let mut pivot = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && pivot.as_ref().is_none_or(|&(pi, pj): &(usize, usize)| a[i][j].abs() < a[pi][pj].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut done = true;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&a[t][t]);
                    for j in t..cols {
                        let v = &a[t][j] * &q;
                        a[i][j] -= v;
                    }
                    if !a[i][t].is_zero() {
                        a.swap(t, i);
                        done = false;
                    }
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&a[t][t]);
                    for row in a.iter_mut().skip(t) {
                        let v = &row[t] * &q;
                        row[j] -= v;
                    }
                    if !a[t][j].is_zero() {
                        for row in a.iter_mut() {
                            row.swap(t, j);
                        }
                        done = false;
                    }
                }
            }
            if done {
                let bad = (t + 1..rows).flat_map(|i| (t + 1..cols).map(move |j| (i, j))).find(|&(i, j)| !(&a[i][j] % &a[t][t]).is_zero());
                match bad {
                    Some((i, _)) => {
                        for j in t..cols {
                            let v = a[i][j].clone();
                            a[t][j] += v;
                        }
                    }
                    None => break,
                }
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

fn tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    let total = n.pow(len as u32);
    (0..total).map(|k| crate::spin::digits(k, &vec![n; len])).collect()
}

/// Largest chain group dimension `ch_n_finite` will build.
pub const CHAIN_CAP: usize = 20_000;

/// `CH_n` of a finite space with integer coefficients: homology of the complex of all tuples.
pub fn ch_n_finite(space_len: usize, n: usize) -> Result<AbelianGroup, Error> {
    if space_len == 0 {
        return Ok(AbelianGroup { rank: 0, torsion: vec![] });
    }
    let size = |k: usize| space_len.checked_pow(k as u32 + 1);
    match size(n + 1) {
        Some(s) if s <= CHAIN_CAP => {}
        _ => return Err(Error::Chain(format!("chain groups for n = {n} on {space_len} sites exceed the cap {CHAIN_CAP}"))),
    }
    let matrix = |k: usize| -> Vec<Vec<BigInt>> {
        let rows = tuples(space_len, k);
        let index: BTreeMap<Vec<usize>, usize> = rows.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let cols = tuples(space_len, k + 1);
        let mut m = vec![vec![BigInt::zero(); cols.len()]; rows.len()];
        for (j, t) in cols.iter().enumerate() {
            let mut c = ChainN::new(k);
            c.add_term(t.clone(), 1);
            for (face, v) in boundary_n(&c).terms {
                m[index[&face]][j] += BigInt::from(v);
            }
        }
        m
    };
    let dim_n = size(n).unwrap();
    let rank_out = if n == 0 { 0 } else { smith_diagonal(matrix(n)).len() };
    let d_in = smith_diagonal(matrix(n + 1));
    let rank = dim_n - rank_out - d_in.len();
    let torsion = d_in.into_iter().filter(|d| !d.is_one()).collect();
    Ok(AbelianGroup { rank, torsion })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    fn line(q: Vec<usize>) -> SpinSystem {
        let n = q.len();
        SpinSystem::new(Arc::new(MetricSpace::interval(n).unwrap()), q).unwrap()
    }

    #[test]
    fn degree_examples() {
        let d = deg(&line(vec![12, 1]));
        assert_eq!(d.get(0), PrimeVector(BTreeMap::from([(2, 2), (3, 1)])));
        assert!(deg(&line(vec![1, 1, 1])).is_zero());
        assert_eq!(ch0_bounded(&line(vec![2, 3])), ch0_bounded(&line(vec![6, 1])));
        assert_eq!(ch0_bounded(&line(vec![2, 2, 2])), PrimeVector::single(2, 3));
    }

    #[test]
    fn boundary_examples() {
        let s = MetricSpace::interval(3).unwrap();
        let mut c = Chain1::new(rat(1, 1));
        let v = PrimeVector::single(2, 5);
        c.add_term(&s, 0, 1, &v).unwrap();
        let b = boundary(&c);
        assert_eq!(b.get(1), v);
        assert_eq!(b.get(0), v.neg());
        let mut tri = Chain1::new(rat(1, 1));
        tri.add_term(&s, 0, 1, &v).unwrap();
        tri.add_term(&s, 1, 2, &v).unwrap();
        tri.add_term(&s, 0, 2, &v.neg()).unwrap();
        assert!(boundary(&tri).is_zero());
        assert!(Chain1::new(rat(1, 2)).add_term(&s, 0, 2, &v).is_err());
    }

    #[test]
    fn homologous_and_obstruction() {
        let s = MetricSpace::interval(6).unwrap();
        let a = deg(&line(vec![2, 1, 1, 1, 1, 1]));
        let b = deg(&line(vec![1, 1, 1, 1, 1, 2]));
        match l_homologous(&s, &a, &b, &rat(1, 1)).unwrap() {
            Homology::Homologous(c) => {
                assert_eq!(boundary(&c), a.sub(&b));
                assert!(c.respects_bound(&s));
            }
            Homology::NotHomologous(_) => panic!("expected homologous"),
        }
        let mut table = vec![vec![rat(0, 1); 4]; 4];
        for (x, row) in table.iter_mut().enumerate() {
            for (y, v) in row.iter_mut().enumerate() {
                let (gx, gy) = (if x < 2 { x } else { x + 5 }, if y < 2 { y } else { y + 5 });
                *v = rat(gx.abs_diff(gy) as i64, 1);
            }
        }
        let gap = MetricSpace::explicit(table).unwrap();
        let a = Chain0(BTreeMap::from([(0, PrimeVector::single(2, 1))]));
        let b = Chain0(BTreeMap::from([(3, PrimeVector::single(2, 1))]));
        match l_homologous(&gap, &a, &b, &rat(2, 1)).unwrap() {
            Homology::NotHomologous(o) => {
                assert_eq!((o.prime, o.component.clone(), o.sum_a, o.sum_b), (2, vec![0, 1], 1, 0));
            }
            Homology::Homologous(_) => panic!("expected an obstruction"),
        }
    }

    #[test]
    fn smith_examples() {
        let m = |rows: &[&[i64]]| rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect::<Vec<Vec<BigInt>>>();
        assert_eq!(smith_diagonal(m(&[&[2, 4], &[6, 8]])), vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(smith_diagonal(m(&[&[2, 0], &[0, 3]])), vec![BigInt::from(1), BigInt::from(6)]);
        assert!(smith_diagonal(m(&[&[0, 0]])).is_empty());
    }

    #[test]
    fn finite_homology() {
        for n in 1..=3 {
            assert_eq!(ch_n_finite(n, 0).unwrap(), AbelianGroup { rank: 1, torsion: vec![] });
            assert!(ch_n_finite(n, 1).unwrap().is_trivial());
        }
        assert!(ch_n_finite(0, 0).unwrap().is_trivial());
        assert!(ch_n_finite(30, 3).is_err());
    }
}
