//! Normalising a locality-preserving isomorphism to a shift.
//!
//! Every site dimension is split into prime Kronecker legs. For each prime the
//! images of the source legs span a hypergraph on the sites; a greedy assignment
//! sends every hyperedge to one of its sites, and the resulting leg transport
//! `σ` satisfies `σ = f ∘ α` with `f = σ ∘ α⁻¹` local.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;

use crate::exactalg::{Field, Mat};
use crate::qca::{compose, int_rat, is_isomorphism, verify, Homo};
use crate::spin::{Element, Entries, SpinSystem};
use crate::Error;

/// Prime factors of `n` in nondecreasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        while n % p == 0 {
            out.push(p);
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `v_p(n)`.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n > 0 && n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// The ordered prime-leg factorisation of every site; the first leg varies slowest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeLegs {
    pub legs: Vec<Vec<u64>>,
}

impl PrimeLegs {
    pub fn of(sys: &SpinSystem) -> PrimeLegs {
        PrimeLegs { legs: sys.dims().iter().map(|&q| prime_factors(q as u64)).collect() }
    }

    /// `(before, p, after)` dimensions around leg `k` of site `x`.
    pub fn split(&self, x: usize, k: usize) -> (usize, usize, usize) {
        let l = &self.legs[x];
        let before: u64 = l[..k].iter().product();
        let after: u64 = l[k + 1..].iter().product();
        (before as usize, l[k] as usize, after as usize)
    }

    pub fn primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self.legs.iter().flatten().copied().collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }
}

/// The unit `e_ij` of leg `k` at site `x`, embedded as `1 ⊗ e_ij ⊗ 1`.
pub fn leg_unit(sys: &Arc<SpinSystem>, legs: &PrimeLegs, field: Field, x: usize, k: usize, i: usize, j: usize) -> Element {
    let (b, p, a) = legs.split(x, k);
    let mut m = Entries::new();
    for u in 0..b {
        for w in 0..a {
            m.insert(((u * p + i) * a + w, (u * p + j) * a + w), field.one());
        }
    }
    Element::from_entries(sys.clone(), vec![x], field, m).unwrap()
}

/// If the single-site element `e` is `1 ⊗ B ⊗ 1` on leg `k` of its site, returns `B`.
pub fn leg_restrict(e: &Element, legs: &PrimeLegs, k: usize) -> Option<Mat> {
    let x = *e.support().first()?;
    if e.support().len() != 1 {
        return None;
    }
    let (b, p, a) = legs.split(x, k);
    let f = e.field();
    let mut blk = Mat::zeros(f, p, p);
    for (&(r, c), v) in e.entries() {
        let (u, i, w) = (r / (p * a), (r / a) % p, r % a);
        let (u2, j, w2) = (c / (p * a), (c / a) % p, c % a);
        if u != u2 || w != w2 {
            return None;
        }
        if u == 0 && w == 0 {
            blk.set(i, j, v.clone());
        }
    }
    let mut expect = Entries::new();
    for u in 0..b {
        for w in 0..a {
            for i in 0..p {
                for j in 0..p {
                    let v = blk.get(i, j);
                    if !v.is_zero() {
                        expect.insert(((u * p + i) * a + w, (u * p + j) * a + w), v.clone());
                    }
                }
            }
        }
    }
    (&expect == e.entries()).then_some(blk)
}

/// One source leg and its hyperedge in the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: usize,
    pub origin: usize,
    pub leg: usize,
    pub sites: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    pub prime: u64,
    pub edges: Vec<Edge>,
    /// `b_x = v_p(r_x)`.
    pub targets: Vec<u32>,
    /// `B_x`: number of edges containing `x`.
    pub counts: Vec<u32>,
    /// Radius `L` bounding every edge around each of its sites.
    pub radius: BigRational,
}

fn leg_generators(h: &Homo, legs: &PrimeLegs, x: usize, k: usize) -> Result<Vec<Element>, Error> {
    let p = legs.legs[x][k] as usize;
    let src = h.source();
    let mut out = Vec::with_capacity(2 * (p - 1));
    for j in 1..p {
        for (a, b) in [(0, j), (j, 0)] {
            out.push(crate::qca::apply(h, &leg_unit(src, legs, h.field(), x, k, a, b))?);
        }
    }
    Ok(out)
}

fn leg_support(h: &Homo, legs: &PrimeLegs, x: usize, k: usize) -> Result<Vec<usize>, Error> {
    let mut s: Vec<usize> = Vec::new();
    for g in leg_generators(h, legs, x, k)? {
        s.extend_from_slice(g.support());
    }
    s.sort_unstable();
    s.dedup();
    Ok(s)
}

/// The hypergraph of prime `p`; fails when an edge is too wide or misses every target site
/// and when a site lies on fewer edges than it needs.
pub fn build_hypergraph(alpha: &Homo, p: u64) -> Result<Hypergraph, Error> {
    let report = verify(alpha);
    if !report.is_ok() {
        return Err(Error::Normalize(format!("not a homomorphism: {}", report.violations[0])));
    }
    let src = PrimeLegs::of(alpha.source());
    let tgt = alpha.target();
    let n = tgt.len();
    let mut edges = Vec::new();
    for x in 0..src.legs.len() {
        for k in 0..src.legs[x].len() {
            if src.legs[x][k] == p {
                let sites = leg_support(alpha, &src, x, k)?;
                edges.push(Edge { id: edges.len(), origin: x, leg: k, sites });
            }
        }
    }
    let targets: Vec<u32> = (0..n).map(|y| valuation(tgt.q(y) as u64, p)).collect();
    let mut counts = vec![0u32; n];
    for e in &edges {
        for &y in &e.sites {
            counts[y] += 1;
        }
    }
    let space = tgt.space();
    let radius = alpha.spread() * int_rat(2) + int_rat(1);
    for e in &edges {
        if e.sites.is_empty() {
            return Err(Error::Normalize(format!("edge {} has empty support", e.id)));
        }
        for &x in &e.sites {
            if e.sites.iter().any(|&y| space.d(x, y) >= &radius) {
                return Err(Error::Normalize(format!("edge {} is not within radius {radius} of its sites", e.id)));
            }
        }
        if e.sites.iter().all(|&y| targets[y] == 0) {
            return Err(Error::Normalize(format!("edge {} meets no site with b > 0", e.id)));
        }
    }
    if let Some(y) = (0..n).find(|&y| counts[y] < targets[y]) {
        return Err(Error::Normalize(format!("site {y} lies on {} edges but needs {}", counts[y], targets[y])));
    }
    Ok(Hypergraph { prime: p, edges, targets, counts, radius })
}

/// `site_of[e]` is the site receiving edge `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub prime: u64,
    pub site_of: Vec<usize>,
}

impl Assignment {
    /// Each site `x` receives exactly `b_x` edges, each containing `x`.
    pub fn is_valid(&self, h: &Hypergraph) -> bool {
        if self.site_of.len() != h.edges.len() {
            return false;
        }
        let mut got = vec![0u32; h.targets.len()];
        for (e, &y) in h.edges.iter().zip(&self.site_of) {
            if !e.sites.contains(&y) {
                return false;
            }
            got[y] += 1;
        }
        got == h.targets
    }
}

/// Greedy assignment over sites in ascending order, preferring edges that meet
/// the remaining lattice only at the current site. Reports infeasibility instead of backtracking.
pub fn assign(h: &Hypergraph) -> Result<Assignment, Error> {
    let n = h.targets.len();
    let mut lambda: Vec<bool> = h.targets.iter().map(|&b| b > 0).collect();
    let mut site_of: Vec<Option<usize>> = vec![None; h.edges.len()];
    let meet = |e: &Edge, lambda: &[bool]| -> Vec<usize> { e.sites.iter().copied().filter(|&y| lambda[y]).collect() };
    for x in 0..n {
        if !lambda[x] {
            continue;
        }
        for _ in 0..h.targets[x] {
            let free: Vec<&Edge> = h.edges.iter().filter(|e| site_of[e.id].is_none() && e.sites.contains(&x)).collect();
            let unassigned_on = |y: usize| h.edges.iter().filter(|e| site_of[e.id].is_none() && e.sites.contains(&y)).count() as u32;
            let keeps_a = |e: &Edge| meet(e, &lambda).iter().all(|&y| y == x || unassigned_on(y) > h.targets[y]);
            let pair_count = |want: &[usize]| {
                h.edges.iter().filter(|e| site_of[e.id].is_none() && meet(e, &lambda) == want).count() as u32
            };
            let pick = free
                .iter()
                .find(|e| meet(e, &lambda) == [x])
                .or_else(|| {
                    free.iter().find(|e| {
                        let m = meet(e, &lambda);
                        if m.len() != 2 || !keeps_a(e) {
                            return false;
                        }
                        let y = if m[0] == x { m[1] } else { m[0] };
                        let mut xy = vec![x, y];
                        xy.sort_unstable();
                        pair_count(&[y]) + pair_count(&xy) > h.targets[y]
                    })
                })
                .or_else(|| free.iter().find(|e| keeps_a(e)));
            match pick {
                Some(e) => site_of[e.id] = Some(x),
                None => return Err(Error::Normalize(format!("prime {}: no admissible edge for site {x}", h.prime))),
            }
        }
        for y in 0..n {
            if y == x || !lambda[y] {
                continue;
            }
            let mut xy = vec![x, y];
            xy.sort_unstable();
            let c = h
                .edges
                .iter()
                .filter(|e| {
                    let m = meet(e, &lambda);
                    site_of[e.id].is_none() && (m == [y] || m == xy)
                })
                .count() as u32;
            if c > h.targets[y] {
                return Err(Error::Normalize(format!("prime {}: condition (b) fails at site {y} after site {x}", h.prime)));
            }
        }
        lambda[x] = false;
    }
    let site_of: Option<Vec<usize>> = site_of.into_iter().collect();
    let site_of = site_of.ok_or_else(|| Error::Normalize(format!("prime {}: edges left unassigned", h.prime)))?;
    let a = Assignment { prime: h.prime, site_of };
    if !a.is_valid(h) {
        return Err(Error::Normalize(format!("prime {}: assignment does not meet the site degrees", h.prime)));
    }
    Ok(a)
}

/// Exhaustive search for any valid assignment.
pub fn assign_exhaustive(h: &Hypergraph) -> Option<Assignment> {
    fn go(h: &Hypergraph, k: usize, cap: &mut [u32], out: &mut Vec<usize>) -> bool {
        if k == h.edges.len() {
            return cap.iter().all(|&c| c == 0);
        }
        for &y in &h.edges[k].sites {
            if cap[y] > 0 {
                cap[y] -= 1;
                out.push(y);
                if go(h, k + 1, cap, out) {
                    return true;
                }
                out.pop();
                cap[y] += 1;
            }
        }
        false
    }
    let mut cap = h.targets.clone();
    let mut out = Vec::with_capacity(h.edges.len());
    go(h, 0, &mut cap, &mut out).then(|| Assignment { prime: h.prime, site_of: out })
}

/// A source leg sent onto a target leg.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LegMove {
    pub prime: u64,
    pub from_site: usize,
    pub from_leg: usize,
    pub to_site: usize,
    pub to_leg: usize,
}

/// The shift sending each source leg onto its target leg.
pub fn shift_from_moves(source: &Arc<SpinSystem>, target: &Arc<SpinSystem>, field: Field, moves: &[LegMove]) -> Result<Homo, Error> {
    let sl = PrimeLegs::of(source);
    let tl = PrimeLegs::of(target);
    let mut dest: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
    let mut used = std::collections::BTreeSet::new();
    for m in moves {
        let ok_src = sl.legs.get(m.from_site).and_then(|l| l.get(m.from_leg)) == Some(&m.prime);
        let ok_tgt = tl.legs.get(m.to_site).and_then(|l| l.get(m.to_leg)) == Some(&m.prime);
        if !ok_src || !ok_tgt || !used.insert((m.to_site, m.to_leg)) || dest.insert((m.from_site, m.from_leg), (m.to_site, m.to_leg)).is_some() {
            return Err(Error::Normalize(format!("invalid leg move {m:?}")));
        }
    }
    if dest.len() != sl.legs.iter().map(Vec::len).sum::<usize>() || used.len() != tl.legs.iter().map(Vec::len).sum::<usize>() {
        return Err(Error::Normalize("leg moves are not a bijection".into()));
    }
    let mut images = Vec::with_capacity(source.len());
    for x in 0..source.len() {
        let q = source.q(x);
        let dims: Vec<usize> = sl.legs[x].iter().map(|&p| p as usize).collect();
        let mut list = Vec::with_capacity(q * q);
        for u in 0..q * q {
            let (di, dj) = (crate::spin::digits(u / q, &dims), crate::spin::digits(u % q, &dims));
            let mut e = Element::identity(target.clone(), field);
            for k in 0..dims.len() {
                let (y, t) = dest[&(x, k)];
                e = e.mul(&leg_unit(target, &tl, field, y, t, di[k], dj[k]))?;
            }
            list.push(e);
        }
        images.push(list);
    }
    Homo::new(source.clone(), target.clone(), field, images)
}

/// The leg transport of a shift, or `None` when some leg is not carried onto a single target leg.
pub fn leg_transport(alpha: &Homo) -> Option<Vec<LegMove>> {
    let sl = PrimeLegs::of(alpha.source());
    let tl = PrimeLegs::of(alpha.target());
    let mut moves = Vec::new();
    let mut used = std::collections::BTreeSet::new();
    for x in 0..sl.legs.len() {
        for k in 0..sl.legs[x].len() {
            let p = sl.legs[x][k];
            let gens = leg_generators(alpha, &sl, x, k).ok()?;
            let mut sup: Vec<usize> = gens.iter().flat_map(|g| g.support().to_vec()).collect();
            sup.sort_unstable();
            sup.dedup();
            let [y] = sup[..] else { return None };
            let t = (0..tl.legs[y].len()).find(|&t| {
                tl.legs[y][t] == p && !used.contains(&(y, t)) && gens.iter().all(|g| leg_restrict(g, &tl, t).is_some())
            })?;
            used.insert((y, t));
            moves.push(LegMove { prime: p, from_site: x, from_leg: k, to_site: y, to_leg: t });
        }
    }
    Some(moves)
}

/// Whether every prime leg is carried onto a single Kronecker leg of one target site.
pub fn is_shift(alpha: &Homo) -> bool {
    leg_transport(alpha).is_some()
}

#[derive(Clone, Debug)]
pub struct Normalization {
    pub f: Homo,
    pub sigma: Homo,
    pub moves: Vec<LegMove>,
    pub hypergraphs: Vec<Hypergraph>,
    pub assignments: Vec<Assignment>,
}

/// `(f, σ)` with `σ = f ∘ α` a shift.
pub fn normalize_to_shift(alpha: &Homo) -> Result<Normalization, Error> {
    let (iso, inv) = is_isomorphism(alpha)?;
    let inv = match (iso, inv) {
        (true, Some(inv)) => inv,
        _ => return Err(Error::Normalize("not a locality-preserving isomorphism".into())),
    };
    let sl = PrimeLegs::of(alpha.source());
    let tl = PrimeLegs::of(alpha.target());
    let mut hypergraphs = Vec::new();
    let mut assignments = Vec::new();
    let mut moves = Vec::new();
    for p in sl.primes().into_iter().chain(tl.primes()).collect::<std::collections::BTreeSet<_>>() {
        let h = build_hypergraph(alpha, p)?;
        let a = assign(&h)?;
        let mut next_slot: BTreeMap<usize, usize> = BTreeMap::new();
        for (e, &y) in h.edges.iter().zip(&a.site_of) {
            let n = next_slot.entry(y).or_insert(0);
            let t = (0..tl.legs[y].len()).filter(|&t| tl.legs[y][t] == p).nth(*n).unwrap();
            *n += 1;
            moves.push(LegMove { prime: p, from_site: e.origin, from_leg: e.leg, to_site: y, to_leg: t });
        }
        hypergraphs.push(h);
        assignments.push(a);
    }
    moves.sort_unstable_by_key(|m| (m.from_site, m.from_leg));
    let sigma = shift_from_moves(alpha.source(), alpha.target(), alpha.field(), &moves)?;
    let f = compose(&sigma, &inv)?;
    if !compose(&f, alpha)?.equals(&sigma)? {
        return Err(Error::Normalize("f ∘ α differs from σ".into()));
    }
    if !is_shift(&sigma) {
        return Err(Error::Normalize("σ is not a shift".into()));
    }
    Ok(Normalization { f, sigma, moves, hypergraphs, assignments })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qca::{circuit_single_layer, translation, GateSpec};
    use crate::space::MetricSpace;

    fn line(q: Vec<usize>) -> Arc<SpinSystem> {
        let n = q.len();
        Arc::new(SpinSystem::new(Arc::new(MetricSpace::interval(n).unwrap()), q).unwrap())
    }

    #[test]
    fn factorisation() {
        assert_eq!(prime_factors(12), vec![2, 2, 3]);
        assert_eq!(prime_factors(1), Vec::<u64>::new());
        assert_eq!(valuation(12, 2), 2);
        let s = line(vec![12, 1]);
        let legs = PrimeLegs::of(&s);
        assert_eq!(legs.split(0, 1), (2, 2, 3));
        let e = leg_unit(&s, &legs, Field::Q, 0, 2, 0, 1);
        assert_eq!(leg_restrict(&e, &legs, 2), Some(Mat::unit(Field::Q, 3, 0, 1)));
        assert_eq!(leg_restrict(&e, &legs, 0), None);
    }

    #[test]
    fn identity_and_translation_are_shifts() {
        let s = line(vec![2, 6, 3]);
        let f = Field::Fp(5);
        let id = Homo::identity(s.clone(), f);
        assert!(is_shift(&id));
        let h = build_hypergraph(&id, 2).unwrap();
        assert!(h.edges.iter().all(|e| e.sites == vec![e.origin]));
        let n = normalize_to_shift(&id).unwrap();
        assert!(n.f.equals(&id).unwrap());
        let c = Arc::new(SpinSystem::uniform(Arc::new(MetricSpace::circle(6).unwrap()), 2).unwrap());
        let t = translation(&c, f, 1).unwrap();
        assert!(is_shift(&t));
        let h = build_hypergraph(&t, 2).unwrap();
        assert!(h.edges.iter().all(|e| e.sites == vec![(e.origin + 1) % 6]));
    }

    #[test]
    fn entangling_gate() {
        let s = line(vec![2, 2, 2]);
        let f = Field::Fp(3);
        let cnot = Mat::from_ints(f, &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]]);
        let g = circuit_single_layer(&s, f, &[GateSpec::inner(vec![0, 1], cnot)]).unwrap();
        assert!(!is_shift(&g));
        let h = build_hypergraph(&g, 2).unwrap();
        assert!(h.edges.iter().any(|e| e.sites.len() == 2));
        let a = assign(&h).unwrap();
        assert!(a.is_valid(&h));
        assert!(assign_exhaustive(&h).is_some());
        let n = normalize_to_shift(&g).unwrap();
        assert!(is_shift(&n.sigma));
        assert!(compose(&n.f, &g).unwrap().equals(&n.sigma).unwrap());
    }

    #[test]
    fn merging_shift() {
        let q = line(vec![2, 3, 1]);
        let r = line(vec![1, 1, 6]);
        let f = Field::Q;
        let moves = [
            LegMove { prime: 2, from_site: 0, from_leg: 0, to_site: 2, to_leg: 0 },
            LegMove { prime: 3, from_site: 1, from_leg: 0, to_site: 2, to_leg: 1 },
        ];
        let s = shift_from_moves(&q, &r, f, &moves).unwrap();
        assert!(verify(&s).is_ok());
        assert_eq!(leg_transport(&s).unwrap(), moves.to_vec());
        let n = normalize_to_shift(&s).unwrap();
        assert_eq!(n.moves, moves.to_vec());
    }
}
