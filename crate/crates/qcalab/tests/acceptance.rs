//! Acceptance suite: one PASS/FAIL line per criterion; exits nonzero when any criterion fails.
//!
//! All comparisons are exact. The only tolerances are the runtime limits below.

mod common;

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::Zero;
use qcalab::coarse::{boundary, boundary_n, ch_n_finite, deg, l_homologous, threshold_components, transport_shift, ChainN, Homology};
use qcalab::exactalg::rat;
use qcalab::index::{central_cut, check_homomorphism, index, index_all_cuts, pump, Cut};
use qcalab::kone::{check_stabilization, k1_class, split_g, swap_gate_class};
use qcalab::qca::{apply, circuit, circuit_single_layer, compose, elementary_product, int_rat, integer_spread, translation, verify, Elementary, GateSpec, Homo};
use qcalab::random;
use qcalab::shiftnorm::{assign_exhaustive, is_shift, leg_transport, normalize_to_shift};
use qcalab::spin::{phi_stack, phi_unstack, stack_systems};
use qcalab::subalg::{centralizer, generate, tensor_split, verify_tensor_pair, Subalgebra};
use qcalab::{Element, Field, MetricSpace, SpinSystem};
use rand::Rng;

const TRANSLATION_LIMIT: Duration = Duration::from_secs(60);
const PUMP_LIMIT: Duration = Duration::from_secs(300);
const MULTIPLICATIVITY_PAIRS: usize = 50;
const SHIFT_INSTANCES: usize = 30;
const ORACLE_EDGE_LIMIT: usize = 12;
const BRIDGE_PAIRS: usize = 30;
const SPLIT_SAMPLES: usize = 20;
const PHI_PAIRS: usize = 100;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<T: std::fmt::Debug>(x: T) -> String {
    format!("{x:?}")
}

fn translation_index() -> Outcome {
    let start = Instant::now();
    let field = Field::fp(3).map_err(e)?;
    let sys = Arc::new(SpinSystem::uniform(Arc::new(MetricSpace::circle(8).map_err(e)?), 2).map_err(e)?);
    let t = translation(&sys, field, 1).map_err(e)?;
    let two = rat(2, 1);
    for ell in [1, 2] {
        let all = index_all_cuts(&t, ell).map_err(e)?;
        check(all.len() == 8, format!("{} cuts at ell = {ell}", all.len()))?;
        for (cut, c) in &all {
            check(c.value == two, format!("index {} at cut {} ell {ell}", c.value, cut.gamma))?;
            check(c.certificates.passed(), format!("certificates failed at cut {}", cut.gamma))?;
            if ell == 1 {
                let oracle = common::brute_boundary_dim(&t, cut.gamma, ell);
                check(oracle as u128 == c.dim_b, format!("oracle dim {oracle} vs {} at cut {}", c.dim_b, cut.gamma))?;
            }
        }
    }
    let took = start.elapsed();
    check(took < TRANSLATION_LIMIT, format!("took {took:.1?}"))?;
    Ok(format!("index 2 at 8 cuts for ell 1 and 2, oracle agrees at ell 1, {took:.1?}"))
}

fn pump_realization() -> Outcome {
    let start = Instant::now();
    let n = 6;
    let mut count = 0;
    for field in [Field::Fp(2), Field::Fp(3), Field::Q] {
        for a in 1..=4 {
            for b in 1..=4 {
                let p = pump(a, b, n, field).map_err(e)?;
                check(verify(&p).is_ok(), format!("pump({a},{b}) over {field} fails verify"))?;
                let c = index(&p, &central_cut(n)).map_err(e)?;
                check(c.value == rat(a as i64, b as i64), format!("pump({a},{b}) over {field}: {}", c.value))?;
                check(c.certificates.passed(), format!("pump({a},{b}) certificates"))?;
                count += 1;
            }
        }
    }
    let took = start.elapsed();
    check(took < PUMP_LIMIT, format!("took {took:.1?}"))?;
    Ok(format!("{count} pumps give a/b, {took:.1?}"))
}

fn homomorphism_and_kernel() -> Outcome {
    let mut rng = common::rng(3);
    let mut pairs = 0;
    for k in 0..MULTIPLICATIVITY_PAIRS {
        let field = [Field::Fp(2), Field::Fp(3), Field::Q][k % 3];
        let d = 2 + k % 2;
        let sys = Arc::new(SpinSystem::uniform(Arc::new(MetricSpace::circle(8).map_err(e)?), d).map_err(e)?);
        let pick = |rng: &mut rand_chacha::ChaCha8Rng| -> Result<Homo, String> {
            match rng.gen_range(0..3) {
                0 => translation(&sys, field, 1).map_err(e),
                1 => translation(&sys, field, -1).map_err(e),
                _ => {
                    let layer = random::layer(rng, &sys, field, 9);
                    circuit_single_layer(&sys, field, &layer).map_err(e)
                }
            }
        };
        let (a, b) = (pick(&mut rng)?, pick(&mut rng)?);
        let cut = Cut::new(rng.gen_range(0..8), 2);
        let m = check_homomorphism(&a, &b, &cut).map_err(e)?;
        check(m.holds, format!("pair {k}: {} · {} vs {}", m.alpha, m.beta, m.product))?;
        pairs += 1;
    }
    let mut circuits = 0;
    for k in 0..20 {
        let field = [Field::Fp(2), Field::Q][k % 2];
        let n = 8;
        let q = common::random_dims(&mut rng, n, 3);
        let sys = common::line(q);
        let layers: Vec<Vec<GateSpec>> = (0..rng.gen_range(1..=3)).map(|_| random::layer(&mut rng, &sys, field, 4)).collect();
        let c = circuit(&sys, field, &layers).map_err(e)?;
        let ell = integer_spread(&c).ok_or("non-integer spread")?.max(1);
        for gamma in ell - 1..n - ell {
            let v = index(&c, &Cut::new(gamma, ell)).map_err(e)?.value;
            check(v == rat(1, 1), format!("circuit {k} at cut {gamma}: index {v}"))?;
        }
        circuits += 1;
    }
    Ok(format!("{pairs} multiplicative pairs, {circuits} pure circuits with index 1 at every admissible cut"))
}

fn conjugated_full_algebra(rng: &mut rand_chacha::ChaCha8Rng, field: Field, n: usize, m: usize) -> Result<Subalgebra, String> {
    let sys = Arc::new(SpinSystem::new(Arc::new(MetricSpace::interval(2).map_err(e)?), vec![n, m]).map_err(e)?);
    let g = random::invertible(rng, field, n * m);
    let conj = circuit_single_layer(&sys, field, &[GateSpec::inner(vec![0, 1], g)]).map_err(e)?;
    let gens: Vec<Element> = (0..n * n).map(|k| apply(&conj, &Element::matrix_unit(sys.clone(), field, 0, k / n, k % n).unwrap())).collect::<Result<_, _>>().map_err(e)?;
    generate(sys, field, &gens, &[0, 1]).map_err(e)
}

fn centralizer_suite() -> Outcome {
    let mut rng = common::rng(4);
    let mut count = 0;
    for n in 1..=3 {
        for m in 1..=3 {
            for field in [Field::Fp(2), Field::Q] {
                let b = conjugated_full_algebra(&mut rng, field, n, m)?;
                let c = centralizer(&b).map_err(e)?;
                let cert = verify_tensor_pair(&b, &c).map_err(e)?;
                check(cert.passed(), format!("n={n} m={m} {field}: {cert:?}"))?;
                check(centralizer(&c).map_err(e)?.equals(&b).map_err(e)?, format!("double centralizer n={n} m={m}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} conjugated full subalgebras pass all four checks"))
}

fn tensor_splitting() -> Outcome {
    let mut rng = common::rng(5);
    for k in 0..SPLIT_SAMPLES {
        let field = [Field::Fp(3), Field::Q][k % 2];
        let (a, c) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let sys = Arc::new(SpinSystem::new(Arc::new(MetricSpace::interval(2).map_err(e)?), vec![a, c]).map_err(e)?);
        let d_gens: Vec<Element> = (0..rng.gen_range(1..=2)).map(|_| random::element(&mut rng, &sys, field, &[1])).collect();
        let d = generate(sys.clone(), field, &d_gens, &[1]).map_err(e)?;
        let mut gens: Vec<Element> = (0..a * a).map(|u| Element::matrix_unit(sys.clone(), field, 0, u / a, u % a).unwrap()).collect();
        gens.extend(d_gens.iter().cloned());
        let b = generate(sys.clone(), field, &gens, &[0, 1]).map_err(e)?;
        let split = tensor_split(&b, &[0], &[1]).map_err(e)?;
        check(split.d.equals(&d).map_err(e)?, format!("sample {k}: recovered dim {} vs {}", split.d.dim(), d.dim()))?;
        check(split.dims_match && split.contains_products, format!("sample {k}: factorization checks"))?;
    }
    Ok(format!("{SPLIT_SAMPLES} random A ⊗ D recover D"))
}

fn shift_normalization() -> Outcome {
    let mut rng = common::rng(6);
    let space = Arc::new(MetricSpace::interval(8).map_err(e)?);
    let (mut oracle_runs, mut total) = (0, 0);
    for k in 0..SHIFT_INSTANCES {
        let field = [Field::Fp(2), Field::Fp(5), Field::Q][k % 3];
        let q = common::random_dims(&mut rng, 8, 4);
        let sys = Arc::new(SpinSystem::new(space.clone(), q).map_err(e)?);
        let s = random::shift(&mut rng, &sys, field, 1, 6).map_err(e)?;
        let layer = random::layer(&mut rng, s.target(), field, 12);
        let alpha = compose(&circuit_single_layer(s.target(), field, &layer).map_err(e)?, &s).map_err(e)?;
        let n = normalize_to_shift(&alpha).map_err(|x| format!("instance {k}: {x}"))?;
        check(verify(&n.sigma).is_ok() && is_shift(&n.sigma), format!("instance {k}: sigma is not a verified shift"))?;
        check(compose(&n.f, &alpha).map_err(e)?.equals(&n.sigma).map_err(e)?, format!("instance {k}: f ∘ alpha differs from sigma"))?;
        for (h, a) in n.hypergraphs.iter().zip(&n.assignments) {
            check(a.is_valid(h), format!("instance {k}: invalid assignment"))?;
            if h.edges.len() <= ORACLE_EDGE_LIMIT {
                check(assign_exhaustive(h).is_some(), format!("instance {k}: oracle disagrees"))?;
                oracle_runs += 1;
            }
        }
        total += 1;
    }
    check(oracle_runs > 0, "no hypergraph small enough for the oracle")?;
    Ok(format!("{total} instances normalized, {oracle_runs} hypergraphs agree with exhaustive search"))
}

fn coarse_bridge() -> Outcome {
    let mut rng = common::rng(7);
    let space = Arc::new(MetricSpace::interval(10).map_err(e)?);
    for k in 0..BRIDGE_PAIRS {
        let field = Field::Fp(2);
        let ell = 1 + k % 2;
        let q = common::random_dims(&mut rng, 10, 4);
        let sys = Arc::new(SpinSystem::new(space.clone(), q).map_err(e)?);
        let s = random::shift(&mut rng, &sys, field, ell, 8).map_err(e)?;
        let moves = leg_transport(&s).ok_or("constructed shift has no leg transport")?;
        check(moves.iter().all(|m| m.from_site.abs_diff(m.to_site) <= ell), format!("pair {k}: transport exceeds ell"))?;
        let (a, b) = (deg(&sys), deg(s.target()));
        match l_homologous(&space, &a, &b, &int_rat(2 * ell)).map_err(e)? {
            Homology::Homologous(c) => {
                check(boundary(&c) == a.sub(&b), format!("pair {k}: certificate boundary"))?;
                check(c.respects_bound(&space), format!("pair {k}: certificate bound"))?;
            }
            Homology::NotHomologous(o) => return Err(format!("pair {k}: obstruction {o:?}")),
        }
        let t = transport_shift(&sys, s.target(), &int_rat(ell), field).map_err(e)?.ok_or(format!("pair {k}: no transport at bound {ell}"))?;
        check(verify(&t).is_ok() && *t.spread() <= int_rat(ell), format!("pair {k}: transport shift"))?;
    }
    let positions: Vec<i64> = vec![0, 1, 2, 3, 4, 10, 11, 12, 13, 14];
    let table: Vec<Vec<BigRational>> = positions.iter().map(|&x| positions.iter().map(|&y| rat((x - y).abs(), 1)).collect()).collect();
    let gap = Arc::new(MetricSpace::explicit(table).map_err(e)?);
    let l = int_rat(2);
    let comps = threshold_components(&gap, &l);
    check(comps.len() == 2, format!("{} components", comps.len()))?;
    let mut obstructions = 0;
    for k in 0..10 {
        let qa = common::random_dims(&mut rng, 10, 4);
        let mut qb = qa.clone();
        qb[rng.gen_range(0..5)] *= 2;
        let sa = SpinSystem::new(gap.clone(), qa).map_err(e)?;
        let sb = SpinSystem::new(gap.clone(), qb).map_err(e)?;
        match l_homologous(&gap, &deg(&sa), &deg(&sb), &l).map_err(e)? {
            Homology::NotHomologous(o) => {
                check(comps.contains(&o.component), format!("case {k}: obstruction is not a component"))?;
                let sum = |s: &SpinSystem| o.component.iter().map(|&z| deg(s).get(z).get(o.prime)).sum::<i64>();
                check(sum(&sa) == o.sum_a && sum(&sb) == o.sum_b && o.sum_a != o.sum_b, format!("case {k}: obstruction sums"))?;
                obstructions += 1;
            }
            Homology::Homologous(_) => return Err(format!("case {k}: expected an obstruction")),
        }
    }
    Ok(format!("{BRIDGE_PAIRS} shifted pairs homologous at 2·ell with transport shifts, {obstructions} obstructions"))
}

fn chain_complex() -> Outcome {
    let mut checked = 0;
    for sites in 1..=4usize {
        for n in 0..=2usize {
            let len = n + 2;
            for k in 0..sites.pow(len as u32) {
                let tuple = qcalab::spin::digits(k, &vec![sites; len]);
                let mut c = ChainN::new(n + 1);
                c.add_term(tuple, 1);
                check(boundary_n(&boundary_n(&c)).is_zero(), format!("∂∂ ≠ 0 on {sites} sites degree {}", n + 1))?;
                checked += 1;
            }
            let h = ch_n_finite(sites, n).map_err(e)?;
            let want = if n == 0 { (1, true) } else { (0, true) };
            check(h.rank == want.0 && h.torsion.is_empty() == want.1, format!("CH_{n} on {sites} sites is {h}"))?;
        }
    }
    Ok(format!("∂∂ = 0 on {checked} basis chains, CH = Z, 0, 0 on 1..4 sites"))
}

fn k1_suite() -> Outcome {
    let mut rng = common::rng(9);
    let q = Field::Q;
    for _ in 0..20 {
        let n = rng.gen_range(1..=4);
        let a = random::invertible(&mut rng, q, n);
        for k in 1..=4 {
            let c = check_stabilization(&a, k).map_err(e)?;
            check(c.holds(), format!("stabilization n={n} k={k}: {} {} {}", c.base, c.right, c.left))?;
        }
    }
    for _ in 0..10 {
        let n = rng.gen_range(2..=4);
        let factors: Vec<Elementary> = (0..5)
            .map(|_| {
                let i = rng.gen_range(0..n);
                let j = (i + rng.gen_range(1..n)) % n;
                Elementary { i, j, lambda: random::scalar(&mut rng, q) }
            })
            .collect();
        let m = elementary_product(q, n, &factors).map_err(e)?;
        check(k1_class(&m, n).map_err(e)?.is_trivial(), "elementary product with nontrivial class")?;
    }
    for k in 0..20 {
        let r = rat(rng.gen_range(1..=60) * if k % 3 == 0 { -1 } else { 1 }, rng.gen_range(1..=30));
        let (p, den) = (rng.gen_range(-3..=3i64), rng.gen_range(1..=4usize));
        let class = k1_class(&split_g(&r, p, den).map_err(e)?, den).map_err(e)?;
        let scale = rat(p, den as i64);
        let want: BTreeMap<u64, BigRational> = common::rational_valuations(&r).into_iter().map(|(pr, v)| (pr, v * &scale)).filter(|(_, v)| !v.is_zero()).collect();
        check(*class.exponents() == want, format!("f(g({r}, {p}/{den})) = {class}"))?;
    }
    for p in [2, 3, 5, 7] {
        let f = Field::fp(p).map_err(e)?;
        for _ in 0..5 {
            let n = rng.gen_range(1..=4);
            check(k1_class(&random::invertible(&mut rng, f, n), n).map_err(e)?.is_trivial(), format!("nontrivial class over F_{p}"))?;
        }
    }
    for a in 1..=4 {
        for b in 1..=4 {
            let s = swap_gate_class(q, a, b).map_err(e)?;
            check(s.det == q.one() && s.class.is_trivial(), format!("swap {a}x{b} not stably even"))?;
        }
    }
    Ok("stabilization, elementary triviality, f∘g = id on 20 inputs, F_p triviality, stably even swaps".into())
}

fn phi_round_trip() -> Outcome {
    let mut rng = common::rng(10);
    for k in 0..PHI_PAIRS {
        let field = [Field::Fp(2), Field::Fp(3), Field::Q][k % 3];
        let n = rng.gen_range(1..=6);
        let space = Arc::new(MetricSpace::interval(n).map_err(e)?);
        let q = Arc::new(SpinSystem::new(space.clone(), common::random_dims(&mut rng, n, 4)).map_err(e)?);
        let r = Arc::new(SpinSystem::new(space, common::random_dims(&mut rng, n, 4)).map_err(e)?);
        let qr = Arc::new(stack_systems(&q, &r).map_err(e)?);
        let sup = |rng: &mut rand_chacha::ChaCha8Rng| random::support(rng, n, 2);
        let (sa, sb, sa2, sb2) = (sup(&mut rng), sup(&mut rng), sup(&mut rng), sup(&mut rng));
        let a = random::element(&mut rng, &q, field, &sa);
        let b = random::element(&mut rng, &r, field, &sb);
        let a2 = random::element(&mut rng, &q, field, &sa2);
        let b2 = random::element(&mut rng, &r, field, &sb2);
        let ab = phi_stack(&a, &b, &qr).map_err(e)?;
        let u = ab.support().to_vec();
        let (ea, eb) = (a.embed(&u).map_err(e)?, b.embed(&u).map_err(e)?);
        let terms = phi_unstack(&ab, &q, &r).map_err(e)?;
        check(terms.len() == ea.nnz() || eb.is_zero(), format!("pair {k}: {} terms for {} entries", terms.len(), ea.nnz()))?;
        for t in &terms {
            check(t.coeff.equals(&eb.scale(&ea.get(t.i, t.j))).map_err(e)?, format!("pair {k}: term ({}, {}) differs", t.i, t.j))?;
        }
        let lhs = phi_stack(&a.mul(&a2).map_err(e)?, &b.mul(&b2).map_err(e)?, &qr).map_err(e)?;
        let rhs = ab.mul(&phi_stack(&a2, &b2, &qr).map_err(e)?).map_err(e)?;
        check(lhs.equals(&rhs).map_err(e)?, format!("pair {k}: Φ not multiplicative"))?;
    }
    Ok(format!("{PHI_PAIRS} pairs round-trip and multiply"))
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("1 translation index", translation_index),
        ("2 pump realization", pump_realization),
        ("3 homomorphism and kernel", homomorphism_and_kernel),
        ("4 centralizer", centralizer_suite),
        ("5 tensor splitting", tensor_splitting),
        ("6 shift normalization", shift_normalization),
        ("7 coarse bridge", coarse_bridge),
        ("8 chain complex", chain_complex),
        ("9 K1 classes", k1_suite),
        ("10 stacking round trip", phi_round_trip),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.split(' ').next() == Some(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match result {
            Ok(msg) => println!("PASS criterion {name}: {msg} [{:.1?}]", start.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg} [{:.1?}]", start.elapsed());
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
