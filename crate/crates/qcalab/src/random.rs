//! Seeded random generators for matrices, elements and gates.

use std::sync::Arc;

use rand::Rng;

use crate::exactalg::{Field, Mat, Scalar};
use crate::qca::{GateSpec, Homo};
use crate::shiftnorm::{shift_from_moves, LegMove, PrimeLegs};
use crate::spin::{Element, SpinSystem};
use crate::Error;

/// A uniformly random residue over 𝔽_p, or a small integer in `[-3, 3]` over ℚ.
pub fn scalar<R: Rng>(rng: &mut R, field: Field) -> Scalar {
    match field {
        Field::Q => field.int(rng.gen_range(-3..=3)),
        Field::Fp(p) => Scalar::Fp { v: rng.gen_range(0..p), p },
    }
}

pub fn matrix<R: Rng>(rng: &mut R, field: Field, rows: usize, cols: usize) -> Mat {
    let data = (0..rows * cols).map(|_| scalar(rng, field)).collect();
    Mat::from_vec(field, rows, cols, data).unwrap()
}

/// A random invertible `n×n` matrix, by rejection.
pub fn invertible<R: Rng>(rng: &mut R, field: Field, n: usize) -> Mat {
    loop {
        let m = matrix(rng, field, n, n);
        if !m.det_ff().unwrap().is_zero() {
            return m;
        }
    }
}

/// A random element on the given support.
pub fn element<R: Rng>(rng: &mut R, sys: &Arc<SpinSystem>, field: Field, support: &[usize]) -> Element {
    let d = sys.dim(support);
    Element::new(sys.clone(), support.to_vec(), matrix(rng, field, d, d)).unwrap()
}

/// A random nonempty ascending subset of `0..n` with at most `max` sites.
pub fn support<R: Rng>(rng: &mut R, n: usize, max: usize) -> Vec<usize> {
    let k = rng.gen_range(1..=max.min(n));
    let mut s = rand::seq::index::sample(rng, n, k).into_vec();
    s.sort_unstable();
    s
}

/// One layer of inner gates on blocks of consecutive sites, each of dimension at most `max_dim`.
pub fn layer<R: Rng>(rng: &mut R, sys: &Arc<SpinSystem>, field: Field, max_dim: usize) -> Vec<GateSpec> {
    let n = sys.len();
    let mut out = Vec::new();
    let mut x = 0;
    while x < n {
        let pair = x + 1 < n && sys.dim(&[x, x + 1]) <= max_dim && rng.gen_bool(0.5);
        let block = if pair { vec![x, x + 1] } else { vec![x] };
        x += block.len();
        let d = sys.dim(&block);
        out.push(GateSpec::inner(block, invertible(rng, field, d)));
    }
    out
}

/// A random shift out of `source` moving every prime leg at most `reach` sites.
/// Target dimensions stay at most `max_target`.
pub fn shift<R: Rng>(rng: &mut R, source: &Arc<SpinSystem>, field: Field, reach: usize, max_target: usize) -> Result<Homo, Error> {
    let n = source.len();
    let legs = PrimeLegs::of(source);
    'retry: loop {
        let mut r = vec![1usize; n];
        let mut dest = Vec::new();
        for x in 0..n {
            for &p in &legs.legs[x] {
                let lo = x.saturating_sub(reach);
                let hi = (x + reach).min(n - 1);
                let y = rng.gen_range(lo..=hi);
                r[y] *= p as usize;
                if r[y] > max_target {
                    continue 'retry;
                }
                dest.push((p, x, y));
            }
        }
        let target = Arc::new(SpinSystem::new(source.space().clone(), r)?);
        let tl = PrimeLegs::of(&target);
        let mut taken: Vec<Vec<bool>> = tl.legs.iter().map(|l| vec![false; l.len()]).collect();
        let mut moves = Vec::new();
        let mut from_leg = vec![0usize; n];
        for (p, x, y) in dest {
            let t = (0..tl.legs[y].len()).find(|&t| tl.legs[y][t] == p && !taken[y][t]).expect("target carries the leg");
            taken[y][t] = true;
            moves.push(LegMove { prime: p, from_site: x, from_leg: from_leg[x], to_site: y, to_leg: t });
            from_leg[x] += 1;
        }
        return shift_from_moves(source, &target, field, &moves);
    }
}
