//! The full chain complex of a finite space: `∂∂ = 0` and its homology.

use qcalab::coarse::{boundary_n, ch_n_finite, ChainN};

fn main() -> Result<(), qcalab::Error> {
    let mut c = ChainN::new(2);
    c.add_term(vec![0, 1, 2], 1);
    c.add_term(vec![1, 1, 3], -2);
    c.add_term(vec![2, 0, 0], 5);
    let d = boundary_n(&c);
    println!("∂c has {} terms; ∂∂c is zero: {}", d.terms.len(), boundary_n(&d).is_zero());
    for sites in 0..=4 {
        let groups: Vec<String> = (0..=2).map(|n| ch_n_finite(sites, n).map(|g| g.to_string())).collect::<Result<_, _>>()?;
        println!("{sites} sites: CH_0, CH_1, CH_2 = {}", groups.join(", "));
    }
    Ok(())
}
