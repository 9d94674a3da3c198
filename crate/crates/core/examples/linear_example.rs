//! Exact recession cone of a bi-objective linear program.
//!
//! Loads the five-constraint example from `fixtures/biobjective_lp.json` (or a
//! file given on the command line), solves the two scalar LPs for the weight
//! interval, computes the recession cone by polyhedral projection and prints
//! the generators as CSV.

use vop_recession::{io, lambda_interval, recession_lvop, ClarabelBackend, Problem};

fn main() -> vop_recession::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/biobjective_lp.json").into()
    });
    let Problem::Linear(p) = io::read_problem(&path)? else {
        panic!("{path} is not a linear problem");
    };
    let backend = ClarabelBackend::default();

    if p.q() == 2 {
        let li = lambda_interval(&p, &backend)?;
        println!(
            "weights w(l) = l e1 + (1 - l) e2 bounded for l in [{:.6}, {:.6}]",
            li.min, li.max
        );
    }

    let approx = recession_lvop(&p)?;
    println!("exact: {}  flags: {:?}", approx.exact, approx.flags);
    print!("{}", io::generators_csv(&approx));

    // rescale each outer ray so its smallest nonzero entry is +-1
    for y in approx.outer_rays() {
        let m = y
            .iter()
            .filter(|v| v.abs() > 1e-12)
            .fold(f64::INFINITY, |a, v| a.min(v.abs()));
        println!(
            "recession direction {:?}",
            (y / m)
                .iter()
                .map(|v| (v * 1e6).round() / 1e6)
                .collect::<Vec<_>>()
        );
    }
    Ok(())
}
