//! Two routes to the recession cone of a semidefinite problem: the capped
//! weight body `W ∩ {c'w <= 1}` and the base set `Lambda`.
//!
//! Only the first route carries a Hausdorff guarantee on the cone. The example
//! prints both generator sets and checks each outer ray of one against the
//! cone of the other.
//!
//! ```text
//! cargo run --example lambda_vs_wc [problem.json] [delta]
//! ```

use std::time::Instant;

use vop_recession::recession::recession_sdvp_lambda;
use vop_recession::testkit::cone_membership_residual;
use vop_recession::{io, recession_sdvp, ClarabelBackend, Problem, RecessionOptions};

fn main() -> vop_recession::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/sdp_p2.json").into());
    let delta: f64 = args
        .next()
        .map_or(0.005, |s| s.parse().expect("delta must be a number"));

    let Problem::Semidefinite(p) = io::read_problem(&path)? else {
        panic!("{path} is not a semidefinite problem");
    };
    let backend = ClarabelBackend::default();
    let opts = RecessionOptions {
        delta,
        ..Default::default()
    };

    let t = Instant::now();
    let wc = recession_sdvp(&p, opts, &backend)?;
    println!(
        "W_c route: {} outer rays, achieved {:.2e}, {:.2?}",
        wc.outer.len(),
        wc.achieved_delta,
        t.elapsed()
    );

    let t = Instant::now();
    let lam = recession_sdvp_lambda(&p, opts, &backend)?;
    println!(
        "Lambda route: {} outer rays, achieved {:.2e}, {:.2?}",
        lam.outer.len(),
        lam.achieved_delta,
        t.elapsed()
    );

    let wc_rays = wc.outer_rays();
    let lam_rays = lam.outer_rays();
    let worst = |rays: &[_], gens: &[_]| -> vop_recession::Result<f64> {
        rays.iter()
            .map(|y| cone_membership_residual(gens, y, &backend))
            .try_fold(0.0f64, |m, r| Ok(m.max(r?)))
    };
    println!(
        "Lambda rays outside W_c cone: residual {:.3e}",
        worst(&lam_rays, &wc_rays)?
    );
    println!(
        "W_c rays outside Lambda cone: residual {:.3e}",
        worst(&wc_rays, &lam_rays)?
    );
    for y in &wc_rays {
        println!("  wc     {:>9.5} {:>9.5} {:>9.5}", y[0], y[1], y[2]);
    }
    for y in &lam_rays {
        println!("  lambda {:>9.5} {:>9.5} {:>9.5}", y[0], y[1], y[2]);
    }
    Ok(())
}
