//! Independent check of a computed recession cone.
//!
//! Verifies the exact result for the linear fixture, then drops one outer
//! generator and shows that the recession check catches it.

use vop_recession::testkit::{verify_approximation, VerificationReport, VerifyOptions};
use vop_recession::{io, recession, ClarabelBackend, RecessionOptions};

fn summary(label: &str, r: &VerificationReport) {
    println!(
        "{label}: {} bounded / {} unbounded / {} abstained, Hausdorff {:.2e} (limit {:.2e}), {} violations -> {}",
        r.bounded,
        r.unbounded,
        r.abstained,
        r.hausdorff_estimate,
        r.hausdorff_limit,
        r.violations.len(),
        if r.passed() { "pass" } else { "fail" }
    );
}

fn main() -> vop_recession::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/biobjective_lp.json").into()
    });
    let problem = io::read_problem(&path)?;
    let backend = ClarabelBackend::default();
    let opts = VerifyOptions {
        samples: 2000,
        ..Default::default()
    };

    let approx = recession(&problem, RecessionOptions::default(), &backend)?;
    summary(
        "computed",
        &verify_approximation(&problem, &approx, opts, &backend)?,
    );

    let mut broken = approx.clone();
    broken.outer.pop();
    let report = verify_approximation(&problem, &broken, opts, &backend)?;
    summary("one generator dropped", &report);
    if let Some(v) = report.violations.first() {
        println!(
            "  first violation: {} at {:?} (distance {:.3})",
            v.check, v.point, v.amount
        );
    }
    Ok(())
}
