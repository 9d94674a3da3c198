//! Outer approximation of the recession cone of a semidefinite problem.
//!
//! Runs the cutting loop on the capped weight body for two tolerances and
//! reports how the inner and outer generator sets grow, then writes plot
//! polylines for the finer run.
//!
//! ```text
//! cargo run --example semidefinite_example [problem.json] [plot.json]
//! ```

use std::time::Instant;

use vop_recession::recession::approximate_wc;
use vop_recession::{io, plot, recession_sdvp, ClarabelBackend, Problem, RecessionOptions};

fn main() -> vop_recession::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/sdp_p1.json").into());
    let Problem::Semidefinite(p) = io::read_problem(&path)? else {
        panic!("{path} is not a semidefinite problem");
    };
    let backend = ClarabelBackend::default();

    let mut last = None;
    for delta in [0.08, 0.01] {
        let opts = RecessionOptions {
            delta,
            ..Default::default()
        };
        let t = Instant::now();
        let body = approximate_wc(&p, opts, &backend)?;
        println!(
            "delta {delta}: {} iterations, {} inner points, {} cuts, achieved {:.4}, {:.2?}",
            body.iterations,
            body.inner.len(),
            body.outer.len(),
            body.achieved_delta,
            t.elapsed()
        );
        println!(
            "  gap history {:?}",
            body.history
                .iter()
                .map(|h| (h * 1e4).round() / 1e4)
                .collect::<Vec<_>>()
        );

        let approx = recession_sdvp(&p, opts, &backend)?;
        println!(
            "  {} weight generators, {} recession generators",
            approx.inner.len(),
            approx.outer.len()
        );
        for y in approx.outer_rays() {
            println!("    y = [{:>8.4} {:>8.4} {:>8.4}]", y[0], y[1], y[2]);
        }
        last = Some(approx);
    }

    if let (Some(out), Some(approx)) = (args.next(), last) {
        let data = plot::plot_data(&approx)?;
        std::fs::write(
            &out,
            serde_json::to_string_pretty(&data).expect("plot data serializes"),
        )?;
        println!("wrote {out}");
    }
    Ok(())
}
