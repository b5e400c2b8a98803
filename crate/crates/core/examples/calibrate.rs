//! Weight-range calibration scan for the focused configuration.
//!
//! ```text
//! cargo run --release -p intsnn-core --example calibrate -- -4 4 [masters]
//! ```
//!
//! For each master seed in `1..=masters` (default 16) runs the focused
//! experiment at bits 4, 8 and 16 and reports how many bit cells land in the
//! firing-rate band [0.25, 0.55] with std <= 0.15, and how many have a median
//! period in [2, 64].

use intsnn_core::sweep::{run_focused, SweepGrid};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.len() < 2 {
        eprintln!("usage: calibrate LO HI [MASTERS]");
        std::process::exit(2);
    }
    let lo: i64 = args[0].parse().expect("LO is an integer");
    let hi: i64 = args[1].parse().expect("HI is an integer");
    let masters: u64 = args
        .get(2)
        .map_or(16, |m| m.parse().expect("MASTERS is an integer"));

    let (mut period_ok, mut rate_ok, mut cells) = (0, 0, 0);
    let mut rates = Vec::new();
    let mut medians = Vec::new();
    for master in 1..=masters {
        let grid = SweepGrid {
            weight_range: (lo, hi),
            master_seed: master,
            ..SweepGrid::focused(vec![4, 8, 16])
        };
        let result = run_focused(&grid, 0).expect("valid grid");
        for row in &result.summary {
            cells += 1;
            if let Some(m) = row.median_cycle {
                medians.push(m);
                period_ok += usize::from((2.0..=64.0).contains(&m));
            }
            rate_ok += usize::from(
                (0.25..=0.55).contains(&row.mean_firing_rate) && row.std_firing_rate <= 0.15,
            );
            rates.push(row.mean_firing_rate);
        }
    }
    medians.sort_by(f64::total_cmp);
    let mean_rate = rates.iter().sum::<f64>() / rates.len() as f64;
    println!(
        "[{lo},{hi}] cells {cells} rate_ok {rate_ok} period_ok {period_ok} mean_rate {mean_rate:.3} median_of_medians {:?}",
        medians.get(medians.len() / 2)
    );
}
