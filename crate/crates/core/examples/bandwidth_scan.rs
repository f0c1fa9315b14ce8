//! Spectral measure along the golden-mean convergents.

use magwalk::analysis::bandwidth_scan;
use magwalk::golden_convergents;

fn main() -> magwalk::Result<()> {
    let n_k: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(32);
    for e in bandwidth_scan(&golden_convergents(7), n_k)? {
        println!("{:>6}  measure {:.6}  arcs {}", e.flux.to_string(), e.measure, e.arcs);
    }
    Ok(())
}
