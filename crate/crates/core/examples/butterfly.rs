//! Prints the butterfly dataset for q ≤ 6 as CSV.

use magwalk::butterfly;

fn main() -> magwalk::Result<()> {
    let b = butterfly(6, 32)?;
    b.write_csv(std::io::stdout().lock())?;
    eprintln!("{} arcs over {} fluxes", b.rows.len(), magwalk::Flux::enumerate(6).len());
    Ok(())
}
