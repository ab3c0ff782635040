//! Frobenius census for the cubic subfield of Q(zeta_7).

use mutower::census::{census_summary, split_constant, AbelianField};

fn main() -> mutower::error::Result<()> {
    let cubic = AbelianField::new(7, &[1, 6])?;
    let s = census_summary(&cubic, 1_000_000)?;
    println!("x = 10^6: {} primes, inert density {:.4}", s.primes, s.inert_density);

    let c = split_constant(3, &cubic, 1_000_000_000, 8)?;
    for g in &c.grid {
        println!("  x = {:>10}: {:>3} inert q <= {:>4}, ratio {:.3}", g.x, g.count, g.y, g.ratio);
    }
    println!("min ratio {:.3}", c.min_ratio);
    Ok(())
}
