//! p-adic integers at fixed precision: inverses, Teichmüller lifts, Hensel lifting.

use mutower::padic::PadicInt;
use num_bigint::BigInt;

fn main() -> mutower::error::Result<()> {
    let two = PadicInt::from_u64(7, 3, 2)?;
    println!("1/2 mod 7^3 = {}", two.inv()?.residue());

    let omega = two.teichmuller()?;
    println!("Teichmüller lift of 2 mod 7^3 = {} (cube = {})", omega.residue(), omega.pow_u64(3).residue());

    // x^2 + 1 over Z_5 starting from the root 2
    let f = [BigInt::from(1), BigInt::from(0), BigInt::from(1)];
    let i = PadicInt::hensel_lift(5, &f, 2, 6)?;
    println!("sqrt(-1) in Z_5 mod 5^6 = {}", i.residue());
    Ok(())
}
