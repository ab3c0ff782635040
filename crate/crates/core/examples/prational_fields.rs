//! p-rationality of cyclotomic fields by both criteria, and regularity of small primes.

use mutower::numberfield::FieldDescriptor;
use mutower::prationality::{character_of_asp, is_regular_prime, test_numerical, test_theoretical, Subfield};

fn main() -> mutower::error::Result<()> {
    let k = FieldDescriptor::Cyclotomic(7);
    let r = test_numerical(&k, 37)?;
    println!("Q(zeta_7), p = 37: {:?} ({})", r.verdict, r.reason);
    println!("  e = {}, f = {}, g = {}", r.splitting.e, r.splitting.fres, r.splitting.g);

    for f in [7, 13] {
        let r = test_theoretical(&FieldDescriptor::Cyclotomic(f), 2)?;
        println!("Q(zeta_{f}), p = 2: {:?}", r.verdict);
    }

    let c = character_of_asp(&k, &Subfield::Quadratic(-7), 37)?;
    println!("character of A_Sp over Q(sqrt(-7)): {:?}", c.character.mult);

    let irregular: Vec<u64> = mutower::arith::primes_up_to(100)
        .into_iter()
        .filter(|&p| p > 2 && !is_regular_prime(p).map(|r| r.regular).unwrap_or(true))
        .collect();
    println!("irregular primes below 100: {irregular:?}");
    Ok(())
}
