//! The Heisenberg-type groups Gamma(s), their order-3 automorphism and its fixed points.

use mutower::propgroups::{
    fixed_points, frobenius_check, nilpotency_class, sigma_gamma, uniformity_check, FiniteQuotient, FixMode,
    GroupLaw,
};

fn main() -> mutower::error::Result<()> {
    let p = 7;
    for s in 0..3 {
        let law = GroupLaw::Gamma { s };
        let u = uniformity_check(law, p, 3)?;
        println!("Gamma({s}): powerful = {}, uniform = {}", u.powerful, u.uniform);
    }

    let law = GroupLaw::Gamma { s: 0 };
    let sigma = sigma_gamma(p, 0, 6)?;
    for n in 1..=6 {
        let fix = fixed_points(&FiniteQuotient::new(law, p, n)?, &sigma, FixMode::Graded)?;
        println!("level {n}: fixed points trivial = {:?}", fix.trivial);
    }

    let q = FiniteQuotient::new(law, p, 1)?;
    let fr = frobenius_check(&q, &sigma_gamma(p, 0, 1)?, 3)?;
    println!("Gamma(0)/Gamma_2 x| <sigma> Frobenius: {}", fr.frobenius);
    println!("class of Gamma(0)/Gamma_3: {}", nilpotency_class(&FiniteQuotient::new(law, p, 2)?).class);
    Ok(())
}
