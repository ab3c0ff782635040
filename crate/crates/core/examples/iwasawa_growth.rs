//! Coinvariant growth of a cyclic Lambda-module and its fitted mu and lambda.

use mutower::iwasawa::{coinvariant_growth, fit_invariants, parse_module, parse_series, weierstrass_prepare};

fn main() -> mutower::error::Result<()> {
    let expr = "p^2*(T^3+p*T+p)";
    let prep = weierstrass_prepare(&parse_series(expr, 3)?)?;
    println!("{expr}: mu = {}, lambda = {}", prep.mu, prep.lambda);
    println!("  distinguished part {}", prep.distinguished.to_string_t());

    let table = coinvariant_growth(&parse_module(expr, 3)?, 0..=6)?;
    for r in &table.rows {
        println!("  n = {}: dim = {}, log_3 |X_n| = {:?}", r.n, r.dim_fp, r.log_order);
    }
    let fit = fit_invariants(&table)?;
    println!("fit: r = {:?}, mu = {:?}, lambda = {:?}, nu = {:?}", fit.r, fit.mu, fit.lambda, fit.nu);
    Ok(())
}
