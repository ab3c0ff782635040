//! Characters of cyclic groups: mirror identity, Koch-Shafarevich ranks, realizability.

use mutower::census::select_free_t;
use mutower::characters::{koch_shafarevich, mirror_split_scenario, realizability_check, KochShafarevichInput};

fn main() -> mutower::error::Result<()> {
    let sol = mirror_split_scenario(2, 3, 1)?;
    println!("chi(A_S^T) = {:?}, chi(A_T^S) = {:?}", sol.a_s_t.mult, sol.a_t_s.mult);

    for p in [5, 7, 11] {
        let ell = select_free_t(p, 500)?.primes[0];
        let ks = koch_shafarevich(KochShafarevichInput {
            r1: 0,
            r2: (p - 1) / 2,
            s: 1,
            t: 1,
            dp_a_ts: 0,
            local_degree_sum: p - 1,
        });
        println!("Q(zeta_{p}), T = {{{ell}}}: rank {}, free = {}", ks.rank, ks.free);
    }

    for n in 0..3 {
        let r = realizability_check(3, 3, 2, 7, n)?;
        println!("d = 3, [K_0':Q] = 2, p^{n}: embeddable = {}", r.embeddable);
    }
    Ok(())
}
