//! Reference collector for `π/π^[3]`.
//!
//! Sorts the letters of a word into ascending generator order by adjacent
//! transpositions. Swapping `x_j^s x_i^t` (with `j > i`) into `x_i^t x_j^s`
//! leaves behind `[x_j^s, x_i^t] = [x_i,x_j]^(-st)`, which is central modulo
//! `π^[3]`. At the end the `[x_{2g-1},x_{2g}]` exponent is rewritten through
//! the relator. This route shares no code with the closed-form law in
//! [`crate::nil2`] and is used to cross-check it.

use num_bigint::BigInt;

use crate::error::Result;
use crate::nil2::{Nil2Element, PairIndexSet};
use crate::word::{SurfaceContext, Word};

pub fn collect(ctx: &SurfaceContext, w: &Word) -> Result<Nil2Element> {
    w.check_context(ctx)?;
    let gens = ctx.generator_count() as usize;
    // Full (i, j) table including the excluded pair; 1-based.
    let mut comm = vec![vec![0i128; gens + 1]; gens + 1];
    let mut letters: Vec<(usize, i128)> = w
        .letters()
        .iter()
        .map(|l| (l.index as usize, l.sign() as i128))
        .collect();

    // Bubble sort; each swap of an out-of-order adjacent pair records a commutator.
    let mut swapped = true;
    while swapped {
        swapped = false;
        for k in 1..letters.len() {
            let (j, s) = letters[k - 1];
            let (i, t) = letters[k];
            if j > i {
                comm[i][j] -= s * t;
                letters.swap(k - 1, k);
                swapped = true;
            }
        }
    }

    let mut n = vec![0i128; gens + 1];
    for (i, s) in letters {
        n[i] += s;
    }

    // [x_{2g-1}, x_{2g}] = Π_{h<g} [x_{2h-1}, x_{2h}]^{-1}
    let tail = comm[gens - 1][gens];
    comm[gens - 1][gens] = 0;
    for h in 1..ctx.genus() as usize {
        comm[2 * h - 1][2 * h] -= tail;
    }

    let pairs = PairIndexSet::new(ctx);
    let m = pairs
        .pairs()
        .map(|(i, j)| BigInt::from(comm[i as usize][j as usize]))
        .collect();
    let n = n[1..].iter().map(|&v| BigInt::from(v)).collect();
    Nil2Element::from_parts(ctx, n, m)
}
