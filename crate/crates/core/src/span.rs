//! Subgroups of `π/K` generated by `e`-th powers.
//!
//! `π/K` is nilpotent of class 2 with cyclic commutator part, so a finitely
//! generated subgroup is described by an integer lattice (its image in the
//! abelianisation `Z^{2g}`) and a subgroup `c·Z/g` of the commutator part
//! (its intersection with the kernel of abelianisation).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::Result;
use crate::nil2::Nil2Element;
use crate::quotient::ModKElement;
use crate::word::{SurfaceContext, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSpan {
    /// Hermite normal form basis of the abelianised image, one row per pivot.
    pub lattice: Vec<Vec<BigInt>>,
    /// `c` with `c | g`; the commutator part is `{0, c, 2c, ...} ⊂ Z/g`.
    pub mk_step: u64,
    pub genus: u32,
}

impl PowerSpan {
    /// Elements of the commutator part, as residues mod `g`.
    pub fn mk_subgroup(&self) -> Vec<u64> {
        (0..self.genus as u64).step_by(self.mk_step as usize).collect()
    }

    /// Whether the lattice is `k·Z^{2g}`.
    pub fn lattice_is_scalar(&self, k: u64) -> bool {
        let dim = 2 * self.genus as usize;
        self.lattice.len() == dim
            && self.lattice.iter().enumerate().all(|(r, row)| {
                row.iter()
                    .enumerate()
                    .all(|(c, v)| *v == if r == c { BigInt::from(k) } else { BigInt::zero() })
            })
    }
}

/// The subgroup of `π/K` generated by the `e`-th powers of `catalog`.
pub fn gpower_span(ctx: &SurfaceContext, e: i64, catalog: &[Word]) -> Result<PowerSpan> {
    let gens = catalog
        .iter()
        .map(|w| Ok(ModKElement::project(&Nil2Element::evaluate(ctx, w)?).pow(e)))
        .collect::<Result<Vec<_>>>()?;
    Ok(subgroup_span(ctx, gens))
}

/// Span of all `e`-th powers: `e·Z^{2g}` and `gcd(g, e, e(e-1)/2)·Z/g`.
///
/// An `e`-th power of `(n, c)` is `(e n, e c + C(e,2) q(n))` where the
/// quadratic form `q` takes the value `-1` at `n = (1,1,0,...)`; products of
/// such powers only add multiples of `e^2`.
pub fn general_power_span(ctx: &SurfaceContext, e: u64) -> PowerSpan {
    let g = ctx.genus() as u64;
    let dim = 2 * ctx.genus() as usize;
    let lattice = (0..dim)
        .map(|r| {
            (0..dim)
                .map(|c| if r == c { BigInt::from(e) } else { BigInt::zero() })
                .collect()
        })
        .collect();
    PowerSpan {
        lattice,
        mk_step: g.gcd(&e).gcd(&(e * (e - 1) / 2)),
        genus: ctx.genus(),
    }
}

/// Row-reduce generators by group operations. Rows whose abelianisation
/// vanishes contribute their commutator part directly; the commutators of
/// the surviving pivot rows account for the rest.
pub(crate) fn subgroup_span(ctx: &SurfaceContext, gens: Vec<ModKElement>) -> PowerSpan {
    let g = ctx.genus() as u64;
    let dim = 2 * ctx.genus() as usize;
    let mut active: Vec<ModKElement> = gens;
    let mut pivots: Vec<ModKElement> = Vec::new();
    let mut central: Vec<u64> = Vec::new();

    for col in 0..dim {
        loop {
            active.retain(|a| {
                if a.n().iter().all(Zero::is_zero) {
                    central.push(a.mk());
                    false
                } else {
                    true
                }
            });
            let Some(p) = active
                .iter()
                .enumerate()
                .filter(|(_, a)| !a.n()[col].is_zero())
                .min_by_key(|(_, a)| a.n()[col].abs())
                .map(|(k, _)| k)
            else {
                break;
            };
            let pivot = active.swap_remove(p);
            let mut reduced_any = false;
            for a in active.iter_mut() {
                if a.n()[col].is_zero() {
                    continue;
                }
                let q = a.n()[col].div_floor(&pivot.n()[col]);
                let q = q.to_i64().expect("small quotient");
                *a = a.multiply(&pivot.pow(-q)).expect("same surface");
                reduced_any = true;
            }
            if !reduced_any || active.iter().all(|a| a.n()[col].is_zero()) {
                let pivot = if pivot.n()[col].is_negative() {
                    pivot.inverse()
                } else {
                    pivot
                };
                pivots.push(pivot);
                break;
            }
            active.push(pivot);
        }
    }
    for a in &active {
        // Anything left has zero abelianisation by now.
        debug_assert!(a.n().iter().all(Zero::is_zero));
        central.push(a.mk());
    }
    for (k, a) in pivots.iter().enumerate() {
        for b in &pivots[k + 1..] {
            let c = a
                .inverse()
                .multiply(&b.inverse())
                .and_then(|ab| ab.multiply(a))
                .and_then(|ab| ab.multiply(b))
                .expect("same surface");
            central.push(c.mk());
        }
    }
    let mk_step = central.into_iter().fold(g, |acc, c| acc.gcd(&c));

    PowerSpan {
        lattice: hermite_rows(pivots.iter().map(|p| p.n().to_vec()).collect(), dim),
        mk_step,
        genus: ctx.genus(),
    }
}

/// Canonical HNF of an echelon basis: positive pivots, entries above each
/// pivot reduced into `[0, pivot)`.
fn hermite_rows(mut rows: Vec<Vec<BigInt>>, dim: usize) -> Vec<Vec<BigInt>> {
    let lead = |r: &Vec<BigInt>| r.iter().position(|v| !v.is_zero()).unwrap_or(dim);
    rows.sort_by_key(lead);
    for k in 0..rows.len() {
        let col = lead(&rows[k]);
        if col == dim {
            continue;
        }
        let piv = rows[k][col].clone();
        for r in 0..k {
            let q = rows[r][col].div_floor(&piv);
            if !q.is_zero() {
                let pivot_row = rows[k].clone();
                for (x, y) in rows[r].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
            }
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(g: u32) -> SurfaceContext {
        SurfaceContext::new(g).unwrap()
    }

    fn catalog(g: u32, with_pair: bool) -> Vec<Word> {
        let mut words: Vec<Word> = (1..=2 * g).map(Word::generator).collect();
        if with_pair {
            words.push(Word::generator(1).concat(&Word::generator(2)));
        }
        words
    }

    #[test]
    fn odd_genus_generator_powers() {
        let s = gpower_span(&ctx(3), 3, &catalog(3, false)).unwrap();
        assert!(s.lattice_is_scalar(3));
        assert_eq!(s.mk_subgroup(), vec![0]);
    }

    #[test]
    fn genus_two_square_catches_commutator() {
        let s = gpower_span(&ctx(2), 2, &catalog(2, true)).unwrap();
        assert!(s.lattice_is_scalar(2));
        assert_eq!(s.mk_subgroup(), vec![0, 1]);
        // Without x1 x2 the squares only reach the trivial commutator part.
        let s = gpower_span(&ctx(2), 2, &catalog(2, false)).unwrap();
        assert_eq!(s.mk_subgroup(), vec![0]);
    }

    #[test]
    fn genus_four() {
        let s = gpower_span(&ctx(4), 4, &catalog(4, true)).unwrap();
        assert_eq!(s.mk_subgroup(), vec![0, 2]);
        assert_eq!(s, general_power_span(&ctx(4), 4));
    }

    #[test]
    fn hermite_form_is_canonical() {
        let c = ctx(2);
        let a = gpower_span(&c, 2, &[Word::parse("x1 x2", &c).unwrap(), Word::generator(2)]).unwrap();
        let b = gpower_span(&c, 2, &[Word::generator(1), Word::parse("x2 X1", &c).unwrap()]).unwrap();
        assert_eq!(a.lattice, b.lattice);
        assert_eq!(a.lattice.len(), 2);
    }
}
