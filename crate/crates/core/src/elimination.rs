//! Searching for twist-difference schedules that isolate commutator
//! coefficients.
//!
//! Start from a symbolic `z = Σ c_p [x_i,x_j]` with one unknown `c_p` per
//! non-related pair. Any subgroup containing `z` and closed under the twists
//! also contains `(φ_1 - 1)...(φ_k - 1) z`. When such a composite collapses to
//! `±c_p [x_i,x_j]` on a single non-related basis commutator, and the
//! subgroup only contains `t [x_i,x_j]` for `m | t`, the unknown `c_p` is
//! forced to vanish modulo `m`. Eliminating unknowns one at a time proves
//! that the non-related commutators stay independent of rank `2g^2 - 2g`.

use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::nil2::PairIndexSet;
use crate::twist::{InducedAction, TwistName};
use crate::word::SurfaceContext;

/// Visited-state budget per elimination round.
const STATE_BUDGET: usize = 500_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EliminationStep {
    /// The coefficient `c_{i,j}` that this step forces to zero.
    pub target: (u32, u32),
    /// Operators in application order: the first entry acts first.
    pub operators: Vec<String>,
    /// The basis commutator the composite lands on.
    pub landing: (u32, u32),
    /// The composite equals `multiple · c_target · [landing]`.
    pub multiple: i64,
}

/// Support of `(τ_2 - 1) z`: which unknowns survive and where they land.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FirstStepShape {
    pub operator: String,
    pub unknowns: Vec<(u32, u32)>,
    pub landing: Vec<(u32, u32)>,
    /// All surviving unknowns share one first index.
    pub single_row: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EliminationCertificate {
    pub genus: u32,
    pub unknowns: usize,
    pub steps: Vec<EliminationStep>,
    pub first_step: FirstStepShape,
}

impl EliminationCertificate {
    /// Every non-related coefficient is eliminated exactly once, by a unit multiple.
    pub fn is_complete(&self) -> bool {
        let mut seen: Vec<_> = self.steps.iter().map(|s| s.target).collect();
        seen.sort();
        seen.dedup();
        seen.len() == self.unknowns
            && self.steps.len() == self.unknowns
            && self.steps.iter().all(|s| s.multiple.abs() == 1)
    }
}

/// Symbolic commutator vector: `pairs × unknowns`, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Symbolic {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl Symbolic {
    fn apply(&self, op: &[Vec<i64>]) -> Option<Symbolic> {
        let mut data = vec![0i64; self.data.len()];
        for (r, op_row) in op.iter().enumerate() {
            for (k, &a) in op_row.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for c in 0..self.cols {
                    let v = self.data[k * self.cols + c];
                    if v != 0 {
                        let slot = &mut data[r * self.cols + c];
                        *slot = slot.checked_add(a.checked_mul(v)?)?;
                    }
                }
            }
        }
        Some(Symbolic { data, ..*self })
    }

    fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// `(row, col, value)` if exactly one entry is nonzero.
    fn single_entry(&self) -> Option<(usize, usize, i64)> {
        let mut found = None;
        for (k, &v) in self.data.iter().enumerate() {
            if v != 0 {
                if found.is_some() {
                    return None;
                }
                found = Some((k / self.cols, k % self.cols, v));
            }
        }
        found
    }
}

/// Run the elimination with search depth at most `max_depth` per round
/// (`4g` when `None`).
pub fn elimination_certificate(
    ctx: &SurfaceContext,
    max_depth: Option<usize>,
) -> Result<EliminationCertificate> {
    let g = ctx.genus();
    let max_depth = max_depth.unwrap_or(4 * g as usize);
    let pairs = PairIndexSet::new(ctx);
    let pair_list: Vec<(u32, u32)> = pairs.pairs().collect();
    let unknowns = pairs.nonrelated_indices();
    let names = TwistName::all(ctx);
    let ops = names
        .iter()
        .map(|&n| Ok(InducedAction::for_twist(n, ctx)?.difference_matrix()))
        .collect::<Result<Vec<_>>>()?;

    let rows = pair_list.len();
    let cols = unknowns.len();
    let mut z = Symbolic {
        rows,
        cols,
        data: vec![0; rows * cols],
    };
    for (c, &p) in unknowns.iter().enumerate() {
        z.data[p * cols + c] = 1;
    }

    let first_step = first_step_shape(&z, &ops[1], &pair_list, &unknowns, names[1]);

    let mut alive: Vec<bool> = vec![true; cols];
    let mut steps = Vec::with_capacity(cols);
    while alive.iter().any(|&a| a) {
        let (seq, row, col, value) = search_round(&z, &ops, &pairs, &pair_list, max_depth)
            .ok_or_else(|| {
                let open: Vec<String> = (0..cols)
                    .filter(|&c| alive[c])
                    .map(|c| format!("{:?}", pair_list[unknowns[c]]))
                    .collect();
                Error::SearchFailure(format!(
                    "no schedule up to depth {max_depth} for coefficients {}",
                    open.join(", ")
                ))
            })?;
        steps.push(EliminationStep {
            target: pair_list[unknowns[col]],
            operators: seq.iter().map(|&k| names[k].to_string()).collect(),
            landing: pair_list[row],
            multiple: value,
        });
        alive[col] = false;
        for r in 0..rows {
            z.data[r * cols + col] = 0;
        }
    }

    Ok(EliminationCertificate {
        genus: g,
        unknowns: cols,
        steps,
        first_step,
    })
}

/// Breadth-first over operator sequences; returns the first composite that
/// isolates a single unknown with a unit coefficient on a non-related pair.
fn search_round(
    start: &Symbolic,
    ops: &[Vec<Vec<i64>>],
    pairs: &PairIndexSet,
    pair_list: &[(u32, u32)],
    max_depth: usize,
) -> Option<(Vec<usize>, usize, usize, i64)> {
    let mut visited: HashSet<Symbolic> = HashSet::from([start.clone()]);
    let mut queue: VecDeque<(Symbolic, Vec<usize>)> = VecDeque::from([(start.clone(), Vec::new())]);
    while let Some((state, seq)) = queue.pop_front() {
        if seq.len() >= max_depth {
            continue;
        }
        for (k, op) in ops.iter().enumerate() {
            let Some(next) = state.apply(op) else {
                continue;
            };
            if next.is_zero() || !visited.insert(next.clone()) {
                continue;
            }
            let mut next_seq = seq.clone();
            next_seq.push(k);
            if let Some((row, col, value)) = next.single_entry() {
                let (i, j) = pair_list[row];
                if value.abs() == 1 && !pairs.is_related(i, j) {
                    return Some((next_seq, row, col, value));
                }
            }
            if visited.len() > STATE_BUDGET {
                return None;
            }
            queue.push_back((next, next_seq));
        }
    }
    None
}

fn first_step_shape(
    z: &Symbolic,
    op: &[Vec<i64>],
    pair_list: &[(u32, u32)],
    unknowns: &[usize],
    name: TwistName,
) -> FirstStepShape {
    let image = z.apply(op).expect("small entries");
    let mut unknown_set: Vec<(u32, u32)> = Vec::new();
    let mut landing: Vec<(u32, u32)> = Vec::new();
    for r in 0..image.rows {
        for c in 0..image.cols {
            if image.data[r * image.cols + c] != 0 {
                unknown_set.push(pair_list[unknowns[c]]);
                landing.push(pair_list[r]);
            }
        }
    }
    unknown_set.sort();
    unknown_set.dedup();
    landing.sort();
    landing.dedup();
    let single_row = unknown_set.windows(2).all(|w| w[0].0 == w[1].0) && !unknown_set.is_empty();
    FirstStepShape {
        operator: name.to_string(),
        unknowns: unknown_set,
        landing,
        single_row,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_two_and_three_complete() {
        for (g, expected) in [(2, 4), (3, 12)] {
            let ctx = SurfaceContext::new(g).unwrap();
            let cert = elimination_certificate(&ctx, None).unwrap();
            assert_eq!(cert.unknowns, expected);
            assert!(cert.is_complete(), "{cert:?}");
            assert!(cert.steps.iter().all(|s| s.operators.len() <= 4 * g as usize));
        }
    }

    #[test]
    fn first_step_is_one_row() {
        let ctx = SurfaceContext::new(3).unwrap();
        let cert = elimination_certificate(&ctx, None).unwrap();
        let fs = &cert.first_step;
        assert_eq!(fs.operator, "t2");
        assert!(fs.single_row);
        assert_eq!(fs.unknowns, vec![(1, 3), (1, 4), (1, 5), (1, 6)]);
        assert_eq!(fs.landing, vec![(2, 3), (2, 4), (2, 5), (2, 6)]);
    }

    #[test]
    fn depth_zero_fails_loudly() {
        let ctx = SurfaceContext::new(2).unwrap();
        assert!(matches!(
            elimination_certificate(&ctx, Some(0)),
            Err(Error::SearchFailure(_))
        ));
    }
}
