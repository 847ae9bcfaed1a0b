//! Normal forms in the class-2 quotient `π/π^[3]` of the surface group.
//!
//! Every element is written uniquely as
//! `x1^n1 ... x{2g}^n{2g} · Π [x_i,x_j]^m_ij`, the product running over all
//! pairs `i < j` except `(2g-1, 2g)`. That last commutator is eliminated with
//! the relator, which is where the correction term on related pairs in
//! [`Nil2Element::multiply`] comes from.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json::big_to_json;
use crate::word::{SurfaceContext, Word};

/// The commutator coordinates `(i, j)`, `1 <= i < j <= 2g`, lexicographic,
/// without `(2g-1, 2g)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PairIndexSet {
    genus: u32,
}

impl PairIndexSet {
    pub fn new(ctx: &SurfaceContext) -> Self {
        Self { genus: ctx.genus() }
    }

    fn gens(&self) -> usize {
        2 * self.genus as usize
    }

    pub fn len(&self) -> usize {
        let n = self.gens();
        n * (n - 1) / 2 - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        let n = self.gens() as u32;
        (1..n)
            .flat_map(move |i| (i + 1..=n).map(move |j| (i, j)))
            .filter(move |&(i, j)| !(i == n - 1 && j == n))
    }

    /// Position of `(i, j)`; `None` for the excluded pair or invalid input.
    pub fn index_of(&self, i: u32, j: u32) -> Option<usize> {
        let n = self.gens();
        let (i, j) = (i as usize, j as usize);
        if i == 0 || i >= j || j > n || (i == n - 1 && j == n) {
            return None;
        }
        Some((i - 1) * n - (i - 1) * i / 2 + (j - i - 1))
    }

    pub fn pair_at(&self, index: usize) -> (u32, u32) {
        self.pairs().nth(index).expect("pair index in range")
    }

    /// `(2h-1, 2h)` for some `1 <= h <= g-1`.
    pub fn is_related(&self, i: u32, j: u32) -> bool {
        is_related(self.genus, i, j)
    }

    /// Indices of the related pairs `(1,2), (3,4), ..., (2g-3, 2g-2)`.
    pub fn related_indices(&self) -> Vec<usize> {
        (1..self.genus)
            .map(|h| self.index_of(2 * h - 1, 2 * h).unwrap())
            .collect()
    }

    /// Indices of the non-related pairs.
    pub fn nonrelated_indices(&self) -> Vec<usize> {
        self.pairs()
            .enumerate()
            .filter(|&(_, (i, j))| !self.is_related(i, j))
            .map(|(k, _)| k)
            .collect()
    }
}

pub(crate) fn is_related(genus: u32, i: u32, j: u32) -> bool {
    i % 2 == 1 && j == i + 1 && j <= 2 * (genus - 1)
}

/// An element of `π/π^[3]` in normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Nil2Element {
    ctx: SurfaceContext,
    n: Vec<BigInt>,
    m: Vec<BigInt>,
}

impl Nil2Element {
    pub fn identity(ctx: &SurfaceContext) -> Self {
        let pairs = PairIndexSet::new(ctx);
        Self {
            ctx: *ctx,
            n: vec![BigInt::zero(); ctx.generator_count() as usize],
            m: vec![BigInt::zero(); pairs.len()],
        }
    }

    /// The class of `x_index`.
    pub fn generator(ctx: &SurfaceContext, index: u32) -> Result<Self> {
        ctx.check_index(index)?;
        let mut e = Self::identity(ctx);
        e.n[index as usize - 1] = BigInt::one();
        Ok(e)
    }

    /// The basis commutator `[x_i, x_j]` for a pair in the index set.
    pub fn basis_commutator(ctx: &SurfaceContext, i: u32, j: u32) -> Option<Self> {
        let k = PairIndexSet::new(ctx).index_of(i, j)?;
        let mut e = Self::identity(ctx);
        e.m[k] = BigInt::one();
        Some(e)
    }

    pub fn from_parts(ctx: &SurfaceContext, n: Vec<BigInt>, m: Vec<BigInt>) -> Result<Self> {
        let pairs = PairIndexSet::new(ctx);
        if n.len() != ctx.generator_count() as usize || m.len() != pairs.len() {
            return Err(Error::Parse {
                pos: 0,
                msg: format!(
                    "expected {} n-coordinates and {} m-coordinates, got {} and {}",
                    ctx.generator_count(),
                    pairs.len(),
                    n.len(),
                    m.len()
                ),
            });
        }
        Ok(Self { ctx: *ctx, n, m })
    }

    /// Central element with the given commutator coordinates.
    pub fn from_commutators(ctx: &SurfaceContext, m: Vec<BigInt>) -> Result<Self> {
        Self::from_parts(ctx, vec![BigInt::zero(); ctx.generator_count() as usize], m)
    }

    pub fn ctx(&self) -> &SurfaceContext {
        &self.ctx
    }

    pub fn genus(&self) -> u32 {
        self.ctx.genus()
    }

    pub fn pairs(&self) -> PairIndexSet {
        PairIndexSet::new(&self.ctx)
    }

    pub fn n(&self) -> &[BigInt] {
        &self.n
    }

    pub fn m(&self) -> &[BigInt] {
        &self.m
    }

    /// `n_i`, 1-based.
    pub fn n_at(&self, i: u32) -> &BigInt {
        &self.n[i as usize - 1]
    }

    /// `m_{i,j}`; `None` outside the pair index set.
    pub fn m_at(&self, i: u32, j: u32) -> Option<&BigInt> {
        self.pairs().index_of(i, j).map(|k| &self.m[k])
    }

    pub fn is_identity(&self) -> bool {
        self.n.iter().all(Zero::is_zero) && self.m.iter().all(Zero::is_zero)
    }

    /// Zero abelianisation, i.e. the element lies in `π^[2]/π^[3]`.
    pub fn is_commutator(&self) -> bool {
        self.n.iter().all(Zero::is_zero)
    }

    pub fn multiply(&self, rhs: &Self) -> Result<Self> {
        self.ctx.ensure_same(&rhs.ctx)?;
        Ok(self.multiply_with_correction(rhs, 1))
    }

    /// The multiplication law with the relator correction scaled by `sign`.
    /// Only `sign = 1` is the group law; other values exist for fault-injection
    /// tests of the verifier.
    pub(crate) fn multiply_with_correction(&self, rhs: &Self, sign: i32) -> Self {
        let g = self.genus();
        let last = 2 * g as usize;
        // (n, m) · (k, l)
        let (n, m) = (&self.n, &self.m);
        let (k, l) = (&rhs.n, &rhs.m);
        let correction = &k[last - 2] * &n[last - 1] * sign;
        let n_out: Vec<BigInt> = n.iter().zip(k).map(|(a, b)| a + b).collect();
        let m_out = self
            .pairs()
            .pairs()
            .enumerate()
            .map(|(p, (i, j))| {
                let mut v = &m[p] + &l[p];
                let (ki, nj) = (&k[i as usize - 1], &n[j as usize - 1]);
                if !ki.is_zero() && !nj.is_zero() {
                    v -= ki * nj;
                }
                if is_related(g, i, j) {
                    v += &correction;
                }
                v
            })
            .collect();
        Self {
            ctx: self.ctx,
            n: n_out,
            m: m_out,
        }
    }

    /// Closed form: `n ↦ -n`, `m_ij ↦ -m_ij - n_i n_j + δ̃_ij n_{2g-1} n_{2g}`.
    pub fn inverse(&self) -> Self {
        self.power(&BigInt::from(-1))
    }

    /// Closed form valid for every integer `p`:
    /// `n ↦ p n`, `m_ij ↦ p m_ij + C(p,2) (-n_i n_j + δ̃_ij n_{2g-1} n_{2g})`.
    pub fn power(&self, p: &BigInt) -> Self {
        let g = self.genus();
        let last = 2 * g as usize;
        let binom = p * (p - 1) / 2;
        let tail = &self.n[last - 2] * &self.n[last - 1];
        let n = self.n.iter().map(|a| a * p).collect();
        let m = self
            .pairs()
            .pairs()
            .enumerate()
            .map(|(k, (i, j))| {
                let mut q = -(&self.n[i as usize - 1] * &self.n[j as usize - 1]);
                if is_related(g, i, j) {
                    q += &tail;
                }
                &self.m[k] * p + &binom * q
            })
            .collect();
        Self {
            ctx: self.ctx,
            n,
            m,
        }
    }

    pub fn pow(&self, p: i64) -> Self {
        self.power(&BigInt::from(p))
    }

    /// Left fold of the multiplication law over the letters of `w`.
    pub fn evaluate(ctx: &SurfaceContext, w: &Word) -> Result<Self> {
        w.check_context(ctx)?;
        Ok(Self::evaluate_with(ctx, w, 1))
    }

    pub(crate) fn evaluate_with(ctx: &SurfaceContext, w: &Word, sign: i32) -> Self {
        let gens: Vec<(Self, Self)> = (1..=ctx.generator_count())
            .map(|i| {
                let x = Self::generator(ctx, i).unwrap();
                let xi = x.inverse();
                (x, xi)
            })
            .collect();
        w.letters().iter().fold(Self::identity(ctx), |acc, l| {
            let (x, xi) = &gens[l.index as usize - 1];
            acc.multiply_with_correction(if l.inverse { xi } else { x }, sign)
        })
    }

    /// `[a, b] = a⁻¹ b⁻¹ a b`.
    pub fn commutator_class(&self, other: &Self) -> Result<Self> {
        let left = self.inverse().multiply(&other.inverse())?;
        left.multiply(&self.multiply(other)?)
    }

    /// Canonical structured form, zero commutator exponents omitted.
    pub fn to_json(&self) -> Value {
        let m: Vec<Value> = self
            .pairs()
            .pairs()
            .zip(&self.m)
            .filter(|(_, e)| !e.is_zero())
            .map(|((i, j), e)| json!({"i": i, "j": j, "e": big_to_json(e)}))
            .collect();
        json!({
            "genus": self.genus(),
            "n": self.n.iter().map(big_to_json).collect::<Vec<_>>(),
            "m": m,
        })
    }
}

impl Mul for &Nil2Element {
    type Output = Nil2Element;

    fn mul(self, rhs: &Nil2Element) -> Nil2Element {
        self.multiply(rhs).expect("operands from the same surface")
    }
}

impl fmt::Display for Nil2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n: Vec<String> = self.n.iter().map(|v| v.to_string()).collect();
        write!(f, "n=({}) m={{", n.join(","))?;
        let mut first = true;
        for ((i, j), e) in self.pairs().pairs().zip(&self.m) {
            if e.is_zero() {
                continue;
            }
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "({i},{j}):{e}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(g: u32) -> SurfaceContext {
        SurfaceContext::new(g).unwrap()
    }

    fn ev(text: &str, g: u32) -> Nil2Element {
        let c = ctx(g);
        Nil2Element::evaluate(&c, &Word::parse(text, &c).unwrap()).unwrap()
    }

    fn elem(g: u32, n: &[i64], m: &[((u32, u32), i64)]) -> Nil2Element {
        let c = ctx(g);
        let mut e = Nil2Element::identity(&c);
        for (k, &v) in n.iter().enumerate() {
            e.n[k] = BigInt::from(v);
        }
        for &((i, j), v) in m {
            let k = e.pairs().index_of(i, j).unwrap();
            e.m[k] = BigInt::from(v);
        }
        e
    }

    #[test]
    fn pair_index_set_layout() {
        let p = PairIndexSet::new(&ctx(2));
        let pairs: Vec<_> = p.pairs().collect();
        assert_eq!(pairs, vec![(1, 2), (1, 3), (1, 4), (2, 3), (2, 4)]);
        for (k, &(i, j)) in pairs.iter().enumerate() {
            assert_eq!(p.index_of(i, j), Some(k));
        }
        assert_eq!(p.index_of(3, 4), None);
        assert_eq!(p.index_of(2, 2), None);
        for g in 2..=6 {
            let p = PairIndexSet::new(&ctx(g));
            let n = 2 * g as usize;
            assert_eq!(p.len(), n * (n - 1) / 2 - 1);
            assert_eq!(p.pairs().count(), p.len());
            for (k, (i, j)) in p.pairs().enumerate() {
                assert_eq!(p.index_of(i, j), Some(k));
            }
            assert_eq!(p.related_indices().len(), g as usize - 1);
            assert_eq!(p.nonrelated_indices().len(), 2 * (g * g - g) as usize);
        }
        let p3 = PairIndexSet::new(&ctx(3));
        assert!(p3.is_related(3, 4));
        assert!(!p3.is_related(5, 6));
        assert!(!p3.is_related(2, 3));
    }

    #[test]
    fn identity_examples() {
        let c = ctx(2);
        let id = Nil2Element::identity(&c);
        assert_eq!(id.n().len(), 4);
        assert_eq!(id.m().len(), 5);
        assert!(id.is_identity());
        assert_eq!(id.inverse(), id);
        let a = elem(2, &[3, -1, 2, 5], &[((1, 3), 4)]);
        assert_eq!(&id * &a, a);
        assert_eq!(&a * &id, a);
    }

    #[test]
    fn multiply_examples() {
        let a = ev("x1 x2", 2);
        assert_eq!(&a * &a, elem(2, &[2, 2, 0, 0], &[((1, 2), -1)]));
        // [x3,x4] by left fold: the excluded pair reappears on (1,2), negated.
        let x3 = ev("x3", 2);
        let x4 = ev("x4", 2);
        let c = &(&x3.inverse() * &x4.inverse()) * &(&x3 * &x4);
        assert_eq!(c, elem(2, &[0; 4], &[((1, 2), -1)]));
    }

    #[test]
    fn context_mismatch() {
        let a = Nil2Element::identity(&ctx(2));
        let b = Nil2Element::identity(&ctx(3));
        assert_eq!(a.multiply(&b), Err(Error::ContextMismatch { left: 2, right: 3 }));
    }

    #[test]
    fn inverse_examples() {
        let x1 = ev("x1", 2);
        assert_eq!(x1.inverse(), elem(2, &[-1, 0, 0, 0], &[]));
        let a = ev("x1 x2", 2);
        let ai = a.inverse();
        assert_eq!(ai, elem(2, &[-1, -1, 0, 0], &[((1, 2), -1)]));
        assert!((&a * &ai).is_identity());
        assert!((&ai * &a).is_identity());
        // The correction term fires when n_{2g-1} n_{2g} != 0.
        let b = ev("x3 x4 x1", 2);
        assert!((&b * &b.inverse()).is_identity());
        assert!((&b.inverse() * &b).is_identity());
    }

    #[test]
    fn power_examples() {
        let a = ev("x1 x2", 2);
        assert!(a.pow(0).is_identity());
        assert_eq!(a.pow(1), a);
        assert_eq!(a.pow(4), elem(2, &[4, 4, 0, 0], &[((1, 2), -6)]));
        let b = elem(3, &[1, -2, 0, 3, 1, 1], &[((2, 5), 7)]);
        let mut acc = Nil2Element::identity(b.ctx());
        for p in 0..=8 {
            assert_eq!(b.pow(p), acc, "p = {p}");
            acc = &acc * &b;
        }
        let mut acc = Nil2Element::identity(b.ctx());
        for p in 0..=8 {
            assert_eq!(b.pow(-p), acc, "p = -{p}");
            acc = &acc * &b.inverse();
        }
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(ev("[x1,x2]", 2), elem(2, &[0; 4], &[((1, 2), 1)]));
        assert_eq!(ev("[x3,x4]", 2), elem(2, &[0; 4], &[((1, 2), -1)]));
        assert_eq!(ev("X1 X1 (x1 x2)^2 X2 X2", 2), elem(2, &[0; 4], &[((1, 2), -1)]));
        for g in 2..=6 {
            assert!(ev("relator", g).is_identity(), "g = {g}");
        }
    }

    #[test]
    fn commutator_class_examples() {
        let c = ctx(3);
        let id = Nil2Element::identity(&c);
        let x1 = ev("x1", 3);
        assert!(x1.commutator_class(&id).unwrap().is_identity());
        assert_eq!(ev("x1", 2).commutator_class(&ev("x2", 2)).unwrap(), elem(2, &[0; 4], &[((1, 2), 1)]));
        assert_eq!(x1.commutator_class(&ev("x3", 3)).unwrap(), elem(3, &[0; 6], &[((1, 3), 1)]));
    }

    #[test]
    fn json_shape() {
        let v = ev("[x1,x2]^3 x4", 2).to_json();
        assert_eq!(
            v.to_string(),
            r#"{"genus":2,"n":[0,0,0,1],"m":[{"i":1,"j":2,"e":3}]}"#
        );
    }

    #[test]
    fn display() {
        assert_eq!(ev("x1 [x1,x3]^2", 2).to_string(), "n=(1,0,0,0) m={(1,3):2}");
    }
}
