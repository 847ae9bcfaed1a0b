//! The quotients `π/K` and `π/π^e K`.
//!
//! `K` is the kernel of `π^[2] → Z/g` obtained by pairing commutators with
//! the intersection form. In the class-2 normal form this map just sums the
//! related coordinates `m_{2h-1,2h}` (`h < g`) modulo `g`; non-related
//! commutators die and all `[x_{2h-1}, x_{2h}]` are identified with `[x1,x2]`.
//! Modding out by `e`-th powers as well leaves `(Z/e)^{2g}` on the
//! abelianisation and a cyclic `Z/d` on top.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::json::big_to_json;
use crate::nil2::{Nil2Element, PairIndexSet};
use crate::word::{SurfaceContext, Word};

/// Default cap on the order of a quotient we are willing to enumerate.
pub const DEFAULT_GUARD: u64 = 2_000_000;

fn residue(v: &BigInt, modulus: u64) -> u64 {
    v.mod_floor(&BigInt::from(modulus))
        .to_u64()
        .expect("residue fits")
}

/// Sum of the related coordinates `m_{2h-1,2h}`, `1 <= h < g`.
fn related_sum(a: &Nil2Element) -> BigInt {
    a.pairs()
        .related_indices()
        .into_iter()
        .map(|k| &a.m()[k])
        .sum()
}

/// An element of `π/K`: free abelianisation, commutator part in `Z/g`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModKElement {
    ctx: SurfaceContext,
    n: Vec<BigInt>,
    mk: u64,
}

impl ModKElement {
    pub fn identity(ctx: &SurfaceContext) -> Self {
        Self {
            ctx: *ctx,
            n: vec![BigInt::zero(); ctx.generator_count() as usize],
            mk: 0,
        }
    }

    pub fn new(ctx: &SurfaceContext, n: Vec<BigInt>, mk: &BigInt) -> Self {
        assert_eq!(n.len(), ctx.generator_count() as usize);
        Self {
            ctx: *ctx,
            n,
            mk: residue(mk, ctx.genus() as u64),
        }
    }

    /// Image of a class-2 element.
    pub fn project(a: &Nil2Element) -> Self {
        Self::new(a.ctx(), a.n().to_vec(), &related_sum(a))
    }

    pub fn ctx(&self) -> &SurfaceContext {
        &self.ctx
    }

    pub fn n(&self) -> &[BigInt] {
        &self.n
    }

    /// Exponent of `[x1,x2]`, in `0..g`.
    pub fn mk(&self) -> u64 {
        self.mk
    }

    pub fn is_identity(&self) -> bool {
        self.mk == 0 && self.n.iter().all(Zero::is_zero)
    }

    /// `(n, m)(k, l) = (n + k, m + l - Σ_{i<g} k_{2i-1} n_{2i} + (g-1) k_{2g-1} n_{2g})`.
    pub fn multiply(&self, rhs: &Self) -> Result<Self> {
        self.ctx.ensure_same(&rhs.ctx)?;
        let (n, k) = (&self.n, &rhs.n);
        let g = self.ctx.genus() as usize;
        let mut m = BigInt::from(self.mk + rhs.mk);
        for i in 1..g {
            m -= &k[2 * i - 2] * &n[2 * i - 1];
        }
        m += &k[2 * g - 2] * &n[2 * g - 1] * (g - 1);
        let n = n.iter().zip(k).map(|(a, b)| a + b).collect();
        Ok(Self::new(&self.ctx, n, &m))
    }

    pub fn inverse(&self) -> Self {
        self.pow(-1)
    }

    pub fn pow(&self, p: i64) -> Self {
        let q = self.quadratic();
        let p = BigInt::from(p);
        let m = BigInt::from(self.mk) * &p + (&p * (&p - 1) / 2) * q;
        let n = self.n.iter().map(|v| v * &p).collect();
        Self::new(&self.ctx, n, &m)
    }

    /// `q(n) = -Σ_{i<g} n_{2i-1} n_{2i} + (g-1) n_{2g-1} n_{2g}`; `a^p` picks
    /// up `C(p,2) q(n)` on the commutator part.
    fn quadratic(&self) -> BigInt {
        let g = self.ctx.genus() as usize;
        let n = &self.n;
        let mut q = &n[2 * g - 2] * &n[2 * g - 1] * (g - 1);
        for i in 1..g {
            q -= &n[2 * i - 2] * &n[2 * i - 1];
        }
        q
    }

    pub fn to_json(&self) -> Value {
        json!({
            "genus": self.ctx.genus(),
            "n": self.n.iter().map(big_to_json).collect::<Vec<_>>(),
            "mK": self.mk,
        })
    }
}

impl fmt::Display for ModKElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n: Vec<String> = self.n.iter().map(|v| v.to_string()).collect();
        write!(f, "n=({}) mK={} (mod {})", n.join(","), self.mk, self.ctx.genus())
    }
}

/// `π/π^e K`: `n` modulo `e`, `[x1,x2]` exponent modulo `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuotientSpec {
    genus: u32,
    exponent: u32,
    m_modulus: u32,
}

impl QuotientSpec {
    /// The quotients `π/π^g K` and `π/π^{2g} K`.
    pub fn new(ctx: &SurfaceContext, exponent: u32) -> Result<Self> {
        let g = ctx.genus();
        if exponent != g && exponent != 2 * g {
            return Err(Error::InvalidExponent {
                genus: g,
                exponent,
            });
        }
        Self::with_any_exponent(ctx, exponent)
    }

    /// Any exponent `e >= 2`.
    pub fn with_any_exponent(ctx: &SurfaceContext, exponent: u32) -> Result<Self> {
        let g = ctx.genus();
        if exponent < 2 {
            return Err(Error::InvalidExponent {
                genus: g,
                exponent,
            });
        }
        Ok(Self {
            genus: g,
            exponent,
            m_modulus: m_modulus(g as u64, exponent as u64) as u32,
        })
    }

    pub fn ctx(&self) -> SurfaceContext {
        SurfaceContext::new(self.genus).expect("validated genus")
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    /// `e`, also the modulus of the `n` coordinates.
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// `d`, the modulus of the `[x1,x2]` coordinate.
    pub fn m_modulus(&self) -> u32 {
        self.m_modulus
    }

    /// `e^{2g} · d`.
    pub fn order(&self) -> BigInt {
        BigInt::from(self.exponent).pow(2 * self.genus) * self.m_modulus
    }

    pub fn identity(&self) -> QuotientElement {
        QuotientElement {
            spec: *self,
            n: vec![0; 2 * self.genus as usize],
            mk: 0,
        }
    }

    /// Classes of `x_1, ..., x_{2g}`.
    pub fn generators(&self) -> Vec<QuotientElement> {
        (0..2 * self.genus as usize)
            .map(|i| {
                let mut q = self.identity();
                q.n[i] = 1 % self.exponent;
                q
            })
            .collect()
    }

    pub fn project(&self, a: &Nil2Element) -> Result<QuotientElement> {
        self.project_mod_k(&ModKElement::project(a))
    }

    pub fn project_mod_k(&self, a: &ModKElement) -> Result<QuotientElement> {
        if a.ctx.genus() != self.genus {
            return Err(Error::ContextMismatch {
                left: self.genus,
                right: a.ctx.genus(),
            });
        }
        let e = self.exponent as u64;
        Ok(QuotientElement {
            spec: *self,
            n: a.n.iter().map(|v| residue(v, e) as u32).collect(),
            mk: (a.mk % self.m_modulus as u64) as u32,
        })
    }

    /// A preimage in `π/π^[3]`: residues as exponents, the commutator part
    /// on `[x1,x2]`.
    pub fn lift(&self, q: &QuotientElement) -> Nil2Element {
        let ctx = self.ctx();
        let pairs = PairIndexSet::new(&ctx);
        let n = q.n.iter().map(|&v| BigInt::from(v)).collect();
        let mut m = vec![BigInt::zero(); pairs.len()];
        m[pairs.index_of(1, 2).unwrap()] = BigInt::from(q.mk);
        Nil2Element::from_parts(&ctx, n, m).expect("consistent shape")
    }

    /// Mixed-radix index in `0..order`: `n_1` most significant, `mK` last.
    pub fn encode(&self, q: &QuotientElement) -> usize {
        let e = self.exponent as usize;
        let head = q.n.iter().fold(0usize, |acc, &v| acc * e + v as usize);
        head * self.m_modulus as usize + q.mk as usize
    }

    /// Inverse of [`QuotientSpec::encode`].
    pub fn decode(&self, mut code: usize) -> QuotientElement {
        let e = self.exponent as usize;
        let mk = (code % self.m_modulus as usize) as u32;
        code /= self.m_modulus as usize;
        let mut n = vec![0u32; 2 * self.genus as usize];
        for slot in n.iter_mut().rev() {
            *slot = (code % e) as u32;
            code /= e;
        }
        QuotientElement { spec: *self, n, mk }
    }

    /// Whether the word lies in `π^e K`.
    pub fn is_member(&self, w: &Word) -> Result<bool> {
        let ctx = self.ctx();
        Ok(self.project(&Nil2Element::evaluate(&ctx, w)?)?.is_identity())
    }
}

/// `gcd(g, e)` for odd `e`, `gcd(g, e, e(e-1)/2)` for even `e`.
pub fn m_modulus(genus: u64, exponent: u64) -> u64 {
    if exponent % 2 == 1 {
        genus.gcd(&exponent)
    } else {
        genus.gcd(&exponent).gcd(&(exponent * (exponent - 1) / 2))
    }
}

/// Reduced coordinates in `π/π^e K`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuotientElement {
    spec: QuotientSpec,
    n: Vec<u32>,
    mk: u32,
}

impl QuotientElement {
    pub fn spec(&self) -> &QuotientSpec {
        &self.spec
    }

    pub fn n(&self) -> &[u32] {
        &self.n
    }

    pub fn mk(&self) -> u32 {
        self.mk
    }

    pub fn is_identity(&self) -> bool {
        self.mk == 0 && self.n.iter().all(|&v| v == 0)
    }

    pub fn multiply(&self, rhs: &Self) -> Result<Self> {
        if self.spec != rhs.spec {
            return Err(Error::ContextMismatch {
                left: self.spec.genus,
                right: rhs.spec.genus,
            });
        }
        Ok(self.mul_unchecked(rhs))
    }

    pub(crate) fn mul_unchecked(&self, rhs: &Self) -> Self {
        let g = self.spec.genus as usize;
        let e = self.spec.exponent as u64;
        let d = self.spec.m_modulus as u64;
        let (n, k) = (&self.n, &rhs.n);
        // All terms are reduced mod d, which divides e, so residues of n, k suffice.
        let mut neg = 0u64;
        for i in 1..g {
            neg += (k[2 * i - 2] as u64 * n[2 * i - 1] as u64) % d;
        }
        let pos = (g as u64 - 1) * ((k[2 * g - 2] as u64 * n[2 * g - 1] as u64) % d);
        let mk = (self.mk as u64 + rhs.mk as u64 + pos + d - neg % d) % d;
        Self {
            spec: self.spec,
            n: n.iter().zip(k).map(|(&a, &b)| ((a as u64 + b as u64) % e) as u32).collect(),
            mk: mk as u32,
        }
    }

    pub fn inverse(&self) -> Self {
        let e = self.spec.exponent;
        let inv_n = QuotientElement {
            spec: self.spec,
            n: self.n.iter().map(|&v| (e - v) % e).collect(),
            mk: 0,
        };
        // inv_n · self = (0, c); correct the commutator part by -c.
        let c = inv_n.mul_unchecked(self).mk;
        let d = self.spec.m_modulus;
        QuotientElement {
            mk: (d - c) % d,
            ..inv_n
        }
    }

    pub fn pow(&self, p: i64) -> Self {
        let base = if p < 0 { self.inverse() } else { self.clone() };
        let mut exp = p.unsigned_abs();
        let mut acc = self.spec.identity();
        let mut sq = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_unchecked(&sq);
            }
            sq = sq.mul_unchecked(&sq);
            exp >>= 1;
        }
        acc
    }

    pub fn to_json(&self) -> Value {
        json!({
            "e": self.spec.exponent,
            "d": self.spec.m_modulus,
            "n": self.n,
            "mK": self.mk,
        })
    }
}

impl std::ops::Mul for &QuotientElement {
    type Output = QuotientElement;

    fn mul(self, rhs: &QuotientElement) -> QuotientElement {
        self.multiply(rhs).expect("operands from the same quotient")
    }
}

impl fmt::Display for QuotientElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n: Vec<String> = self.n.iter().map(|v| v.to_string()).collect();
        write!(
            f,
            "n=({}) (mod {}) mK={} (mod {})",
            n.join(","),
            self.spec.exponent,
            self.mk,
            self.spec.m_modulus
        )
    }
}

/// `ω`-pairing of a commutator class with values in `Z/g`; zero exactly on `K`.
pub fn intersection_pairing(a: &Nil2Element) -> Result<u64> {
    if !a.is_commutator() {
        return Err(Error::NotInCommutatorSubgroup);
    }
    Ok(ModKElement::project(a).mk())
}

/// All elements of a finite quotient, in BFS order from the identity.
#[derive(Debug, Clone)]
pub struct Enumeration {
    spec: QuotientSpec,
    elements: Vec<QuotientElement>,
    index: HashMap<QuotientElement, usize>,
    depth: Vec<u32>,
}

impl Enumeration {
    /// BFS closure of `{x_i^{±1}}` under right multiplication.
    pub fn new(spec: &QuotientSpec, guard: u64) -> Result<Self> {
        let order = spec.order();
        if order > BigInt::from(guard) {
            return Err(Error::GuardExceeded {
                order: order.to_string(),
                guard,
            });
        }
        let mut steps = spec.generators();
        steps.extend(spec.generators().iter().map(|x| x.inverse()));

        let capacity = order.to_usize().unwrap_or(0);
        let mut elements = Vec::with_capacity(capacity);
        let mut depth = Vec::with_capacity(capacity);
        let mut index = HashMap::with_capacity(capacity);
        let id = spec.identity();
        index.insert(id.clone(), 0);
        elements.push(id);
        depth.push(0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(k) = queue.pop_front() {
            for s in &steps {
                let next = elements[k].mul_unchecked(s);
                if !index.contains_key(&next) {
                    let pos = elements.len();
                    index.insert(next.clone(), pos);
                    elements.push(next);
                    depth.push(depth[k] + 1);
                    queue.push_back(pos);
                }
            }
        }
        Ok(Self {
            spec: *spec,
            elements,
            index,
            depth,
        })
    }

    pub fn spec(&self) -> &QuotientSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[QuotientElement] {
        &self.elements
    }

    pub fn position(&self, q: &QuotientElement) -> Option<usize> {
        self.index.get(q).copied()
    }

    /// Word length of the element at `pos` over `{x_i^{±1}}`.
    pub fn word_length(&self, pos: usize) -> u32 {
        self.depth[pos]
    }

    pub fn max_word_length(&self) -> u32 {
        self.depth.iter().copied().max().unwrap_or(0)
    }
}
