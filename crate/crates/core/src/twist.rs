//! Dehn twists on the standard generators and their induced action on
//! `π/π^[3]` and on the finite quotients.
//!
//! `τ_i` is the right-handed twist around the loop `γ_i`, `σ_i` the one
//! around `x_{2i-1}`. Generators not mentioned in a table are fixed.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::nil2::{Nil2Element, PairIndexSet};
use crate::quotient::{Enumeration, QuotientElement, QuotientSpec};
use crate::word::{EndomorphismTable, SurfaceContext, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TwistName {
    /// `τ_i`, `1 <= i <= 2g+1`.
    Tau(u32),
    /// `σ_i`, `1 <= i <= g`.
    Sigma(u32),
}

impl TwistName {
    /// `τ_1..τ_{2g+1}` followed by `σ_1..σ_g`.
    pub fn all(ctx: &SurfaceContext) -> Vec<TwistName> {
        let g = ctx.genus();
        (1..=2 * g + 1)
            .map(TwistName::Tau)
            .chain((1..=g).map(TwistName::Sigma))
            .collect()
    }

    pub fn check(&self, ctx: &SurfaceContext) -> Result<()> {
        let g = ctx.genus();
        let ok = match *self {
            TwistName::Tau(i) => (1..=2 * g + 1).contains(&i),
            TwistName::Sigma(i) => (1..=g).contains(&i),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidTwist(self.to_string()))
        }
    }
}

impl fmt::Display for TwistName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwistName::Tau(i) => write!(f, "t{i}"),
            TwistName::Sigma(i) => write!(f, "s{i}"),
        }
    }
}

impl FromStr for TwistName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidTwist(s.to_string());
        let (kind, rest) = s.split_at_checked(1).ok_or_else(bad)?;
        let index: u32 = rest.parse().map_err(|_| bad())?;
        match kind {
            "t" => Ok(TwistName::Tau(index)),
            "s" => Ok(TwistName::Sigma(index)),
            _ => Err(bad()),
        }
    }
}

fn gen(i: u32) -> Word {
    Word::generator(i)
}

fn inv(i: u32) -> Word {
    Word::generator_inverse(i)
}

/// The simple loop `γ_i`, `1 <= i <= 2g+1`:
/// `γ_1 = x1`, `γ_{2h} = x_{2h}`,
/// `γ_{2h-1} = x_{2h-1} [x_{2h-3},x_{2h-2}]⁻¹ x_{2h-3}⁻¹` (`2 <= h <= g`),
/// `γ_{2g+1} = [x_{2g-1},x_{2g}]⁻¹ x_{2g-1}⁻¹`.
pub fn gamma_word(i: u32, ctx: &SurfaceContext) -> Result<Word> {
    let g = ctx.genus();
    if i == 0 || i > 2 * g + 1 {
        return Err(Error::InvalidTwist(format!("gamma{i}")));
    }
    Ok(if i == 1 {
        gen(1)
    } else if i.is_multiple_of(2) {
        gen(i)
    } else if i == 2 * g + 1 {
        Word::commutator(&gen(2 * g - 1), &gen(2 * g))
            .inverse()
            .concat(&inv(2 * g - 1))
    } else {
        gen(i)
            .concat(&Word::commutator(&gen(i - 2), &gen(i - 1)).inverse())
            .concat(&inv(i - 2))
    })
}

/// The substitution table of a twist.
pub fn twist_table(name: TwistName, ctx: &SurfaceContext) -> Result<EndomorphismTable> {
    name.check(ctx)?;
    let g = ctx.genus();
    let images: Vec<(u32, Word)> = match name {
        TwistName::Tau(1) => vec![(2, inv(1).concat(&gen(2)))],
        TwistName::Tau(i) if i % 2 == 0 => vec![(i - 1, gen(i).concat(&gen(i - 1)))],
        TwistName::Tau(i) if i == 2 * g + 1 => vec![(2 * g, inv(2 * g - 1).concat(&gen(2 * g)))],
        TwistName::Tau(i) => {
            // i = 2h - 1 with 2 <= h <= g
            let gamma = gamma_word(i, ctx)?;
            let gamma_inv = gamma.inverse();
            vec![
                (i - 1, gen(i - 1).concat(&gamma)),
                (i, gamma_inv.concat(&gen(i)).concat(&gamma)),
                (i + 1, gamma_inv.concat(&gen(i + 1))),
            ]
        }
        TwistName::Sigma(i) => vec![(2 * i, inv(2 * i - 1).concat(&gen(2 * i)))],
    };
    EndomorphismTable::from_images(ctx, images.into_iter().map(|(k, w)| (k, w.free_reduce())))
}

/// Whether the substitution preserves the relator modulo `π^[3]`.
pub fn is_well_defined(table: &EndomorphismTable, ctx: &SurfaceContext) -> Result<bool> {
    let image = ctx.relator().substitute(table);
    Ok(Nil2Element::evaluate(ctx, &image)?.is_identity())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoopKind {
    NonSeparating,
    /// `s_h = Π_{i=1}^{h} [x_{2i-1}, x_{2i}]`; `half_genus` marks `h = g/2`.
    Separating { h: u32, half_genus: bool },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub label: String,
    pub word: Word,
    pub kind: LoopKind,
}

/// Known simple closed curves: `γ_1..γ_{2g+1}`, `x_1..x_{2g}`, and the
/// separating curves `s_1..s_{g-1}`.
#[derive(Debug, Clone)]
pub struct SimpleLoopCatalog {
    pub entries: Vec<CatalogEntry>,
}

impl SimpleLoopCatalog {
    pub fn new(ctx: &SurfaceContext) -> Self {
        let g = ctx.genus();
        let mut entries = Vec::new();
        for i in 1..=2 * g + 1 {
            entries.push(CatalogEntry {
                label: format!("gamma{i}"),
                word: gamma_word(i, ctx).expect("index in range"),
                kind: LoopKind::NonSeparating,
            });
        }
        for i in 1..=2 * g {
            entries.push(CatalogEntry {
                label: format!("x{i}"),
                word: gen(i),
                kind: LoopKind::NonSeparating,
            });
        }
        for h in 1..g {
            entries.push(CatalogEntry {
                label: format!("s{h}"),
                word: separating_word(h),
                kind: LoopKind::Separating {
                    h,
                    half_genus: 2 * h == g,
                },
            });
        }
        Self { entries }
    }

    /// `s_{g/2}` when `g` is even.
    pub fn half_separating(&self) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| {
            matches!(
                e.kind,
                LoopKind::Separating {
                    half_genus: true,
                    ..
                }
            )
        })
    }
}

/// `Π_{i=1}^{h} [x_{2i-1}, x_{2i}]`.
pub fn separating_word(h: u32) -> Word {
    (1..=h).fold(Word::empty(), |acc, i| {
        acc.concat(&Word::commutator(&gen(2 * i - 1), &gen(2 * i)))
    })
}

/// An element of `π^[2]/π^[3]` in additive notation, over the pair index set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CommutatorVector {
    genus: u32,
    coords: Vec<BigInt>,
}

impl CommutatorVector {
    pub fn zero(ctx: &SurfaceContext) -> Self {
        Self {
            genus: ctx.genus(),
            coords: vec![BigInt::zero(); PairIndexSet::new(ctx).len()],
        }
    }

    pub fn basis(ctx: &SurfaceContext, i: u32, j: u32) -> Option<Self> {
        let k = PairIndexSet::new(ctx).index_of(i, j)?;
        let mut v = Self::zero(ctx);
        v.coords[k] = 1.into();
        Some(v)
    }

    pub fn from_element(a: &Nil2Element) -> Result<Self> {
        if !a.is_commutator() {
            return Err(Error::NotInCommutatorSubgroup);
        }
        Ok(Self {
            genus: a.genus(),
            coords: a.m().to_vec(),
        })
    }

    pub fn to_element(&self) -> Nil2Element {
        let ctx = SurfaceContext::new(self.genus).expect("valid genus");
        Nil2Element::from_commutators(&ctx, self.coords.clone()).expect("consistent shape")
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn coord(&self, i: u32, j: u32) -> BigInt {
        let ctx = SurfaceContext::new(self.genus).expect("valid genus");
        PairIndexSet::new(&ctx)
            .index_of(i, j)
            .map(|k| self.coords[k].clone())
            .unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Nonzero coordinates as `((i, j), value)`.
    pub fn support(&self) -> Vec<((u32, u32), BigInt)> {
        let ctx = SurfaceContext::new(self.genus).expect("valid genus");
        PairIndexSet::new(&ctx)
            .pairs()
            .zip(&self.coords)
            .filter(|(_, v)| !v.is_zero())
            .map(|(p, v)| (p, v.clone()))
            .collect()
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            genus: self.genus,
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            genus: self.genus,
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

/// The automorphism of `π/π^[3]` induced by a well-defined substitution.
#[derive(Debug, Clone)]
pub struct InducedAction {
    ctx: SurfaceContext,
    images: Vec<Nil2Element>,
    /// Column `p` is the image of the `p`-th basis commutator.
    commutators: Vec<Vec<BigInt>>,
}

impl InducedAction {
    pub fn new(ctx: &SurfaceContext, table: &EndomorphismTable) -> Result<Self> {
        if !is_well_defined(table, ctx)? {
            return Err(Error::NotWellDefined);
        }
        let images = (1..=ctx.generator_count())
            .map(|i| Nil2Element::evaluate(ctx, &table.image(i)))
            .collect::<Result<Vec<_>>>()?;
        let commutators = PairIndexSet::new(ctx)
            .pairs()
            .map(|(i, j)| {
                let c = images[i as usize - 1].commutator_class(&images[j as usize - 1])?;
                Ok(c.m().to_vec())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            ctx: *ctx,
            images,
            commutators,
        })
    }

    pub fn for_twist(name: TwistName, ctx: &SurfaceContext) -> Result<Self> {
        Self::new(ctx, &twist_table(name, ctx)?)
    }

    pub fn ctx(&self) -> &SurfaceContext {
        &self.ctx
    }

    /// Image of a generator class.
    pub fn generator_image(&self, i: u32) -> &Nil2Element {
        &self.images[i as usize - 1]
    }

    /// `Π_i φ(x_i)^{n_i} · Π_{(i,j)} φ([x_i,x_j])^{m_ij}`, generators ascending,
    /// pairs lexicographic.
    pub fn apply(&self, a: &Nil2Element) -> Result<Nil2Element> {
        self.ctx.ensure_same(a.ctx())?;
        let mut acc = Nil2Element::identity(&self.ctx);
        for (img, n) in self.images.iter().zip(a.n()) {
            if !n.is_zero() {
                acc = acc.multiply(&img.power(n))?;
            }
        }
        let central = self.apply_commutators(a.m());
        acc.multiply(&Nil2Element::from_commutators(&self.ctx, central)?)
    }

    fn apply_commutators(&self, m: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); m.len()];
        for (coef, col) in m.iter().zip(&self.commutators) {
            if coef.is_zero() {
                continue;
            }
            for (o, c) in out.iter_mut().zip(col) {
                if !c.is_zero() {
                    *o += coef * c;
                }
            }
        }
        out
    }

    /// `φ(z) - z` on the commutator lattice.
    pub fn twist_difference(&self, z: &CommutatorVector) -> CommutatorVector {
        let image = CommutatorVector {
            genus: z.genus,
            coords: self.apply_commutators(&z.coords),
        };
        image.sub(z)
    }

    /// The matrix of `φ - 1` on the commutator lattice, row-major over pairs.
    pub fn difference_matrix(&self) -> Vec<Vec<i64>> {
        let dim = self.commutators.len();
        (0..dim)
            .map(|r| {
                (0..dim)
                    .map(|c| {
                        let v: i64 = (&self.commutators[c][r]).try_into().expect("small entry");
                        v - i64::from(r == c)
                    })
                    .collect()
            })
            .collect()
    }

    /// Induced map on a finite quotient, through a lift to `π/π^[3]`.
    pub fn apply_quotient(&self, spec: &QuotientSpec, q: &QuotientElement) -> Result<QuotientElement> {
        spec.project(&self.apply(&spec.lift(q))?)
    }
}

/// The induced map on `π/π^e K`, evaluated from the images of the
/// generators and of `[x1,x2]` without leaving the quotient.
#[derive(Debug, Clone)]
pub struct QuotientAction {
    spec: QuotientSpec,
    images: Vec<QuotientElement>,
    central: QuotientElement,
}

impl QuotientAction {
    pub fn new(action: &InducedAction, spec: &QuotientSpec) -> Result<Self> {
        action.ctx.ensure_same(&spec.ctx())?;
        let images = action
            .images
            .iter()
            .map(|img| spec.project(img))
            .collect::<Result<Vec<_>>>()?;
        let c12 = Nil2Element::basis_commutator(&action.ctx, 1, 2).expect("(1,2) is a basis pair");
        let central = spec.project(&action.apply(&c12)?)?;
        Ok(Self {
            spec: *spec,
            images,
            central,
        })
    }

    pub fn spec(&self) -> &QuotientSpec {
        &self.spec
    }

    pub fn apply(&self, q: &QuotientElement) -> QuotientElement {
        let mut acc = self.spec.identity();
        for (img, &n) in self.images.iter().zip(q.n()) {
            if n != 0 {
                acc = acc.mul_unchecked(&img.pow(n as i64));
            }
        }
        if q.mk() != 0 {
            acc = acc.mul_unchecked(&self.central.pow(q.mk() as i64));
        }
        acc
    }
}

/// The induced map on an enumerated quotient as a table of positions.
#[derive(Debug, Clone)]
pub struct QuotientPermutation {
    pub images: Vec<usize>,
    pub bijective: bool,
}

impl QuotientPermutation {
    pub fn inverse(&self) -> Option<Vec<usize>> {
        if !self.bijective {
            return None;
        }
        let mut inv = vec![0; self.images.len()];
        for (k, &v) in self.images.iter().enumerate() {
            inv[v] = k;
        }
        Some(inv)
    }
}

pub fn induced_quotient_permutation(
    action: &InducedAction,
    all: &Enumeration,
) -> Result<QuotientPermutation> {
    let mut hit = vec![false; all.len()];
    let images = all
        .elements()
        .iter()
        .map(|q| {
            let img = action.apply_quotient(all.spec(), q)?;
            let pos = all
                .position(&img)
                .expect("enumeration is closed under projection");
            hit[pos] = true;
            Ok(pos)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QuotientPermutation {
        images,
        bijective: hit.into_iter().all(|h| h),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotient::DEFAULT_GUARD;

    fn ctx(g: u32) -> SurfaceContext {
        SurfaceContext::new(g).unwrap()
    }

    fn w(text: &str, g: u32) -> Word {
        Word::parse(text, &ctx(g)).unwrap()
    }

    fn ev(text: &str, g: u32) -> Nil2Element {
        Nil2Element::evaluate(&ctx(g), &w(text, g)).unwrap()
    }

    #[test]
    fn names() {
        assert_eq!("t5".parse::<TwistName>().unwrap(), TwistName::Tau(5));
        assert_eq!("s2".parse::<TwistName>().unwrap(), TwistName::Sigma(2));
        for bad in ["", "t", "q1", "tx", "s-1"] {
            assert!(bad.parse::<TwistName>().is_err(), "{bad}");
        }
        assert!(TwistName::Tau(6).check(&ctx(2)).is_err());
        assert!(TwistName::Sigma(3).check(&ctx(2)).is_err());
        assert_eq!(TwistName::all(&ctx(3)).len(), 10);
        assert_eq!(TwistName::all(&ctx(2)).len(), 7);
    }

    #[test]
    fn gamma_words() {
        let c = ctx(2);
        assert_eq!(gamma_word(1, &c).unwrap(), w("x1", 2));
        assert_eq!(gamma_word(3, &c).unwrap(), w("x3 [x1,x2]^-1 X1", 2));
        assert_eq!(gamma_word(4, &c).unwrap(), w("x4", 2));
        assert_eq!(gamma_word(5, &c).unwrap(), w("[x3,x4]^-1 X3", 2));
        assert_eq!(gamma_word(7, &ctx(3)).unwrap(), w("[x5,x6]^-1 X5", 3));
        assert!(gamma_word(6, &c).is_err());
        assert!(gamma_word(0, &c).is_err());
    }

    #[test]
    fn twist_tables() {
        let c = ctx(2);
        let entries = |name: &str| -> Vec<(u32, String)> {
            twist_table(name.parse().unwrap(), &c)
                .unwrap()
                .entries()
                .map(|(k, v)| (k, v.to_string()))
                .collect()
        };
        assert_eq!(entries("t1"), vec![(2, "X1 x2".to_string())]);
        assert_eq!(entries("t5"), vec![(4, "X3 x4".to_string())]);
        assert_eq!(entries("s2"), vec![(4, "X3 x4".to_string())]);
        assert_eq!(entries("t2"), vec![(1, "x2 x1".to_string())]);
        let t3 = twist_table(TwistName::Tau(3), &c).unwrap();
        let gamma = gamma_word(3, &c).unwrap();
        assert_eq!(t3.image(2), w("x2", 2).concat(&gamma).free_reduce());
        assert_eq!(t3.image(3), gamma.inverse().concat(&w("x3", 2)).concat(&gamma).free_reduce());
        assert_eq!(t3.image(4), gamma.inverse().concat(&w("x4", 2)).free_reduce());
        assert_eq!(t3.image(1), w("x1", 2));
    }

    #[test]
    fn well_definedness() {
        for g in 2..=5 {
            let c = ctx(g);
            for name in TwistName::all(&c) {
                assert!(is_well_defined(&twist_table(name, &c).unwrap(), &c).unwrap(), "{name} g={g}");
            }
        }
        let c = ctx(2);
        let bad = EndomorphismTable::from_images(&c, [(1, w("x2", 2))]).unwrap();
        assert!(!is_well_defined(&bad, &c).unwrap());
        assert!(is_well_defined(&EndomorphismTable::identity(), &c).unwrap());
        assert!(matches!(InducedAction::new(&c, &bad), Err(Error::NotWellDefined)));
    }

    #[test]
    fn induced_examples() {
        let c = ctx(3);
        let id = InducedAction::new(&c, &EndomorphismTable::identity()).unwrap();
        let a = ev("x1 x4^3 [x2,x5]^-2 X6", 3);
        assert_eq!(id.apply(&a).unwrap(), a);
        for h in 1..=3 {
            let t = InducedAction::for_twist(TwistName::Tau(2 * h), &c).unwrap();
            let x = Nil2Element::generator(&c, 2 * h - 1).unwrap();
            let expected = ev(&format!("x{} x{}", 2 * h, 2 * h - 1), 3);
            assert_eq!(t.apply(&x).unwrap(), expected);
            assert_eq!(expected.n_at(2 * h - 1), &BigInt::from(1));
            assert_eq!(expected.n_at(2 * h), &BigInt::from(1));
        }
        let t3 = InducedAction::for_twist(TwistName::Tau(3), &c).unwrap();
        assert_eq!(
            t3.apply(&ev("[x1,x2]^5", 3)).unwrap(),
            ev("[x1,x2]^5 [x1,x3]^5", 3)
        );
    }

    #[test]
    fn twist_difference_examples() {
        let c = ctx(3);
        let t = InducedAction::for_twist(TwistName::Tau(2), &c).unwrap();
        assert!(t.twist_difference(&CommutatorVector::zero(&c)).is_zero());
        // σ_g on [x1, x_{2g}] leaves a single multiple of [x1, x_{2g-1}].
        let sg = InducedAction::for_twist(TwistName::Sigma(3), &c).unwrap();
        let z = CommutatorVector::basis(&c, 1, 6).unwrap();
        let d = sg.twist_difference(&z);
        let support = d.support();
        assert_eq!(support.len(), 1);
        assert_eq!(support[0].0, (1, 5));
    }

    #[test]
    fn quotient_permutations() {
        let c = ctx(2);
        let spec = QuotientSpec::new(&c, 4).unwrap();
        let all = Enumeration::new(&spec, DEFAULT_GUARD).unwrap();
        let id = InducedAction::new(&c, &EndomorphismTable::identity()).unwrap();
        let p = induced_quotient_permutation(&id, &all).unwrap();
        assert!(p.images.iter().enumerate().all(|(k, &v)| k == v));
        let t5 = InducedAction::for_twist(TwistName::Tau(5), &c).unwrap();
        let p = induced_quotient_permutation(&t5, &all).unwrap();
        assert!(p.bijective);
        let inv = p.inverse().unwrap();
        assert!(inv.iter().enumerate().all(|(k, &v)| p.images[v] == k));
    }

    #[test]
    fn quotient_action_matches_lift() {
        let c = ctx(2);
        for e in [2, 4] {
            let spec = QuotientSpec::new(&c, e).unwrap();
            let all = Enumeration::new(&spec, DEFAULT_GUARD).unwrap();
            for name in TwistName::all(&c) {
                let action = InducedAction::for_twist(name, &c).unwrap();
                let fast = QuotientAction::new(&action, &spec).unwrap();
                for q in all.elements() {
                    assert_eq!(fast.apply(q), action.apply_quotient(&spec, q).unwrap());
                }
            }
        }
    }

    #[test]
    fn catalog_shape() {
        let cat = SimpleLoopCatalog::new(&ctx(4));
        assert_eq!(cat.entries.len(), 9 + 8 + 3);
        let half = cat.half_separating().unwrap();
        assert_eq!(half.word, w("[x1,x2][x3,x4]", 4));
        assert!(SimpleLoopCatalog::new(&ctx(3)).half_separating().is_none());
    }
}
