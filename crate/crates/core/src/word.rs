//! Free words over the surface-group generators `x1..x{2g}`.
//!
//! Words are plain letter sequences. Nothing here reduces a word behind the
//! caller's back: [`Word::free_reduce`] is the only place cancellation
//! happens, so evaluators downstream can be fed unreduced input.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on the length of a word produced by exponent sugar.
const MAX_EXPANDED_LEN: usize = 10_000_000;

/// The closed orientable surface of genus `g >= 2`.
///
/// Generators are `x_1, ..., x_{2g}` (1-based) with the single relator
/// `[x1,x2][x3,x4]...[x{2g-1},x{2g}]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceContext {
    genus: u32,
}

impl SurfaceContext {
    pub fn new(genus: u32) -> Result<Self> {
        if genus < 2 {
            return Err(Error::GenusTooSmall(genus));
        }
        Ok(Self { genus })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn generator_count(&self) -> u32 {
        2 * self.genus
    }

    /// `Π_{i=1}^{g} [x_{2i-1}, x_{2i}]`.
    pub fn relator(&self) -> Word {
        (1..=self.genus).fold(Word::empty(), |acc, i| {
            acc.concat(&Word::commutator(
                &Word::generator(2 * i - 1),
                &Word::generator(2 * i),
            ))
        })
    }

    pub(crate) fn check_index(&self, index: u32) -> Result<()> {
        if index == 0 || index > self.generator_count() {
            Err(Error::GeneratorOutOfRange {
                index,
                max: self.generator_count(),
            })
        } else {
            Ok(())
        }
    }

    pub(crate) fn ensure_same(&self, other: &SurfaceContext) -> Result<()> {
        if self.genus == other.genus {
            Ok(())
        } else {
            Err(Error::ContextMismatch {
                left: self.genus,
                right: other.genus,
            })
        }
    }
}

/// A generator `x_i` or its inverse `X_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub index: u32,
    pub inverse: bool,
}

impl Letter {
    pub fn new(index: u32, inverse: bool) -> Self {
        Self { index, inverse }
    }

    pub fn inv(self) -> Self {
        Self {
            index: self.index,
            inverse: !self.inverse,
        }
    }

    /// `+1` for `x_i`, `-1` for `X_i`.
    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.index == other.index && self.inverse != other.inverse
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = if self.inverse { 'X' } else { 'x' };
        write!(f, "{c}{}", self.index)
    }
}

/// A word in the free group on `x_1..x_{2g}`; the empty word is the identity.
///
/// Products read left to right: `uv` means "first `u`, then `v`".
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Self { letters }
    }

    pub fn generator(index: u32) -> Self {
        Self {
            letters: vec![Letter::new(index, false)],
        }
    }

    pub fn generator_inverse(index: u32) -> Self {
        Self {
            letters: vec![Letter::new(index, true)],
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Largest generator index used, 0 for the empty word.
    pub fn max_index(&self) -> u32 {
        self.letters.iter().map(|l| l.index).max().unwrap_or(0)
    }

    pub fn check_context(&self, ctx: &SurfaceContext) -> Result<()> {
        self.letters.iter().try_for_each(|l| ctx.check_index(l.index))
    }

    /// Parse a word; see the crate docs for the grammar.
    pub fn parse(text: &str, ctx: &SurfaceContext) -> Result<Self> {
        let mut parser = Parser {
            src: text.as_bytes(),
            pos: 0,
            ctx,
        };
        let w = parser.word()?;
        parser.skip_ws();
        if parser.pos != parser.src.len() {
            return Err(parser.error("unexpected character"));
        }
        Ok(w)
    }

    /// Stack-based free reduction. Idempotent.
    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            match out.last() {
                Some(&top) if top.cancels(l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word { letters: out }
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| !w[0].cancels(w[1]))
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    /// `self` followed by `other`, without reduction.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    /// `[u, v] = u⁻¹ v⁻¹ u v`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.inverse().concat(&v.inverse()).concat(u).concat(v)
    }

    /// `w^k` by repetition; negative `k` repeats the inverse word.
    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let reps = k.unsigned_abs() as usize;
        let mut letters = Vec::with_capacity(base.len() * reps);
        for _ in 0..reps {
            letters.extend_from_slice(&base.letters);
        }
        Word { letters }
    }

    /// Image of the word under the endomorphism described by `table`.
    pub fn substitute(&self, table: &EndomorphismTable) -> Word {
        let mut letters = Vec::with_capacity(self.len());
        for &l in &self.letters {
            match table.images.get(&l.index) {
                Some(img) if l.inverse => letters.extend(img.letters.iter().rev().map(|x| x.inv())),
                Some(img) => letters.extend_from_slice(&img.letters),
                None => letters.push(l),
            }
        }
        Word { letters }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Generator-to-word substitution. Generators without an entry are fixed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EndomorphismTable {
    images: BTreeMap<u32, Word>,
}

impl EndomorphismTable {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn from_images<I>(ctx: &SurfaceContext, images: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, Word)>,
    {
        let mut table = Self::default();
        for (index, word) in images {
            table.set(ctx, index, word)?;
        }
        Ok(table)
    }

    pub fn set(&mut self, ctx: &SurfaceContext, index: u32, word: Word) -> Result<()> {
        ctx.check_index(index)?;
        word.check_context(ctx)?;
        self.images.insert(index, word);
        Ok(())
    }

    /// The image word of `x_index`.
    pub fn image(&self, index: u32) -> Word {
        self.images
            .get(&index)
            .cloned()
            .unwrap_or_else(|| Word::generator(index))
    }

    /// Explicit (non-fixed) entries, ascending by generator.
    pub fn entries(&self) -> impl Iterator<Item = (u32, &Word)> {
        self.images.iter().map(|(&k, v)| (k, v))
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ctx: &'a SurfaceContext,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn word(&mut self) -> Result<Word> {
        let mut acc = Word::empty();
        loop {
            match self.peek() {
                None | Some(b',') | Some(b']') | Some(b')') => return Ok(acc),
                Some(_) => {
                    let f = self.factor()?;
                    if acc.len() + f.len() > MAX_EXPANDED_LEN {
                        return Err(self.error("word too long"));
                    }
                    acc = acc.concat(&f);
                }
            }
        }
    }

    fn factor(&mut self) -> Result<Word> {
        let atom = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let k = self.integer()?;
            if (k.unsigned_abs() as usize).saturating_mul(atom.len()) > MAX_EXPANDED_LEN {
                return Err(self.error("exponent too large"));
            }
            return Ok(atom.pow(k));
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<Word> {
        match self.peek() {
            Some(c @ (b'x' | b'X')) => {
                self.pos += 1;
                let index = self.index()?;
                Ok(Word::from_letters(vec![Letter::new(index, c == b'X')]))
            }
            Some(b'r') => {
                const KW: &[u8] = b"relator";
                if self.src[self.pos..].starts_with(KW) {
                    self.pos += KW.len();
                    Ok(self.ctx.relator())
                } else {
                    Err(self.error("unknown keyword"))
                }
            }
            Some(b'[') => {
                self.pos += 1;
                let u = self.word()?;
                self.expect(b',')?;
                let v = self.word()?;
                self.expect(b']')?;
                Ok(Word::commutator(&u, &v))
            }
            Some(b'(') => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(b')')?;
                Ok(w)
            }
            Some(_) => Err(self.error("expected generator, `[` or `(`")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn digits(&mut self) -> Result<&str> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits"))
    }

    fn index(&mut self) -> Result<u32> {
        let start = self.pos;
        let index: u32 = self
            .digits()?
            .parse()
            .map_err(|_| Error::Parse {
                pos: start,
                msg: "generator index too large".into(),
            })?;
        self.ctx.check_index(index)?;
        Ok(index)
    }

    fn integer(&mut self) -> Result<i64> {
        let negative = match self.src.get(self.pos) {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let start = self.pos;
        let magnitude: i64 = self.digits()?.parse().map_err(|_| Error::Parse {
            pos: start,
            msg: "exponent too large".into(),
        })?;
        Ok(if negative { -magnitude } else { magnitude })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(g: u32) -> SurfaceContext {
        SurfaceContext::new(g).unwrap()
    }

    fn w(text: &str, g: u32) -> Word {
        Word::parse(text, &ctx(g)).unwrap()
    }

    fn letters(spec: &[(u32, i8)]) -> Word {
        Word::from_letters(spec.iter().map(|&(i, s)| Letter::new(i, s < 0)).collect())
    }

    #[test]
    fn genus_one_rejected() {
        assert_eq!(SurfaceContext::new(1), Err(Error::GenusTooSmall(1)));
    }

    #[test]
    fn parse_examples() {
        assert!(w("", 2).is_empty());
        assert_eq!(w("x1 x2", 2), letters(&[(1, 1), (2, 1)]));
        assert_eq!(w("[x1,x2]", 2), letters(&[(1, -1), (2, -1), (1, 1), (2, 1)]));
        assert_eq!(w("x3^-1", 2), w("X3", 2));
        assert_eq!(w("(x1 x2)^2", 2), w("x1 x2 x1 x2", 2));
        assert_eq!(w("(x1 x2)^-2", 2), w("X2 X1 X2 X1", 2));
        assert_eq!(w("x1^0", 2), Word::empty());
        assert_eq!(w("relator", 2), w("[x1,x2][x3,x4]", 2));
        assert_eq!(w(" [ x1 , [x2,x3] ] ", 2).len(), 10);
    }

    #[test]
    fn parse_errors() {
        let c = ctx(2);
        assert!(matches!(Word::parse("x5", &c), Err(Error::GeneratorOutOfRange { index: 5, max: 4 })));
        assert!(matches!(Word::parse("x0", &c), Err(Error::GeneratorOutOfRange { .. })));
        for bad in ["x", "y1", "[x1 x2]", "(x1", "x1^", "x1]", "[x1,x2", "x1^a", "rel"] {
            assert!(matches!(Word::parse(bad, &c), Err(Error::Parse { .. })), "{bad}");
        }
    }

    #[test]
    fn free_reduce_examples() {
        assert!(letters(&[(1, 1), (1, -1)]).free_reduce().is_empty());
        assert!(Word::empty().free_reduce().is_empty());
        assert_eq!(w("x1 x2 X2 x2", 2).free_reduce(), w("x1 x2", 2));
        assert_eq!(w("x1 x2 X2 X1 x3", 2).free_reduce(), w("x3", 2));
    }

    #[test]
    fn invert_examples() {
        assert!(Word::empty().inverse().is_empty());
        assert_eq!(w("x1 x2", 2).inverse(), w("X2 X1", 2));
        let c = w("[x1,x2]", 2);
        assert_eq!(c.inverse(), w("X2 X1 x2 x1", 2));
        assert!(c.concat(&c.inverse()).free_reduce().is_empty());
    }

    #[test]
    fn concat_and_commutator() {
        let x1 = w("x1", 2);
        assert_eq!(Word::empty().concat(&x1), x1);
        assert_eq!(x1.concat(&w("x2", 2)), w("x1 x2", 2));
        assert_eq!(x1.concat(&w("X1", 2)).len(), 2);
        assert!(x1.concat(&w("X1", 2)).free_reduce().is_empty());
        assert_eq!(Word::commutator(&x1, &w("x2", 2)), w("X1 X2 x1 x2", 2));
        assert!(Word::commutator(&Word::empty(), &x1).free_reduce().is_empty());
        assert!(Word::commutator(&x1, &x1).free_reduce().is_empty());
    }

    #[test]
    fn substitute_examples() {
        let c = ctx(2);
        let any = w("x1 X3 x2 x4", 2);
        assert_eq!(any.substitute(&EndomorphismTable::identity()), any);
        let tau1 = EndomorphismTable::from_images(&c, [(2, w("X1 x2", 2))]).unwrap();
        assert_eq!(w("x2", 2).substitute(&tau1), w("X1 x2", 2));
        assert_eq!(w("X2", 2).substitute(&tau1), w("X2 x1", 2));
    }

    #[test]
    fn table_rejects_foreign_words() {
        let c = ctx(2);
        assert!(EndomorphismTable::from_images(&c, [(5, w("x1", 2))]).is_err());
        assert!(EndomorphismTable::from_images(&c, [(1, w("x5", 3))]).is_err());
    }

    #[test]
    fn display_round_trip() {
        let word = w("[x1,x2]^2 X4", 2);
        assert_eq!(word.to_string(), "X1 X2 x1 x2 X1 X2 x1 x2 X4");
        assert_eq!(Word::parse(&word.to_string(), &ctx(2)).unwrap(), word);
        assert_eq!(Word::empty().to_string(), "");
    }
}
