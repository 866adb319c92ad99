use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// One letter `g^{±1}` of a free-group word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub gen: usize,
    pub exp: i8,
}

impl Syllable {
    pub fn new(gen: usize, exp: i8) -> Result<Self> {
        if exp != 1 && exp != -1 {
            return Err(Error::invalid(format!("syllable exponent must be ±1, got {exp}")));
        }
        Ok(Syllable { gen, exp })
    }

    pub fn pos(gen: usize) -> Self {
        Syllable { gen, exp: 1 }
    }

    pub fn neg(gen: usize) -> Self {
        Syllable { gen, exp: -1 }
    }

    pub fn inverse(self) -> Self {
        Syllable { gen: self.gen, exp: -self.exp }
    }

    fn cancels(self, other: Syllable) -> bool {
        self.gen == other.gen && self.exp == -other.exp
    }

    /// Total order used for canonical forms: `g0 < g0⁻¹ < g1 < g1⁻¹ < …`.
    pub(crate) fn key(self) -> usize {
        2 * self.gen + usize::from(self.exp < 0)
    }
}

impl Serialize for Syllable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (self.gen, self.exp).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Syllable {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (gen, exp) = <(usize, i8)>::deserialize(d)?;
        Syllable::new(gen, exp).map_err(D::Error::custom)
    }
}

/// A freely reduced word in a free group.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupWord(Vec<Syllable>);

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord(Vec::new())
    }

    /// Builds the free reduction of the given syllables.
    pub fn new(syllables: impl IntoIterator<Item = Syllable>) -> Self {
        let mut out: Vec<Syllable> = Vec::new();
        for s in syllables {
            if out.last().is_some_and(|&t| t.cancels(s)) {
                out.pop();
            } else {
                out.push(s);
            }
        }
        GroupWord(out)
    }

    pub fn generator(gen: usize) -> Self {
        GroupWord(vec![Syllable::pos(gen)])
    }

    /// Builds a word from `(generator, ±1)` pairs.
    pub fn from_pairs(pairs: &[(usize, i8)]) -> Result<Self> {
        let syl = pairs.iter().map(|&(g, e)| Syllable::new(g, e)).collect::<Result<Vec<_>>>()?;
        Ok(Self::new(syl))
    }

    /// Parses words like `"aab"`, `"cAb"` or `"ab^-1"`: lowercase letters are
    /// generators `a = 0, b = 1, …`, uppercase letters or a `^-1` suffix invert.
    pub fn parse_letters(s: &str) -> Result<Self> {
        let mut syl = Vec::new();
        let mut chars = s.chars().filter(|c| !c.is_whitespace()).peekable();
        while let Some(c) = chars.next() {
            let (gen, mut exp) = match c {
                'a'..='z' => ((c as u8 - b'a') as usize, 1i8),
                'A'..='Z' => ((c as u8 - b'A') as usize, -1i8),
                _ => return Err(Error::Parse(format!("unexpected character '{c}' in word"))),
            };
            if chars.peek() == Some(&'^') {
                chars.next();
                let rest: String = [chars.next(), chars.next()].into_iter().flatten().collect();
                if rest != "-1" {
                    return Err(Error::Parse(format!("only ^-1 exponents are supported, got ^{rest}")));
                }
                exp = -exp;
            }
            syl.push(Syllable { gen, exp });
        }
        Ok(Self::new(syl))
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        GroupWord(self.0.iter().rev().map(|s| s.inverse()).collect())
    }

    pub fn mul(&self, other: &GroupWord) -> Self {
        Self::new(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = GroupWord::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Idempotent canonical form; words are reduced on construction so this only re-checks.
    pub fn free_reduce(&self) -> Self {
        Self::new(self.0.iter().copied())
    }

    /// Strips cancelling first/last syllable pairs.
    pub fn cyclic_reduce(&self) -> Self {
        let mut lo = 0;
        let mut hi = self.0.len();
        while hi - lo >= 2 && self.0[lo].cancels(self.0[hi - 1]) {
            lo += 1;
            hi -= 1;
        }
        GroupWord(self.0[lo..hi].to_vec())
    }

    /// Replaces every generator `g` by `images[g]`.
    pub fn substitute(&self, images: &[GroupWord]) -> Self {
        let mut out = Vec::new();
        for s in &self.0 {
            let img = &images[s.gen];
            if s.exp > 0 {
                out.extend_from_slice(&img.0);
            } else {
                out.extend(img.0.iter().rev().map(|t| t.inverse()));
            }
        }
        Self::new(out)
    }

    /// Exponent sum of each generator, over `rank` generators.
    pub fn exponent_sums(&self, rank: usize) -> Vec<i64> {
        let mut v = vec![0i64; rank];
        for s in &self.0 {
            v[s.gen] += s.exp as i64;
        }
        v
    }

    pub fn occurrences(&self, gen: usize) -> usize {
        self.0.iter().filter(|s| s.gen == gen).count()
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|s| s.gen).max()
    }

    /// Least rotation of the cyclic reduction of the word or its inverse, so
    /// relators that define the same normal closure element up to conjugacy
    /// and inversion compare equal.
    pub fn cyclic_canonical(&self) -> GroupWord {
        let r = self.cyclic_reduce();
        let inv = r.inverse();
        let n = r.len();
        let mut best: Option<Vec<Syllable>> = None;
        for cand in [&r, &inv] {
            for k in 0..n.max(1) {
                let rot: Vec<Syllable> = cand.0[k..].iter().chain(cand.0[..k].iter()).copied().collect();
                let better = match &best {
                    None => true,
                    Some(b) => rot.iter().map(|s| s.key()).lt(b.iter().map(|s| s.key())),
                };
                if better {
                    best = Some(rot);
                }
            }
        }
        GroupWord(best.unwrap_or_default())
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        let mut out = String::new();
        for s in &self.0 {
            let name = names.get(s.gen).cloned().unwrap_or_else(|| default_name(s.gen));
            out.push_str(&name);
            if s.exp < 0 {
                out.push_str("^-1");
            }
        }
        out
    }
}

/// `a, b, c, …` for the first 26 generators, then `g26, g27, …`.
pub fn default_name(gen: usize) -> String {
    if gen < 26 {
        char::from(b'a' + gen as u8).to_string()
    } else {
        format!("g{gen}")
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&[]))
    }
}

impl fmt::Debug for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupWord({self})")
    }
}

impl Serialize for GroupWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(GroupWord::new(Vec::<Syllable>::deserialize(d)?))
    }
}

pub fn free_reduce(word: &GroupWord) -> GroupWord {
    word.free_reduce()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> GroupWord {
        GroupWord::parse_letters(s).unwrap()
    }

    #[test]
    fn cancellation() {
        assert!(w("aA").is_identity());
        assert_eq!(w("caBbA"), w("c"));
        assert_eq!(w("ab^-1"), w("aB"));
        assert_eq!(w("aab").len(), 3);
    }

    #[test]
    fn inverse_and_product() {
        let x = w("abC");
        assert!(x.mul(&x.inverse()).is_identity());
        assert_eq!(x.pow(2), w("abCabC"));
        assert_eq!(x.pow(-1), x.inverse());
    }

    #[test]
    fn cyclic_forms() {
        assert_eq!(w("aBcA").cyclic_reduce(), w("Bc"));
        assert_eq!(w("abAB").cyclic_canonical(), w("baBA").cyclic_canonical());
        assert_eq!(w("ab").cyclic_canonical(), w("BA").cyclic_canonical());
        assert_ne!(w("ab").cyclic_canonical(), w("aB").cyclic_canonical());
    }

    #[test]
    fn substitution_and_sums() {
        let images = [w("aab"), w("ab")];
        assert_eq!(w("aB").substitute(&images), w("a"));
        assert_eq!(w("aabA").exponent_sums(2), vec![1, 1]);
    }

    #[test]
    fn bad_syllable_rejected() {
        assert!(Syllable::new(0, 2).is_err());
        assert!(serde_json::from_str::<GroupWord>("[[0,0]]").is_err());
        let g: GroupWord = serde_json::from_str("[[0,1],[1,1],[1,-1]]").unwrap();
        assert_eq!(g, w("a"));
    }
}
