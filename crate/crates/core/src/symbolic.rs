//! Words over finite alphabets, substitutions, Sturmian parameters and the
//! `σ_w` re-embedding of a subshift into the full shift.
//!
//! Letters are bytes `0..n`, so alphabets hold at most 255 letters. Orbits of
//! the shift are always handled as finite one-sided prefixes; every density
//! statement in this module is made at a finite cylinder length.

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// The alphabet `{0, 1, …, n-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet(u8);

impl Alphabet {
    pub const BINARY: Alphabet = Alphabet(2);

    pub fn new(size: usize) -> Result<Self> {
        match u8::try_from(size) {
            Ok(n) if n >= 1 => Ok(Alphabet(n)),
            _ => Err(Error::invalid(format!("alphabet size must be in 1..=255, got {size}"))),
        }
    }

    pub fn size(self) -> usize {
        self.0 as usize
    }

    pub fn contains(self, letter: u8) -> bool {
        letter < self.0
    }

    /// The cyclic relabeling `i ↦ i + 1 mod n`.
    pub fn rotate(self, letter: u8) -> u8 {
        ((letter as u16 + 1) % self.0 as u16) as u8
    }

    pub fn rotate_by(self, letter: u8, times: usize) -> u8 {
        ((letter as usize + times) % self.size()) as u8
    }

    pub fn letters(self) -> impl Iterator<Item = u8> {
        0..self.0
    }
}

/// A finite word; validity against an alphabet is checked where the word is used.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolicWord(Vec<u8>);

impl SymbolicWord {
    pub fn new(letters: Vec<u8>) -> Self {
        SymbolicWord(letters)
    }

    pub fn empty() -> Self {
        SymbolicWord(Vec::new())
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<u8> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn validate(&self, alphabet: Alphabet) -> Result<()> {
        match self.0.iter().position(|&l| !alphabet.contains(l)) {
            None => Ok(()),
            Some(i) => Err(Error::invalid(format!(
                "letter {} at position {i} is outside the {}-letter alphabet",
                self.0[i],
                alphabet.size()
            ))),
        }
    }

    pub fn concat(&self, other: &SymbolicWord) -> SymbolicWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        SymbolicWord(v)
    }

    /// Applies the cyclic relabeling letterwise `times` times.
    pub fn rotate_letters(&self, alphabet: Alphabet, times: usize) -> SymbolicWord {
        SymbolicWord(self.0.iter().map(|&l| alphabet.rotate_by(l, times)).collect())
    }

    pub fn count(&self, letter: u8) -> usize {
        self.0.iter().filter(|&&l| l == letter).count()
    }

    pub fn contains_factor(&self, factor: &SymbolicWord) -> bool {
        factor.is_empty() || self.0.windows(factor.len()).any(|w| w == factor.letters())
    }

    /// Renders letters as digits when every letter is below 10, else as a bracketed list.
    pub fn render(&self) -> String {
        if self.0.iter().all(|&l| l < 10) {
            self.0.iter().map(|&l| char::from(b'0' + l)).collect()
        } else {
            format!("{:?}", self.0)
        }
    }
}

impl From<&[u8]> for SymbolicWord {
    fn from(v: &[u8]) -> Self {
        SymbolicWord(v.to_vec())
    }
}

impl FromStr for SymbolicWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::Parse(format!("'{c}' is not a digit letter")))
            })
            .collect::<Result<Vec<_>>>()
            .map(SymbolicWord)
    }
}

impl fmt::Display for SymbolicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for SymbolicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", self.render())
    }
}

/// Words serialize as digit strings for small alphabets and as integer arrays otherwise.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WordRepr {
    Digits(String),
    Letters(Vec<u8>),
}

impl Serialize for SymbolicWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.iter().all(|&l| l < 10) {
            WordRepr::Digits(self.render()).serialize(s)
        } else {
            WordRepr::Letters(self.0.clone()).serialize(s)
        }
    }
}

impl<'de> Deserialize<'de> for SymbolicWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match WordRepr::deserialize(d)? {
            WordRepr::Digits(s) => s.parse().map_err(D::Error::custom),
            WordRepr::Letters(v) => Ok(SymbolicWord(v)),
        }
    }
}

/// A letter-to-word map with nonempty images.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Substitution {
    alphabet: Alphabet,
    images: Vec<SymbolicWord>,
}

#[derive(Serialize, Deserialize)]
struct SubstitutionRepr {
    alphabet: usize,
    images: Vec<SymbolicWord>,
}

impl Substitution {
    pub fn new(alphabet: Alphabet, images: Vec<SymbolicWord>) -> Result<Self> {
        if images.len() != alphabet.size() {
            return Err(Error::invalid(format!(
                "{} images given for a {}-letter alphabet",
                images.len(),
                alphabet.size()
            )));
        }
        for (letter, image) in images.iter().enumerate() {
            if image.is_empty() {
                return Err(Error::invalid(format!("image of letter {letter} is empty")));
            }
            image.validate(alphabet)?;
        }
        Ok(Substitution { alphabet, images })
    }

    /// Parses digit-string images, e.g. `from_strs(&["010", "01"])`.
    pub fn from_strs(images: &[&str]) -> Result<Self> {
        let alphabet = Alphabet::new(images.len())?;
        let images = images.iter().map(|s| s.parse()).collect::<Result<Vec<_>>>()?;
        Self::new(alphabet, images)
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        let images = alphabet.letters().map(|l| SymbolicWord(vec![l])).collect();
        Substitution { alphabet, images }
    }

    /// `0 ↦ 010, 1 ↦ 01`.
    pub fn fibonacci() -> Self {
        Self::from_strs(&["010", "01"]).expect("valid")
    }

    /// `0 ↦ 01, 1 ↦ 10`.
    pub fn thue_morse() -> Self {
        Self::from_strs(&["01", "10"]).expect("valid")
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn images(&self) -> &[SymbolicWord] {
        &self.images
    }

    pub fn image(&self, letter: u8) -> &SymbolicWord {
        &self.images[letter as usize]
    }

    pub fn apply(&self, word: &SymbolicWord) -> Result<SymbolicWord> {
        word.validate(self.alphabet)?;
        let mut out = Vec::with_capacity(word.letters().iter().map(|&l| self.image(l).len()).sum());
        for &l in word.letters() {
            out.extend_from_slice(self.image(l).letters());
        }
        Ok(SymbolicWord(out))
    }

    /// `self ∘ other`: letter `ℓ` goes to `self(other(ℓ))`.
    pub fn compose(&self, other: &Substitution) -> Result<Substitution> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch {
                left: self.alphabet.size(),
                right: other.alphabet.size(),
            });
        }
        let images = other.images.iter().map(|w| self.apply(w)).collect::<Result<Vec<_>>>()?;
        Ok(Substitution { alphabet: self.alphabet, images })
    }

    /// Entry `(i, j)` counts occurrences of letter `i` in the image of `j`.
    pub fn transition_matrix(&self) -> IntMatrix {
        let n = self.alphabet.size();
        let mut m = IntMatrix::zeros(n, n);
        for (j, image) in self.images.iter().enumerate() {
            for &i in image.letters() {
                m[(i as usize, j)] += 1;
            }
        }
        m
    }

    /// The first `len` letters of the one-sided fixed point starting with `start`.
    pub fn fixed_point_prefix(&self, start: u8, len: usize) -> Result<SymbolicWord> {
        if !self.alphabet.contains(start) {
            return Err(Error::invalid(format!("start letter {start} outside alphabet")));
        }
        if self.image(start).letters().first() != Some(&start) {
            return Err(Error::invalid(format!("image of {start} does not begin with {start}")));
        }
        if self.image(start).len() < 2 && len > 1 {
            return Err(Error::invalid(format!("image of {start} does not grow")));
        }
        let mut word = SymbolicWord(vec![start]);
        while word.len() < len {
            word = self.apply(&word)?;
        }
        word.0.truncate(len);
        Ok(word)
    }
}

impl Serialize for Substitution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SubstitutionRepr { alphabet: self.alphabet.size(), images: self.images.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Substitution {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = SubstitutionRepr::deserialize(d)?;
        let alphabet = Alphabet::new(repr.alphabet).map_err(D::Error::custom)?;
        Substitution::new(alphabet, repr.images).map_err(D::Error::custom)
    }
}

pub fn apply_substitution(sub: &Substitution, word: &SymbolicWord) -> Result<SymbolicWord> {
    sub.apply(word)
}

pub fn compose(a: &Substitution, b: &Substitution) -> Result<Substitution> {
    a.compose(b)
}

pub fn transition_matrix(sub: &Substitution) -> IntMatrix {
    sub.transition_matrix()
}

/// The Sturmian substitution `0 ↦ 0^{n+1} 1, 1 ↦ 0^n 1`.
pub fn sturmian_substitution(n: u32) -> Result<Substitution> {
    if n == 0 {
        return Err(Error::invalid("Sturmian substitution index must be at least 1"));
    }
    let n = n as usize;
    let mut zero = vec![0u8; n + 1];
    zero.push(1);
    let mut one = vec![0u8; n];
    one.push(1);
    Substitution::new(Alphabet::BINARY, vec![SymbolicWord(zero), SymbolicWord(one)])
}

/// A re-embedding `σ_w` with `σ_w(i) = 0^μ p^i(w) 0^μ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaEmbedding {
    pub w: SymbolicWord,
    pub mu: usize,
    /// Number of cyclic relabelings applied to the sampled orbit before `σ_w`
    /// so that letter 0 occurs in it.
    pub relabel: usize,
    pub substitution: Substitution,
}

impl SigmaEmbedding {
    /// Common length `2μ + |w|` of every image.
    pub fn return_time(&self) -> usize {
        2 * self.mu + self.w.len()
    }

    /// Every image has length `2μ + k` and the images are pairwise distinct.
    pub fn check_uniform_injective(&self) -> bool {
        let t = self.return_time();
        let images = self.substitution.images();
        images.iter().all(|w| w.len() == t)
            && images.iter().enumerate().all(|(i, a)| images[i + 1..].iter().all(|b| a != b))
    }

    /// Image of an orbit prefix, after the recorded relabeling.
    pub fn embed_orbit(&self, orbit: &SymbolicWord) -> Result<SymbolicWord> {
        let relabeled = orbit.rotate_letters(self.substitution.alphabet(), self.relabel);
        self.substitution.apply(&relabeled)
    }
}

pub fn sigma_w(w: &SymbolicWord, alphabet: Alphabet) -> Result<SigmaEmbedding> {
    if w.is_empty() {
        return Err(Error::invalid("seed word for σ_w must be nonempty"));
    }
    w.validate(alphabet)?;
    let mu = 1 + alphabet.letters().map(|l| w.count(l)).max().unwrap_or(0);
    let images = (0..alphabet.size())
        .map(|i| {
            let mut v = vec![0u8; mu];
            v.extend_from_slice(w.rotate_letters(alphabet, i).letters());
            v.extend(std::iter::repeat_n(0u8, mu));
            SymbolicWord(v)
        })
        .collect();
    let substitution = Substitution::new(alphabet, images)?;
    Ok(SigmaEmbedding { w: w.clone(), mu, relabel: 0, substitution })
}

/// Enumerates words over `alphabet` by length, then lexicographically.
pub(crate) fn words_up_to(alphabet: Alphabet, max_len: usize) -> impl Iterator<Item = SymbolicWord> {
    (1..=max_len).flat_map(move |len| words_of_length(alphabet, len))
}

/// Words of length `len` over `alphabet` in lexicographic order.
pub(crate) fn words_of_length(alphabet: Alphabet, len: usize) -> impl Iterator<Item = SymbolicWord> {
    let n = alphabet.size() as u128;
    let total = n.checked_pow(len as u32).unwrap_or(u128::MAX);
    (0..total).map(move |mut code| {
        let mut v = vec![0u8; len];
        for slot in v.iter_mut().rev() {
            *slot = (code % n) as u8;
            code /= n;
        }
        SymbolicWord(v)
    })
}

/// Searches for the shortest, then lexicographically least, seed `w` with
/// `|w| ≤ max_seed_len` whose `σ_w`-image of the sampled orbit contains
/// `target` as a factor.
///
/// If letter 0 does not occur in the orbit, the orbit is first relabeled by the
/// least power of the cyclic permutation that makes it occur.
pub fn density_witness(
    target: &SymbolicWord,
    seed_orbit: &SymbolicWord,
    alphabet: Alphabet,
    max_seed_len: usize,
) -> Result<Option<SigmaEmbedding>> {
    target.validate(alphabet)?;
    seed_orbit.validate(alphabet)?;
    if seed_orbit.is_empty() {
        return Ok(None);
    }
    let relabel = (0..alphabet.size())
        .find(|&r| seed_orbit.rotate_letters(alphabet, r).letters().contains(&0))
        .expect("some relabeling brings letter 0 into a nonempty orbit");
    for w in words_up_to(alphabet, max_seed_len) {
        let mut emb = sigma_w(&w, alphabet)?;
        emb.relabel = relabel;
        if emb.embed_orbit(seed_orbit)?.contains_factor(target) {
            return Ok(Some(emb));
        }
    }
    Ok(None)
}

/// A continued-fraction prefix `[n_1, n_2, …]`, read as the infinite sequence
/// obtained by repeating its final entry forever.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SturmianParams {
    cf: Vec<u32>,
}

impl SturmianParams {
    pub fn new(cf: Vec<u32>) -> Result<Self> {
        if cf.is_empty() {
            return Err(Error::invalid("continued-fraction prefix must be nonempty"));
        }
        if let Some(i) = cf.iter().position(|&n| n == 0) {
            return Err(Error::invalid(format!("continued-fraction entry {i} is zero")));
        }
        Ok(SturmianParams { cf })
    }

    pub fn entries(&self) -> &[u32] {
        &self.cf
    }

    /// The bonding substitutions `σ_{n_1}, σ_{n_2}, …` for the listed entries.
    pub fn substitutions(&self) -> Vec<Substitution> {
        self.cf.iter().map(|&n| sturmian_substitution(n).expect("entries are positive")).collect()
    }

    /// The entry sequence as (preperiod, period) of an eventually periodic sequence.
    fn eventual(&self) -> (&[u32], &[u32]) {
        let k = self.cf.len() - 1;
        (&self.cf[..k], &self.cf[k..])
    }
}

/// Shortest `p` with `word = p^k`.
pub(crate) fn primitive_root<T: PartialEq>(word: &[T]) -> &[T] {
    let n = word.len();
    for p in 1..=n {
        if n.is_multiple_of(p) && (p..n).all(|i| word[i] == word[i - p]) {
            return &word[..p];
        }
    }
    word
}

fn is_rotation<T: PartialEq>(a: &[T], b: &[T]) -> bool {
    a.len() == b.len() && (0..a.len().max(1)).any(|r| a.iter().cycle().skip(r).take(a.len()).eq(b.iter()))
}

/// Whether two eventually periodic sequences share a common tail (up to shift).
///
/// Tails of `u·v^∞` are the shifts of `v^∞`, so two such sequences share a tail
/// exactly when the primitive roots of their periods are cyclic rotations of
/// each other.
pub fn tails_equivalent(a: &SturmianParams, b: &SturmianParams) -> bool {
    let (_, pa) = a.eventual();
    let (_, pb) = b.eventual();
    is_rotation(primitive_root(pa), primitive_root(pb))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> SymbolicWord {
        s.parse().unwrap()
    }

    #[test]
    fn fibonacci_applied_to_zero() {
        assert_eq!(Substitution::fibonacci().apply(&w("0")).unwrap(), w("010"));
    }

    #[test]
    fn thue_morse_applied_to_ab() {
        assert_eq!(Substitution::thue_morse().apply(&w("01")).unwrap(), w("0110"));
    }

    #[test]
    fn identity_is_neutral() {
        let id = Substitution::identity(Alphabet::new(3).unwrap());
        assert_eq!(id.apply(&w("2101")).unwrap(), w("2101"));
        let s = Substitution::from_strs(&["01", "2", "10"]).unwrap();
        assert_eq!(id.compose(&s).unwrap(), s);
        assert_eq!(id.transition_matrix(), IntMatrix::identity(3));
    }

    #[test]
    fn out_of_alphabet_letter_rejected() {
        assert!(Substitution::fibonacci().apply(&w("012")).is_err());
        assert!(Substitution::from_strs(&["0", ""]).is_err());
        assert!(Substitution::from_strs(&["0", "2"]).is_err());
    }

    #[test]
    fn sturmian_one_squared() {
        let s1 = sturmian_substitution(1).unwrap();
        let sq = s1.compose(&s1).unwrap();
        assert_eq!(sq.image(0), &w("00100101"));
        assert_eq!(sq.image(1), &w("00101"));
    }

    #[test]
    fn transition_matrices() {
        let fib = Substitution::fibonacci().transition_matrix();
        assert_eq!(fib, IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap());
        let s2 = sturmian_substitution(2).unwrap();
        assert_eq!(s2.image(0), &w("0001"));
        assert_eq!(s2.image(1), &w("001"));
        assert_eq!(s2.transition_matrix(), IntMatrix::from_rows(&[vec![3, 2], vec![1, 1]]).unwrap());
        assert!(sturmian_substitution(0).is_err());
    }

    #[test]
    fn sigma_w_examples() {
        let e = sigma_w(&w("01"), Alphabet::BINARY).unwrap();
        assert_eq!(e.mu, 2);
        assert_eq!(e.substitution.image(0), &w("000100"));
        assert_eq!(e.substitution.image(1), &w("001000"));
        assert_eq!(e.return_time(), 6);

        let e = sigma_w(&w("0"), Alphabet::BINARY).unwrap();
        assert_eq!(e.mu, 2);
        assert_eq!(e.substitution.image(0), &w("00000"));
        assert_eq!(e.substitution.image(1), &w("00100"));
        assert!(sigma_w(&SymbolicWord::empty(), Alphabet::BINARY).is_err());
    }

    #[test]
    fn density_trivial_target() {
        let orbit = w("1111");
        let found = density_witness(&w("0"), &orbit, Alphabet::BINARY, 1).unwrap().unwrap();
        assert_eq!(found.w, w("0"));
        // the orbit had no zero, so one relabeling was needed
        assert_eq!(found.relabel, 1);
    }

    #[test]
    fn words_enumeration_order() {
        let v: Vec<String> = words_up_to(Alphabet::BINARY, 2).map(|w| w.render()).collect();
        assert_eq!(v, ["0", "1", "00", "01", "10", "11"]);
    }

    #[test]
    fn tails() {
        let p = |v: &[u32]| SturmianParams::new(v.to_vec()).unwrap();
        assert!(tails_equivalent(&p(&[1, 1, 1]), &p(&[2, 1, 1])));
        assert!(!tails_equivalent(&p(&[1, 1, 1]), &p(&[2, 2, 2])));
        assert!(tails_equivalent(&p(&[3, 5]), &p(&[5])));
        assert!(SturmianParams::new(vec![]).is_err());
        assert!(SturmianParams::new(vec![1, 0]).is_err());
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(b"0101"), b"01");
        assert_eq!(primitive_root(b"010"), b"010");
        assert!(is_rotation(b"001", b"100"));
        assert!(!is_rotation(b"001", b"011"));
    }

    #[test]
    fn json_roundtrip() {
        let s = Substitution::fibonacci();
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"alphabet":2,"images":["010","01"]}"#);
        let back: Substitution = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
        let big: Substitution = serde_json::from_str(r#"{"alphabet":12,"images":[[11],[0],[1],[2],[3],[4],[5],[6],[7],[8],[9],[10]]}"#).unwrap();
        assert_eq!(big.image(0).letters(), &[11]);
        assert!(serde_json::from_str::<Substitution>(r#"{"alphabet":2,"images":["0","2"]}"#).is_err());
    }
}
