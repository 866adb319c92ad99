//! Closed orbits on the Lorenz template and genus lower bounds.
//!
//! A periodic orbit is given by one period of its symbol sequence over
//! `{0, 1}`. Its `n` cyclic shifts, ordered lexicographically with `0 < 1`,
//! are the positions of the orbit on the branch line. The first-return map
//! permutes these positions; the closed orbit is the closure of the positive
//! permutation braid, whose crossing number is the inversion count. For a
//! positive braid closing to a knot the Seifert genus is at least
//! `(c − n + 1) / 2`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::symbolic::{primitive_root, sigma_w, words_of_length, Alphabet, SigmaEmbedding, SturmianParams, Substitution, SymbolicWord};

pub const ORDER_CONVENTION: &str = "cyclic shifts ordered lexicographically with 0 < 1";

/// One period of a periodic orbit; nonempty, binary and primitive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct TemplateWord(SymbolicWord);

impl TemplateWord {
    pub fn new(word: SymbolicWord) -> Result<Self> {
        let (root, power) = Self::root(word)?;
        if power > 1 {
            return Err(Error::NotPrimitive { word: root.0.render().repeat(power), period: root.len(), power });
        }
        Ok(root)
    }

    /// Primitive root of `word` and the power it is raised to.
    pub fn root(word: SymbolicWord) -> Result<(Self, usize)> {
        if word.is_empty() {
            return Err(Error::invalid("template word must be nonempty"));
        }
        word.validate(Alphabet::BINARY)?;
        let root = primitive_root(word.letters()).to_vec();
        let power = word.len() / root.len();
        Ok((TemplateWord(SymbolicWord::new(root)), power))
    }

    pub fn word(&self) -> &SymbolicWord {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl std::str::FromStr for TemplateWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TemplateWord::new(s.parse()?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LorenzBraid {
    pub strands: usize,
    /// `permutation[p]` is the branch-line position reached from position `p`.
    pub permutation: Vec<usize>,
    pub crossings: u64,
}

fn inversions(p: &[usize]) -> u64 {
    let mut count = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                count += 1;
            }
        }
    }
    count
}

pub fn lorenz_braid(w: &TemplateWord) -> Result<LorenzBraid> {
    let letters = w.0.letters();
    let n = letters.len();
    let mut shifts: Vec<usize> = (0..n).collect();
    shifts.sort_by(|&a, &b| (0..n).map(|k| letters[(a + k) % n]).cmp((0..n).map(|k| letters[(b + k) % n])));
    let mut position = vec![0; n];
    for (p, &s) in shifts.iter().enumerate() {
        position[s] = p;
    }
    let permutation: Vec<usize> = (0..n).map(|p| position[(shifts[p] + 1) % n]).collect();
    let mut seen = 1;
    let mut cur = permutation[0];
    while cur != 0 {
        cur = permutation[cur];
        seen += 1;
    }
    if seen != n {
        return Err(Error::Internal(format!("braid permutation of {} is not a single cycle", w.0)));
    }
    Ok(LorenzBraid { strands: n, crossings: inversions(&permutation), permutation })
}

/// `(c − n + 1) / 2`.
pub fn genus_lower_bound(b: &LorenzBraid) -> Result<u64> {
    let twice = (b.crossings + 1).checked_sub(b.strands as u64).ok_or_else(|| {
        Error::Internal(format!("{} crossings cannot close {} strands into a knot", b.crossings, b.strands))
    })?;
    if twice % 2 != 0 {
        return Err(Error::Internal(format!("c - n + 1 = {twice} is odd")));
    }
    Ok(twice / 2)
}

/// Loop word as read from a substitution image, with its primitive root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LoopWord {
    pub word: SymbolicWord,
    pub root: TemplateWord,
    /// Greater than 1 when the loop runs several times around a shorter
    /// orbit; the closed orbit is then a link component, not the whole loop.
    pub power: usize,
}

impl LoopWord {
    fn new(word: SymbolicWord) -> Result<Self> {
        let (root, power) = TemplateWord::root(word.clone())?;
        Ok(LoopWord { word, root, power })
    }
}

/// Template words of the two wedge loops of the first stage: the images of
/// 0 and 1.
pub fn first_stage_loops(sub: &Substitution) -> Result<(LoopWord, LoopWord)> {
    if sub.alphabet().size() != 2 {
        return Err(Error::invalid(format!(
            "first-stage loops need a two-letter substitution, got {} letters",
            sub.alphabet().size()
        )));
    }
    Ok((LoopWord::new(sub.image(0).clone())?, LoopWord::new(sub.image(1).clone())?))
}

/// The minimal set a certificate re-embeds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateBase {
    Substitution(Substitution),
    Sturmian(SturmianParams),
}

impl CertificateBase {
    /// First bonding substitution.
    pub fn substitution(&self) -> Substitution {
        match self {
            CertificateBase::Substitution(s) => s.clone(),
            CertificateBase::Sturmian(p) => p.substitutions().swap_remove(0),
        }
    }
}

/// Seed words examined per length, in lexicographic order.
pub const CANDIDATES_PER_LENGTH: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CertificateRow {
    pub w: SymbolicWord,
    pub mu: usize,
    pub loop_word: SymbolicWord,
    pub strands: usize,
    pub crossings: u64,
    #[serde(rename = "genusLB")]
    pub genus_lb: u64,
    #[serde(skip)]
    pub embedding: SigmaEmbedding,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub requested: usize,
    pub complete: bool,
    pub rows: Vec<CertificateRow>,
}

/// Row for seed `w`: the 0-loop of `σ_w ∘ base` and its genus bound.
pub fn certificate_row(base: &Substitution, w: &SymbolicWord) -> Result<CertificateRow> {
    let embedding = sigma_w(w, base.alphabet())?;
    if !embedding.check_uniform_injective() {
        return Err(Error::Internal(format!("σ_w for w = {w} is not uniform and injective")));
    }
    let composite = embedding.substitution.compose(base)?;
    let (zero, _) = first_stage_loops(&composite)?;
    let braid = lorenz_braid(&zero.root)?;
    let genus_lb = genus_lower_bound(&braid)?;
    Ok(CertificateRow {
        w: w.clone(),
        mu: embedding.mu,
        loop_word: zero.root.word().clone(),
        strands: braid.strands,
        crossings: braid.crossings,
        genus_lb,
        embedding,
    })
}

/// Up to `m` re-embeddings of the base minimal set with strictly increasing
/// genus bounds, searching seeds of length at most `max_seed_len`.
///
/// Seeds are tried by length, then lexicographically, at most
/// [`CANDIDATES_PER_LENGTH`] per length; a seed is kept when its bound
/// exceeds every bound kept so far.
pub fn distinct_knot_certificate(base: &CertificateBase, m: usize, max_seed_len: usize) -> Result<Certificate> {
    if m == 0 {
        return Err(Error::invalid("certificate needs a positive count"));
    }
    let sub = base.substitution();
    if sub.alphabet().size() != 2 {
        return Err(Error::invalid("certificates are defined for two-letter substitutions"));
    }
    let mut rows: Vec<CertificateRow> = Vec::with_capacity(m);
    'outer: for len in 1..=max_seed_len {
        let candidates = words_of_length(Alphabet::BINARY, len).take(CANDIDATES_PER_LENGTH);
        for w in candidates {
            let row = certificate_row(&sub, &w)?;
            if rows.last().is_none_or(|r| row.genus_lb > r.genus_lb) {
                rows.push(row);
                if rows.len() == m {
                    break 'outer;
                }
            }
        }
    }
    Ok(Certificate { requested: m, complete: rows.len() == m, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tw(s: &str) -> TemplateWord {
        s.parse().unwrap()
    }

    #[test]
    fn small_braids() {
        let b = lorenz_braid(&tw("0")).unwrap();
        assert_eq!((b.strands, b.crossings), (1, 0));
        assert_eq!(genus_lower_bound(&b).unwrap(), 0);
        let b = lorenz_braid(&tw("01")).unwrap();
        assert_eq!(b.permutation, vec![1, 0]);
        assert_eq!(genus_lower_bound(&b).unwrap(), 0);
        let b = lorenz_braid(&tw("001")).unwrap();
        assert_eq!(b.permutation, vec![1, 2, 0]);
        assert_eq!(b.crossings, 2);
    }

    #[test]
    fn trefoil_orbit() {
        // 00101 is the Lorenz trefoil: 5 strands, 6 crossings.
        let b = lorenz_braid(&tw("00101")).unwrap();
        assert_eq!(b.crossings, 6);
        assert_eq!(genus_lower_bound(&b).unwrap(), 1);
    }

    #[test]
    fn non_primitive_rejected() {
        match "0101".parse::<TemplateWord>() {
            Err(Error::NotPrimitive { period: 2, power: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!("".parse::<TemplateWord>().is_err());
        assert!("012".parse::<TemplateWord>().is_err());
    }

    #[test]
    fn first_stage() {
        let (z, o) = first_stage_loops(&Substitution::fibonacci()).unwrap();
        assert_eq!(z.root, tw("010"));
        assert_eq!(z.power, 1);
        assert_eq!(o.root, tw("01"));
        let (z, o) = first_stage_loops(&Substitution::from_strs(&["0", "1"]).unwrap()).unwrap();
        assert_eq!((z.root, o.root), (tw("0"), tw("1")));
        let e = sigma_w(&"01".parse().unwrap(), Alphabet::BINARY).unwrap();
        assert_eq!(first_stage_loops(&e.substitution).unwrap().0.word.render(), "000100");
    }

    #[test]
    fn fibonacci_certificate() {
        let c = distinct_knot_certificate(&CertificateBase::Substitution(Substitution::fibonacci()), 3, 10).unwrap();
        assert!(c.complete);
        assert!(c.rows.windows(2).all(|r| r[0].genus_lb < r[1].genus_lb));
        let one = distinct_knot_certificate(&CertificateBase::Substitution(Substitution::fibonacci()), 1, 1).unwrap();
        assert_eq!(one.rows.len(), 1);
    }

    #[test]
    fn exhausted_budget_is_partial() {
        let c = distinct_knot_certificate(&CertificateBase::Substitution(Substitution::fibonacci()), 50, 2).unwrap();
        assert!(!c.complete);
        assert!(c.rows.len() < 50);
    }
}
