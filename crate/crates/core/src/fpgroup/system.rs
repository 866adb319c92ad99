use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use super::abelian::abelian_image_rank;
use super::nielsen::nielsen_reduce;
use super::presentation::{GroupMorphism, GroupPresentation};
use super::tietze::{tietze_simplify_tracked, DEFAULT_BUDGET};
use crate::error::{Error, Result};

/// `G_1 → G_2 → …`, stages numbered from 1.
#[derive(Clone, Debug)]
pub struct DirectSystem {
    presentations: Vec<GroupPresentation>,
    maps: Vec<GroupMorphism>,
}

impl DirectSystem {
    pub fn new(presentations: Vec<GroupPresentation>, maps: Vec<GroupMorphism>) -> Result<Self> {
        if presentations.is_empty() {
            return Err(Error::invalid("a direct system needs at least one group"));
        }
        if maps.len() + 1 != presentations.len() {
            return Err(Error::RankMismatch(format!(
                "{} maps for {} groups",
                maps.len(),
                presentations.len()
            )));
        }
        for (i, m) in maps.iter().enumerate() {
            if m.source() != &presentations[i] || m.target() != &presentations[i + 1] {
                return Err(Error::RankMismatch(format!("map {} does not join stages {} and {}", i + 1, i + 1, i + 2)));
            }
        }
        Ok(DirectSystem { presentations, maps })
    }

    pub fn len(&self) -> usize {
        self.presentations.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Group at 1-based `stage`.
    pub fn presentation(&self, stage: usize) -> &GroupPresentation {
        &self.presentations[stage - 1]
    }

    /// Map from `stage` to `stage + 1`.
    pub fn map(&self, stage: usize) -> &GroupMorphism {
        &self.maps[stage - 1]
    }

    pub fn presentations(&self) -> &[GroupPresentation] {
        &self.presentations
    }

    pub fn maps(&self) -> &[GroupMorphism] {
        &self.maps
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ImageRankMethod {
    /// Rank of a Nielsen-reduced basis of the image in a free target.
    Free,
    /// Rank of the image in the abelianized target.
    Abelian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ImageRank {
    pub rank: usize,
    pub method: ImageRankMethod,
}

/// Rank of the image of stage `stage` inside stage `stage + 1`.
pub fn stable_image_rank(system: &DirectSystem, stage: usize) -> Result<ImageRank> {
    if stage == 0 || stage >= system.len() {
        return Err(Error::invalid(format!("stage {stage} has no outgoing map in a system of length {}", system.len())));
    }
    let map = system.map(stage);
    let simp = tietze_simplify_tracked(map.target(), DEFAULT_BUDGET);
    if simp.presentation.is_free() {
        let images: Vec<_> = map.images().iter().map(|w| simp.rewrite(w)).collect();
        let reduced = nielsen_reduce(&images, simp.presentation.rank())?;
        Ok(ImageRank { rank: reduced.reduced.len(), method: ImageRankMethod::Free })
    } else {
        let rank = abelian_image_rank(map.target(), &map.exponent_matrix());
        Ok(ImageRank { rank, method: ImageRankMethod::Abelian })
    }
}

/// Multiplicity of a prime in a supernatural number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Multiplicity {
    Finite(u32),
    Infinite,
}

impl Serialize for Multiplicity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Multiplicity::Finite(k) => s.serialize_u32(*k),
            Multiplicity::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Prime multiplicities of the product of winding numbers, as far as probed.
///
/// With the infinite primes `P`, a rank-one colimit with this descriptor is
/// isomorphic to `ℤ[1/p : p ∈ P]`; an empty descriptor means `ℤ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupernaturalDescriptor {
    pub depth: usize,
    pub primes: BTreeMap<u64, Multiplicity>,
}

impl SupernaturalDescriptor {
    pub fn infinite_primes(&self) -> Vec<u64> {
        self.primes.iter().filter(|(_, &m)| m == Multiplicity::Infinite).map(|(&p, _)| p).collect()
    }

    /// Whether the colimit is `ℤ` (nothing becomes divisible).
    pub fn is_integers(&self) -> bool {
        self.infinite_primes().is_empty()
    }
}

impl fmt::Display for SupernaturalDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inf = self.infinite_primes();
        if inf.is_empty() {
            return f.write_str("Z");
        }
        let inv: Vec<String> = inf.iter().map(|p| format!("1/{p}")).collect();
        write!(f, "Z[{}]", inv.join(", "))
    }
}

pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        let mut k = 0;
        while n.is_multiple_of(p) {
            n /= p;
            k += 1;
        }
        if k > 0 {
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Descriptor of `lim(ℤ →×w_1 ℤ →×w_2 ⋯)`.
///
/// The first `depth` windings contribute finite multiplicities. When
/// `periodic_tail` is `Some(k)`, the last `k` windings repeat forever and every
/// prime dividing one of them is flagged infinite.
pub fn colimit_rank1(windings: &[i64], periodic_tail: Option<usize>, depth: usize) -> Result<SupernaturalDescriptor> {
    if let Some(i) = windings.iter().position(|&w| w == 0) {
        return Err(Error::invalid(format!("winding {i} is zero")));
    }
    if depth > windings.len() {
        return Err(Error::invalid(format!("depth {depth} exceeds the {} windings given", windings.len())));
    }
    let tail = match periodic_tail {
        Some(k) if k == 0 || k > windings.len() => {
            return Err(Error::invalid(format!("periodic tail of length {k} does not fit")))
        }
        Some(k) => &windings[windings.len() - k..],
        None => &[][..],
    };
    let mut primes: BTreeMap<u64, Multiplicity> = BTreeMap::new();
    for &w in &windings[..depth] {
        for (p, k) in factorize(w.unsigned_abs()) {
            let e = primes.entry(p).or_insert(Multiplicity::Finite(0));
            if let Multiplicity::Finite(m) = e {
                *m += k;
            }
        }
    }
    for &w in tail {
        for (p, _) in factorize(w.unsigned_abs()) {
            primes.insert(p, Multiplicity::Infinite);
        }
    }
    Ok(SupernaturalDescriptor { depth, primes })
}
