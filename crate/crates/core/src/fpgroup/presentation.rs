use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize};

use super::tietze::{tietze_simplify_tracked, DEFAULT_BUDGET};
use super::word::{default_name, GroupWord};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// A finite presentation `⟨g_0, …, g_{rank-1} | relators⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupPresentation {
    rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    names: Option<Vec<String>>,
    relators: Vec<GroupWord>,
}

#[derive(Deserialize)]
struct PresentationRepr {
    rank: usize,
    #[serde(default)]
    names: Option<Vec<String>>,
    #[serde(default)]
    relators: Vec<GroupWord>,
}

impl<'de> Deserialize<'de> for GroupPresentation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PresentationRepr::deserialize(d)?;
        let mut p = GroupPresentation::new(r.rank, r.relators).map_err(D::Error::custom)?;
        if let Some(names) = r.names {
            p = p.with_names(names).map_err(D::Error::custom)?;
        }
        Ok(p)
    }
}

impl GroupPresentation {
    /// Trivial relators are dropped; every generator index must be below `rank`.
    pub fn new(rank: usize, relators: Vec<GroupWord>) -> Result<Self> {
        for r in &relators {
            if let Some(g) = r.max_generator().filter(|&g| g >= rank) {
                return Err(Error::invalid(format!("relator {r} uses generator {g} but rank is {rank}")));
            }
        }
        let relators = relators.into_iter().filter(|r| !r.is_identity()).collect();
        Ok(GroupPresentation { rank, names: None, relators })
    }

    pub fn free(rank: usize) -> Self {
        GroupPresentation { rank, names: None, relators: Vec::new() }
    }

    /// Builds relators `l·r⁻¹` from equations `l = r`.
    pub fn from_equations(rank: usize, equations: &[(GroupWord, GroupWord)]) -> Result<Self> {
        Self::new(rank, equations.iter().map(|(l, r)| l.mul(&r.inverse())).collect())
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.rank {
            return Err(Error::invalid(format!("{} names for {} generators", names.len(), self.rank)));
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn relators(&self) -> &[GroupWord] {
        &self.relators
    }

    pub fn names(&self) -> Vec<String> {
        self.names.clone().unwrap_or_else(|| (0..self.rank).map(default_name).collect())
    }

    pub fn name(&self, gen: usize) -> String {
        self.names.as_ref().and_then(|n| n.get(gen).cloned()).unwrap_or_else(|| default_name(gen))
    }

    pub fn has_custom_names(&self) -> bool {
        self.names.is_some()
    }

    /// No relators, so the group is visibly free of rank `rank`.
    pub fn is_free(&self) -> bool {
        self.relators.is_empty()
    }

    pub fn total_relator_length(&self) -> usize {
        self.relators.iter().map(|r| r.len()).sum()
    }

    /// Relation matrix: one row per relator, one column per generator.
    pub fn relation_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.relators.len(), self.rank);
        for (i, r) in self.relators.iter().enumerate() {
            for (j, e) in r.exponent_sums(self.rank).into_iter().enumerate() {
                m[(i, j)] = e.into();
            }
        }
        m
    }

    pub fn format_word(&self, w: &GroupWord) -> String {
        w.display_with(&self.names())
    }

    /// Human-readable `⟨a, b | r1, r2⟩`.
    pub fn display(&self) -> String {
        let gens = self.names().join(", ");
        let rels: Vec<String> = self.relators.iter().map(|r| self.format_word(r)).collect();
        if rels.is_empty() {
            format!("<{gens} | >")
        } else {
            format!("<{gens} | {}>", rels.join(", "))
        }
    }

    /// Same group with generators renamed by `perm` (old index `i` becomes `perm[i]`).
    pub fn relabel(&self, perm: &[usize]) -> Result<GroupPresentation> {
        let mut seen = vec![false; self.rank];
        if perm.len() != self.rank || perm.iter().any(|&p| p >= self.rank || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::invalid("relabeling is not a permutation of the generators"));
        }
        let images: Vec<GroupWord> = perm.iter().map(|&p| GroupWord::generator(p)).collect();
        let relators = self.relators.iter().map(|r| r.substitute(&images)).collect();
        let mut out = GroupPresentation::new(self.rank, relators)?;
        if let Some(names) = &self.names {
            let mut renamed = names.clone();
            for (i, &p) in perm.iter().enumerate() {
                renamed[p] = names[i].clone();
            }
            out.names = Some(renamed);
        }
        Ok(out)
    }
}

/// Whether relator images have been checked to be trivial in the target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Validity {
    /// Every source relator maps to the identity.
    Verified,
    /// The target word problem could not be decided here.
    Unverified,
}

/// A homomorphism given by generator images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupMorphism {
    source: GroupPresentation,
    target: GroupPresentation,
    images: Vec<GroupWord>,
    validity: Validity,
}

/// JSON form of a morphism; source and target come from context.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MorphismRepr {
    pub images: Vec<GroupWord>,
}

impl GroupMorphism {
    /// Checks relator images when the target is free, or when it Tietze-simplifies
    /// to a free presentation; otherwise the morphism is kept but marked unverified.
    /// A relator image that is provably nontrivial is an error.
    pub fn new(source: GroupPresentation, target: GroupPresentation, images: Vec<GroupWord>) -> Result<Self> {
        if images.len() != source.rank() {
            return Err(Error::RankMismatch(format!(
                "{} images for a source of rank {}",
                images.len(),
                source.rank()
            )));
        }
        for img in &images {
            if let Some(g) = img.max_generator().filter(|&g| g >= target.rank()) {
                return Err(Error::invalid(format!("image {img} uses generator {g} outside the target")));
            }
        }
        let relator_images: Vec<GroupWord> = source.relators().iter().map(|r| r.substitute(&images)).collect();
        let validity = if relator_images.iter().all(GroupWord::is_identity) {
            Validity::Verified
        } else {
            let simp = tietze_simplify_tracked(&target, DEFAULT_BUDGET);
            if simp.presentation.is_free() {
                if let Some(bad) = relator_images.iter().find(|r| !simp.rewrite(r).is_identity()) {
                    return Err(Error::invalid(format!(
                        "relator image {} is nontrivial in the target",
                        target.format_word(bad)
                    )));
                }
                Validity::Verified
            } else {
                Validity::Unverified
            }
        };
        Ok(GroupMorphism { source, target, images, validity })
    }

    pub fn from_repr(source: GroupPresentation, target: GroupPresentation, repr: MorphismRepr) -> Result<Self> {
        Self::new(source, target, repr.images)
    }

    pub fn identity(p: &GroupPresentation) -> Self {
        let images = (0..p.rank()).map(GroupWord::generator).collect();
        GroupMorphism { source: p.clone(), target: p.clone(), images, validity: Validity::Verified }
    }

    pub fn source(&self) -> &GroupPresentation {
        &self.source
    }

    pub fn target(&self) -> &GroupPresentation {
        &self.target
    }

    pub fn images(&self) -> &[GroupWord] {
        &self.images
    }

    pub fn validity(&self) -> Validity {
        self.validity
    }

    pub fn apply(&self, w: &GroupWord) -> GroupWord {
        w.substitute(&self.images)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupMorphism) -> Result<GroupMorphism> {
        if self.target.rank() != other.source.rank() {
            return Err(Error::RankMismatch("composed morphisms do not match".into()));
        }
        let images = self.images.iter().map(|w| other.apply(w)).collect();
        let validity = if self.validity == Validity::Verified && other.validity == Validity::Verified {
            Validity::Verified
        } else {
            Validity::Unverified
        };
        Ok(GroupMorphism { source: self.source.clone(), target: other.target.clone(), images, validity })
    }

    /// Exponent-sum matrix: column `j` is the image of source generator `j`
    /// in `ℤ^{target rank}`.
    pub fn exponent_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.target.rank(), self.source.rank());
        for (j, img) in self.images.iter().enumerate() {
            for (i, e) in img.exponent_sums(self.target.rank()).into_iter().enumerate() {
                m[(i, j)] = e.into();
            }
        }
        m
    }

    pub fn to_repr(&self) -> MorphismRepr {
        MorphismRepr { images: self.images.clone() }
    }

    pub fn display_images(&self) -> Vec<String> {
        self.images.iter().map(|w| self.target.format_word(w)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> GroupWord {
        GroupWord::parse_letters(s).unwrap()
    }

    #[test]
    fn trivial_relators_dropped() {
        let p = GroupPresentation::new(2, vec![w("aA"), w("ab")]).unwrap();
        assert_eq!(p.relators().len(), 1);
        assert!(GroupPresentation::new(1, vec![w("b")]).is_err());
    }

    #[test]
    fn json_format() {
        let json = r#"{"rank": 3, "names": ["a","b","c"], "relators": [[[0,1],[1,1],[2,-1],[0,-1]]]}"#;
        let p: GroupPresentation = serde_json::from_str(json).unwrap();
        assert_eq!(p.rank(), 3);
        assert_eq!(p.relators()[0], w("abCA"));
        assert_eq!(p.display(), "<a, b, c | abc^-1a^-1>");
        let back: GroupPresentation = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn morphism_into_free_group_verified() {
        let src = GroupPresentation::new(2, vec![w("abAB")]).unwrap();
        let tgt = GroupPresentation::free(1);
        let m = GroupMorphism::new(src.clone(), tgt.clone(), vec![w("a"), w("aa")]).unwrap();
        assert_eq!(m.validity(), Validity::Verified);
        let bad = GroupPresentation::new(1, vec![w("a")]).unwrap();
        assert!(GroupMorphism::new(bad, tgt, vec![w("a")]).is_err());
    }

    #[test]
    fn morphism_into_nonfree_target_unverified() {
        let src = GroupPresentation::new(1, vec![w("aa")]).unwrap();
        let tgt = GroupPresentation::new(2, vec![w("aaa"), w("bb"), w("abAB")]).unwrap();
        let m = GroupMorphism::new(src, tgt, vec![w("b")]).unwrap();
        assert_eq!(m.validity(), Validity::Unverified);
    }

    #[test]
    fn relabel_is_permutation() {
        let p = GroupPresentation::new(2, vec![w("aab")]).unwrap();
        let q = p.relabel(&[1, 0]).unwrap();
        assert_eq!(q.relators()[0], w("bba"));
        assert!(p.relabel(&[0, 0]).is_err());
    }
}
