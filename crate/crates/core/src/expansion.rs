//! Flow expansions, their embeddings, and the direct system of knot groups.
//!
//! A flow expansion is a sequence of wedges `X_1 ← X_2 ← …` of `n_i` circles
//! with positive bonding maps. An embedded expansion adds one
//! [`EmbeddingStage`] per bonding; the complements give a direct system
//! `π₁(E_1) → π₁(E_2) → …` whose first group is free on the outer loops.
//! Stages are numbered from 1.
//!
//! Bonding matrices use the transition convention: entry `(i, j)` counts
//! letter `i` in the image of letter `j`, so bonding `i` has `n_i` rows and
//! `n_{i+1}` columns. Homology maps run the other way and are transposes.

use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::diagram::{
    abelianized_inclusion, builtin_fixture, canonical_stage, duality_check_matrix, inclusion_morphism,
    EmbeddingStage,
};
use crate::error::{Error, Result};
use crate::fpgroup::homs::MAX_RANK;
use crate::fpgroup::{
    abelianize, colimit_rank1, count_homs, nielsen_reduce, tietze_simplify_tracked, AbelianDescriptor,
    DirectSystem, FiniteTarget, GroupMorphism, GroupPresentation, SupernaturalDescriptor, DEFAULT_BUDGET,
};
use crate::matrix::IntMatrix;
use crate::symbolic::{SturmianParams, Substitution, SymbolicWord};

/// Positive map from a wedge of `domain` circles to a wedge of `codomain`
/// circles, given by one nonempty loop word per domain circle.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bonding {
    codomain: usize,
    images: Vec<SymbolicWord>,
}

impl Bonding {
    pub fn new(codomain: usize, images: Vec<SymbolicWord>) -> Result<Self> {
        if images.is_empty() {
            return Err(Error::invalid("a bonding needs at least one image"));
        }
        for (j, w) in images.iter().enumerate() {
            if w.is_empty() {
                return Err(Error::invalid(format!("bonding image {j} is empty")));
            }
            if let Some(&l) = w.letters().iter().find(|&&l| l as usize >= codomain) {
                return Err(Error::invalid(format!(
                    "bonding image {j} uses loop {l}, but the target wedge has {codomain} loops"
                )));
            }
        }
        Ok(Bonding { codomain, images })
    }

    pub fn domain(&self) -> usize {
        self.images.len()
    }

    pub fn codomain(&self) -> usize {
        self.codomain
    }

    pub fn images(&self) -> &[SymbolicWord] {
        &self.images
    }

    /// `codomain × domain` letter-count matrix.
    pub fn transition_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.codomain, self.domain());
        for (j, w) in self.images.iter().enumerate() {
            for &i in w.letters() {
                m[(i as usize, j)] += 1;
            }
        }
        m
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Bonding) -> Result<Bonding> {
        if other.codomain != self.domain() {
            return Err(Error::RankMismatch(format!(
                "cannot compose a bonding on {} loops after one onto {} loops",
                self.domain(),
                other.codomain
            )));
        }
        let images = other
            .images
            .iter()
            .map(|w| SymbolicWord::new(w.letters().iter().flat_map(|&l| self.images[l as usize].letters().to_vec()).collect()))
            .collect();
        Bonding::new(self.codomain, images)
    }
}

impl From<&Substitution> for Bonding {
    fn from(s: &Substitution) -> Self {
        Bonding { codomain: s.alphabet().size(), images: s.images().to_vec() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct BondingRepr {
    images: Vec<SymbolicWord>,
}

/// Ranks `n_1, n_2, …` and bondings `f_i : X_{i+1} → X_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FlowExpansion {
    ranks: Vec<usize>,
    bondings: Vec<Bonding>,
}

impl FlowExpansion {
    pub fn new(ranks: Vec<usize>, bondings: Vec<Bonding>) -> Result<Self> {
        if ranks.is_empty() {
            return Err(Error::invalid("an expansion needs at least one wedge"));
        }
        if let Some(i) = ranks.iter().position(|&n| n == 0) {
            return Err(Error::invalid(format!("wedge {} has no circles", i + 1)));
        }
        if bondings.len() + 1 != ranks.len() {
            return Err(Error::RankMismatch(format!("{} bondings for {} wedges", bondings.len(), ranks.len())));
        }
        for (i, b) in bondings.iter().enumerate() {
            if b.codomain() != ranks[i] || b.domain() != ranks[i + 1] {
                return Err(Error::RankMismatch(format!(
                    "bonding {} maps {} loops onto {}, expected {} onto {}",
                    i + 1,
                    b.domain(),
                    b.codomain(),
                    ranks[i + 1],
                    ranks[i]
                )));
            }
        }
        Ok(FlowExpansion { ranks, bondings })
    }

    /// Constant-rank expansion with the given substitutions as bondings.
    pub fn from_substitutions(subs: &[Substitution]) -> Result<Self> {
        let n = subs.first().map_or(1, |s| s.alphabet().size());
        if let Some(s) = subs.iter().find(|s| s.alphabet().size() != n) {
            return Err(Error::AlphabetMismatch { left: n, right: s.alphabet().size() });
        }
        FlowExpansion::new(vec![n; subs.len() + 1], subs.iter().map(Bonding::from).collect())
    }

    /// `σ_{n_1}, σ_{n_2}, …` with the final entry repeated until there are
    /// `depth` bondings.
    pub fn sturmian(params: &SturmianParams, depth: usize) -> Self {
        let mut subs = params.substitutions();
        let last = subs.last().expect("parameters are nonempty").clone();
        while subs.len() < depth {
            subs.push(last.clone());
        }
        FlowExpansion::from_substitutions(&subs).expect("Sturmian substitutions share the binary alphabet")
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn bondings(&self) -> &[Bonding] {
        &self.bondings
    }

    /// Groups consecutive bondings `k` at a time, dropping an incomplete final group.
    pub fn telescope(&self, k: usize) -> Result<FlowExpansion> {
        if k == 0 {
            return Err(Error::invalid("telescoping step must be positive"));
        }
        let blocks = self.bondings.len() / k;
        if blocks == 0 {
            return Err(Error::invalid(format!("fewer than {k} bondings to telescope")));
        }
        let mut bondings = Vec::with_capacity(blocks);
        for b in 0..blocks {
            let mut acc = self.bondings[b * k].clone();
            for next in &self.bondings[b * k + 1..(b + 1) * k] {
                acc = acc.compose(next)?;
            }
            bondings.push(acc);
        }
        let ranks = (0..=blocks).map(|b| self.ranks[b * k]).collect();
        FlowExpansion::new(ranks, bondings)
    }
}

impl Serialize for FlowExpansion {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ExpansionRepr {
            ranks: self.ranks.clone(),
            bondings: self.bondings.iter().map(|b| BondingRepr { images: b.images.clone() }).collect(),
            stages: None,
        }
        .serialize(s)
    }
}

/// Where an embedding stage came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StageSource {
    Fixture(String),
    Canonical,
    Inline,
}

impl fmt::Display for StageSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StageSource::Fixture(n) => f.write_str(n),
            StageSource::Canonical => f.write_str("canonical"),
            StageSource::Inline => f.write_str("inline"),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum StageEntry {
    Name(String),
    Inline(Box<EmbeddingStage>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct ExpansionRepr {
    ranks: Vec<usize>,
    bondings: Vec<BondingRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    stages: Option<Vec<StageEntry>>,
}

/// A flow expansion with one embedding stage per bonding.
#[derive(Clone, Debug)]
pub struct EmbeddedExpansion {
    base: FlowExpansion,
    stages: Vec<EmbeddingStage>,
    sources: Vec<StageSource>,
}

impl EmbeddedExpansion {
    /// Stage `i` must have `n_i` traces and `n_{i+1}` loops.
    pub fn new(base: FlowExpansion, stages: Vec<(StageSource, EmbeddingStage)>) -> Result<Self> {
        if stages.len() != base.bondings.len() {
            return Err(Error::RankMismatch(format!(
                "{} stages for {} bondings",
                stages.len(),
                base.bondings.len()
            )));
        }
        for (i, (_, s)) in stages.iter().enumerate() {
            if s.traces().len() != base.ranks[i] || s.diagram().loops().len() != base.ranks[i + 1] {
                return Err(Error::RankMismatch(format!(
                    "stage {} has {} traces and {} loops, expected {} and {}",
                    i + 1,
                    s.traces().len(),
                    s.diagram().loops().len(),
                    base.ranks[i],
                    base.ranks[i + 1]
                )));
            }
        }
        let (sources, stages) = stages.into_iter().unzip();
        Ok(EmbeddedExpansion { base, stages, sources })
    }

    /// Every stage the standard planar one.
    pub fn canonical(base: FlowExpansion) -> Self {
        let stages = base
            .bondings
            .iter()
            .map(|b| (StageSource::Canonical, canonical_stage(&b.transition_matrix()).expect("positive bonding")))
            .collect();
        EmbeddedExpansion::new(base, stages).expect("canonical stages match the ranks")
    }

    /// Reads `{"ranks", "bondings", "stages"}`; stages are fixture names,
    /// `"canonical"`, or inline diagrams, and default to canonical.
    pub fn from_json(text: &str) -> Result<Self> {
        let repr: ExpansionRepr = serde_json::from_str(text)?;
        let mut bondings = Vec::with_capacity(repr.bondings.len());
        for (i, b) in repr.bondings.into_iter().enumerate() {
            let codomain = *repr.ranks.get(i).ok_or_else(|| Error::RankMismatch("more bondings than wedges".into()))?;
            bondings.push(Bonding::new(codomain, b.images)?);
        }
        let base = FlowExpansion::new(repr.ranks, bondings)?;
        let Some(entries) = repr.stages else {
            return Ok(EmbeddedExpansion::canonical(base));
        };
        let mut stages = Vec::with_capacity(entries.len());
        for (i, e) in entries.into_iter().enumerate() {
            stages.push(match e {
                StageEntry::Name(n) if n == "canonical" => {
                    let b = base.bondings.get(i).ok_or_else(|| Error::RankMismatch("more stages than bondings".into()))?;
                    (StageSource::Canonical, canonical_stage(&b.transition_matrix())?)
                }
                StageEntry::Name(n) => {
                    let s = builtin_fixture(&n)?;
                    (StageSource::Fixture(n), s)
                }
                StageEntry::Inline(s) => (StageSource::Inline, *s),
            });
        }
        EmbeddedExpansion::new(base, stages)
    }

    pub fn to_json(&self) -> String {
        let stages = self
            .stages
            .iter()
            .zip(&self.sources)
            .map(|(s, src)| match src {
                StageSource::Fixture(n) => StageEntry::Name(n.clone()),
                StageSource::Canonical => StageEntry::Name("canonical".into()),
                StageSource::Inline => StageEntry::Inline(Box::new(s.clone())),
            })
            .collect();
        let repr = ExpansionRepr {
            ranks: self.base.ranks.clone(),
            bondings: self.base.bondings.iter().map(|b| BondingRepr { images: b.images.clone() }).collect(),
            stages: Some(stages),
        };
        serde_json::to_string(&repr).expect("expansion serializes")
    }

    pub fn base(&self) -> &FlowExpansion {
        &self.base
    }

    pub fn stages(&self) -> &[EmbeddingStage] {
        &self.stages
    }

    pub fn sources(&self) -> &[StageSource] {
        &self.sources
    }

    /// Duality verdict for each of the first `depth` stages.
    pub fn duality(&self, depth: usize) -> Result<Vec<bool>> {
        check_depth(depth, self.stages.len())?;
        self.stages[..depth]
            .iter()
            .zip(&self.base.bondings)
            .map(|(s, b)| duality_check_matrix(s, &b.transition_matrix()))
            .collect()
    }
}

fn check_depth(depth: usize, available: usize) -> Result<()> {
    if depth > available {
        return Err(Error::invalid(format!("depth {depth} exceeds the {available} available stages")));
    }
    Ok(())
}

/// Complement groups of an embedded expansion up to some depth.
#[derive(Clone, Debug)]
pub struct KnotGroupSystem {
    system: DirectSystem,
}

impl KnotGroupSystem {
    pub fn system(&self) -> &DirectSystem {
        &self.system
    }

    /// Number of groups, `depth + 1`.
    pub fn len(&self) -> usize {
        self.system.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// `π₁(E_1) → ⋯ → π₁(E_{depth+1})`, with `π₁(E_1)` free on the outer loops.
pub fn knot_group_system(e: &EmbeddedExpansion, depth: usize) -> Result<KnotGroupSystem> {
    check_depth(depth, e.stages.len())?;
    let mut outer = GroupPresentation::free(e.base.ranks[0]);
    if let Some(names) = e.stages.first().and_then(|s| s.outer_names()) {
        outer = outer.with_names(names.to_vec())?;
    }
    let mut presentations = vec![outer];
    let mut maps = Vec::with_capacity(depth);
    for stage in &e.stages[..depth] {
        let m = inclusion_morphism(stage, presentations.last().expect("nonempty"))?;
        presentations.push(m.target().clone());
        maps.push(m);
    }
    Ok(KnotGroupSystem { system: DirectSystem::new(presentations, maps)? })
}

/// Evidence that a stage group is not free.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase", tag = "kind")]
pub enum NonFreeWitness {
    /// The abelianization has torsion.
    Torsion { abelianization: String },
    /// A free group with this abelianization has `expected` homomorphisms
    /// into `target`, but the stage group has `count`.
    HomCount { target: String, count: u128, expected: u128 },
}

impl fmt::Display for NonFreeWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NonFreeWitness::Torsion { abelianization } => write!(f, "abelianization {abelianization} has torsion"),
            NonFreeWitness::HomCount { target, count, expected } => {
                write!(f, "{count} homomorphisms into {target}, a free group would have {expected}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    CertifiedFree,
    NotFreeAtStage { stage: usize, witness: NonFreeWitness },
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::CertifiedFree => f.write_str("certified-free"),
            Verdict::NotFreeAtStage { stage, .. } => write!(f, "not-free-at-stage({stage})"),
            Verdict::Inconclusive => f.write_str("inconclusive"),
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            verdict: &'static str,
            #[serde(skip_serializing_if = "Option::is_none")]
            stage: Option<usize>,
            #[serde(skip_serializing_if = "Option::is_none")]
            witness: Option<&'a NonFreeWitness>,
        }
        let r = match self {
            Verdict::CertifiedFree => Repr { verdict: "certified-free", stage: None, witness: None },
            Verdict::NotFreeAtStage { stage, witness } => {
                Repr { verdict: "not-free-at-stage", stage: Some(*stage), witness: Some(witness) }
            }
            Verdict::Inconclusive => Repr { verdict: "inconclusive", stage: None, witness: None },
        };
        r.serialize(s)
    }
}

/// Witness that `p` is not free, from torsion or from hom counts into `S₃`
/// and `S₄` that differ from those of the free group of the same first
/// homology rank.
pub fn non_free_witness(p: &GroupPresentation) -> Result<Option<NonFreeWitness>> {
    let ab = abelianize(p);
    if !ab.is_free() {
        return Ok(Some(NonFreeWitness::Torsion { abelianization: ab.to_string() }));
    }
    let simplified = tietze_simplify_tracked(p, DEFAULT_BUDGET).presentation;
    if simplified.rank() > MAX_RANK {
        return Ok(None);
    }
    for target in [FiniteTarget::S3, FiniteTarget::S4] {
        let count = count_homs(&simplified, target)?;
        let expected = (target.order() as u128).pow(ab.free_rank as u32);
        if count != expected {
            return Ok(Some(NonFreeWitness::HomCount { target: target.to_string(), count, expected }));
        }
    }
    Ok(None)
}

/// Whether every group of the system is free: certified when each
/// Tietze-simplifies to a free presentation, refuted at the first stage with
/// a non-freeness witness.
pub fn unknotted_certificate(sys: &KnotGroupSystem) -> Verdict {
    let mut all_free = true;
    for (i, p) in sys.system.presentations().iter().enumerate() {
        if tietze_simplify_tracked(p, DEFAULT_BUDGET).presentation.is_free() {
            continue;
        }
        all_free = false;
        if let Ok(Some(witness)) = non_free_witness(p) {
            return Verdict::NotFreeAtStage { stage: i + 1, witness };
        }
    }
    if all_free {
        Verdict::CertifiedFree
    } else {
        Verdict::Inconclusive
    }
}

/// Whether `m` is an isomorphism between groups that both simplify to free
/// groups; `None` when either does not.
pub fn simplified_automorphism(m: &GroupMorphism) -> Result<Option<bool>> {
    let s = tietze_simplify_tracked(m.source(), DEFAULT_BUDGET);
    let t = tietze_simplify_tracked(m.target(), DEFAULT_BUDGET);
    if !s.presentation.is_free() || !t.presentation.is_free() {
        return Ok(None);
    }
    if s.presentation.rank() != t.presentation.rank() {
        return Ok(Some(false));
    }
    let images: Vec<_> = s.kept.iter().map(|&k| t.rewrite(&m.images()[k])).collect();
    Ok(Some(nielsen_reduce(&images, t.presentation.rank())?.is_basis))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StableKnotGroup {
    /// First stage from which every later inclusion is an isomorphism.
    pub stage: usize,
    /// Simplified presentation of that stage.
    pub presentation: GroupPresentation,
}

/// The group at the first stage `N` after which every inclusion is a
/// verified isomorphism of free groups; `None` when no inclusion past some
/// stage is verified.
pub fn stable_knot_group(sys: &KnotGroupSystem) -> Result<Option<StableKnotGroup>> {
    let maps = sys.system.maps();
    let mut start = maps.len();
    while start > 0 && simplified_automorphism(&maps[start - 1])? == Some(true) {
        start -= 1;
    }
    if start == maps.len() {
        return Ok(None);
    }
    let presentation = tietze_simplify_tracked(&sys.system.presentations()[start], DEFAULT_BUDGET).presentation;
    Ok(Some(StableKnotGroup { stage: start + 1, presentation }))
}

/// First Čech cohomology as a colimit of `ℤ^{n_i}` under the transposed
/// bonding matrices, reading the last bonding as repeating forever.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase", tag = "kind")]
pub enum CechH1 {
    /// Every wedge is a circle; the colimit is determined by the windings.
    Rank1 { descriptor: SupernaturalDescriptor, display: String },
    General {
        depth: usize,
        /// Transposed bonding matrices, `n_{i+1} × n_i`.
        matrices: Vec<IntMatrix>,
        /// Rank of the composite `ℤ^{n_1} → ℤ^{n_{depth+1}}`.
        stable_rank: usize,
        all_unimodular: bool,
        /// `ℤ^n` when every bonding, including the repeating tail, is unimodular.
        limit: Option<AbelianDescriptor>,
    },
}

impl fmt::Display for CechH1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CechH1::Rank1 { display, .. } => f.write_str(display),
            CechH1::General { stable_rank, limit: Some(l), .. } => write!(f, "{l} (stable rank {stable_rank})"),
            CechH1::General { stable_rank, .. } => write!(f, "stable rank {stable_rank}"),
        }
    }
}

pub fn cech_h1(e: &FlowExpansion, depth: usize) -> Result<CechH1> {
    check_depth(depth, e.bondings.len())?;
    let tail = (!e.bondings.is_empty()).then_some(1);
    if e.ranks.iter().all(|&n| n == 1) {
        let windings: Vec<i64> = e.bondings.iter().map(|b| b.images[0].len() as i64).collect();
        let descriptor = colimit_rank1(&windings, tail, depth)?;
        return Ok(CechH1::Rank1 { display: descriptor.to_string(), descriptor });
    }
    let matrices: Vec<IntMatrix> = e.bondings[..depth].iter().map(|b| b.transition_matrix().transpose()).collect();
    let mut composite = IntMatrix::identity(e.ranks[0]);
    for m in &matrices {
        composite = m.checked_mul(&composite)?;
    }
    let unimodular = |m: &IntMatrix| m.rows() == m.cols() && m.is_unimodular();
    let all_unimodular = matrices.iter().all(unimodular);
    let tail_unimodular = e.bondings.last().is_none_or(|b| unimodular(&b.transition_matrix()));
    let limit = (all_unimodular && tail_unimodular).then(|| AbelianDescriptor::free(e.ranks[depth]));
    Ok(CechH1::General { depth, stable_rank: composite.rank(), matrices, all_unimodular, limit })
}

/// Whether two embeddings of the same expansion have the same abelianized
/// knot-group systems up to `depth`.
pub fn embedding_independence_check(e1: &EmbeddedExpansion, e2: &EmbeddedExpansion, depth: usize) -> Result<bool> {
    if e1.base != e2.base {
        return Err(Error::invalid("embeddings are of different flow expansions"));
    }
    check_depth(depth, e1.stages.len().min(e2.stages.len()))?;
    for (s1, s2) in e1.stages[..depth].iter().zip(&e2.stages[..depth]) {
        if abelianized_inclusion(s1) != abelianized_inclusion(s2) {
            return Ok(false);
        }
        if abelianize(&s1.inner_presentation()) != abelianize(&s2.inner_presentation()) {
            return Ok(false);
        }
    }
    Ok(true)
}
