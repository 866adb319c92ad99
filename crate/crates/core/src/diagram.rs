//! Wedge-of-circles embedding diagrams and their Wirtinger presentations.
//!
//! A diagram is purely combinatorial: oriented arcs, crossings where one arc
//! passes under another, and the wedge point where every loop starts and ends.
//! Arcs are split at the wedge point and at every undercrossing.
//!
//! Crossing convention: a crossing of sign `+1` gives
//! `underOut = over · underIn · over⁻¹`, sign `−1` conjugates by `over⁻¹`.
//! With this convention the trefoil fixture reproduces `ab = ca = bc`.
//! The wedge point gives `y₁⋯yₙ = x₁⋯xₙ` for incoming arcs `y` and outgoing
//! arcs `x`.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fpgroup::{tietze_simplify_tracked, GroupMorphism, GroupPresentation, GroupWord, Syllable, DEFAULT_BUDGET};
use crate::matrix::IntMatrix;
use crate::symbolic::Substitution;

pub const CROSSING_CONVENTION: &str =
    "sign +1: underOut = over·underIn·over^-1; sign -1: underOut = over^-1·underIn·over; wedge: y1⋯yn = x1⋯xn";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Crossing {
    pub over: usize,
    pub under_in: usize,
    pub under_out: usize,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Wedge {
    #[serde(rename = "in")]
    pub incoming: Vec<usize>,
    #[serde(rename = "out")]
    pub outgoing: Vec<usize>,
}

/// Validated wedge diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DiagramRepr", into = "DiagramRepr")]
pub struct WedgeDiagram {
    arcs: usize,
    names: Option<Vec<String>>,
    loops: Vec<Vec<usize>>,
    crossings: Vec<Crossing>,
    wedge: Wedge,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct DiagramRepr {
    loops: Vec<Vec<usize>>,
    arcs: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    names: Option<Vec<String>>,
    #[serde(default)]
    crossings: Vec<Crossing>,
    wedge: Wedge,
}

impl TryFrom<DiagramRepr> for WedgeDiagram {
    type Error = Error;

    fn try_from(r: DiagramRepr) -> Result<Self> {
        let d = WedgeDiagram::new(r.arcs, r.loops, r.crossings, r.wedge)?;
        match r.names {
            Some(n) => d.with_names(n),
            None => Ok(d),
        }
    }
}

impl From<WedgeDiagram> for DiagramRepr {
    fn from(d: WedgeDiagram) -> Self {
        DiagramRepr { loops: d.loops, arcs: d.arcs, names: d.names, crossings: d.crossings, wedge: d.wedge }
    }
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedDiagram(msg.into())
}

impl WedgeDiagram {
    /// Checks that every arc starts and ends exactly once (at a crossing or
    /// the wedge), that the wedge has one in/out slot per loop, and that each
    /// loop runs from the wedge through its crossings back to the wedge.
    pub fn new(arcs: usize, loops: Vec<Vec<usize>>, crossings: Vec<Crossing>, wedge: Wedge) -> Result<Self> {
        if loops.is_empty() {
            return Err(malformed("a wedge needs at least one loop"));
        }
        let check = |a: usize, what: &str| {
            if a < arcs {
                Ok(())
            } else {
                Err(malformed(format!("{what} refers to arc {a}, but there are only {arcs} arcs")))
            }
        };
        for (i, c) in crossings.iter().enumerate() {
            check(c.over, &format!("crossing {i}"))?;
            check(c.under_in, &format!("crossing {i}"))?;
            check(c.under_out, &format!("crossing {i}"))?;
            if c.sign != 1 && c.sign != -1 {
                return Err(malformed(format!("crossing {i} has sign {}, expected +1 or -1", c.sign)));
            }
        }
        for &a in wedge.incoming.iter().chain(&wedge.outgoing) {
            check(a, "the wedge")?;
        }
        if wedge.incoming.len() != loops.len() || wedge.outgoing.len() != loops.len() {
            return Err(malformed(format!(
                "wedge has {} incoming and {} outgoing arcs for {} loops",
                wedge.incoming.len(),
                wedge.outgoing.len(),
                loops.len()
            )));
        }
        let mut ends = vec![0usize; arcs];
        let mut starts = vec![0usize; arcs];
        let mut next = vec![None; arcs];
        for c in &crossings {
            ends[c.under_in] += 1;
            starts[c.under_out] += 1;
            next[c.under_in] = Some(c.under_out);
        }
        for &a in &wedge.incoming {
            ends[a] += 1;
        }
        for &a in &wedge.outgoing {
            starts[a] += 1;
        }
        for a in 0..arcs {
            if ends[a] != 1 {
                return Err(malformed(format!("arc {a} ends {} times; every arc ends exactly once", ends[a])));
            }
            if starts[a] != 1 {
                return Err(malformed(format!("arc {a} begins {} times; every arc begins exactly once", starts[a])));
            }
        }
        let mut owner = vec![None; arcs];
        for (j, lp) in loops.iter().enumerate() {
            if lp.is_empty() {
                return Err(malformed(format!("loop {j} is empty")));
            }
            for &a in lp {
                check(a, &format!("loop {j}"))?;
                if let Some(k) = owner[a].replace(j) {
                    return Err(malformed(format!("arc {a} lies on both loop {k} and loop {j}")));
                }
            }
            if !wedge.outgoing.contains(&lp[0]) {
                return Err(malformed(format!("loop {j} does not start at the wedge")));
            }
            for pair in lp.windows(2) {
                if next[pair[0]] != Some(pair[1]) {
                    return Err(malformed(format!(
                        "loop {j}: arc {} is not continued by arc {} at a crossing",
                        pair[0], pair[1]
                    )));
                }
            }
            if !wedge.incoming.contains(lp.last().expect("nonempty")) {
                return Err(malformed(format!("loop {j} does not end at the wedge")));
            }
        }
        if let Some(a) = owner.iter().position(Option::is_none) {
            return Err(malformed(format!("arc {a} lies on no loop")));
        }
        Ok(WedgeDiagram { arcs, names: None, loops, crossings, wedge })
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.arcs {
            return Err(malformed(format!("{} names for {} arcs", names.len(), self.arcs)));
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn arcs(&self) -> usize {
        self.arcs
    }

    pub fn loops(&self) -> &[Vec<usize>] {
        &self.loops
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn wedge(&self) -> &Wedge {
        &self.wedge
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Index of the loop containing `arc`.
    pub fn loop_of(&self, arc: usize) -> usize {
        self.loops.iter().position(|lp| lp.contains(&arc)).expect("loops partition the arcs")
    }

    /// `loops × arcs` matrix sending each arc to its loop.
    pub fn loop_projection(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.loops.len(), self.arcs);
        for a in 0..self.arcs {
            m[(self.loop_of(a), a)] = 1.into();
        }
        m
    }

    /// Relations as `(left, right)` pairs: one per crossing, then the wedge.
    ///
    /// Sign `+1` is written `underOut·over = over·underIn`, sign `−1` is
    /// written `over·underOut = underIn·over`.
    pub fn relations(&self) -> Vec<(GroupWord, GroupWord)> {
        let g = GroupWord::generator;
        let mut out: Vec<(GroupWord, GroupWord)> = self
            .crossings
            .iter()
            .map(|c| {
                if c.sign > 0 {
                    (g(c.under_out).mul(&g(c.over)), g(c.over).mul(&g(c.under_in)))
                } else {
                    (g(c.over).mul(&g(c.under_out)), g(c.under_in).mul(&g(c.over)))
                }
            })
            .collect();
        let product = |arcs: &[usize]| GroupWord::new(arcs.iter().map(|&a| Syllable::pos(a)));
        out.push((product(&self.wedge.incoming), product(&self.wedge.outgoing)));
        out
    }
}

/// One generator per arc, one relator per crossing and one for the wedge.
pub fn wirtinger(d: &WedgeDiagram) -> GroupPresentation {
    let p = GroupPresentation::from_equations(d.arcs, &d.relations()).expect("arc indices are validated");
    match &d.names {
        Some(n) => p.with_names(n.clone()).expect("one name per arc"),
        None => p,
    }
}

/// Arcs of the inner diagram met by one outer generating loop, in order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LoopTrace(pub Vec<(usize, i8)>);

impl LoopTrace {
    pub fn word(&self) -> GroupWord {
        GroupWord::new(self.0.iter().map(|&(a, e)| Syllable { gen: a, exp: e }))
    }
}

/// An inner diagram together with the traces of the outer generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "StageRepr", into = "StageRepr")]
pub struct EmbeddingStage {
    diagram: WedgeDiagram,
    traces: Vec<LoopTrace>,
    outer_names: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct StageRepr {
    #[serde(flatten)]
    diagram: DiagramRepr,
    traces: Vec<LoopTrace>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    outer_names: Option<Vec<String>>,
}

impl TryFrom<StageRepr> for EmbeddingStage {
    type Error = Error;

    fn try_from(r: StageRepr) -> Result<Self> {
        let stage = EmbeddingStage::new(WedgeDiagram::try_from(r.diagram)?, r.traces)?;
        match r.outer_names {
            Some(n) => stage.with_outer_names(n),
            None => Ok(stage),
        }
    }
}

impl From<EmbeddingStage> for StageRepr {
    fn from(s: EmbeddingStage) -> Self {
        StageRepr { diagram: s.diagram.into(), traces: s.traces, outer_names: s.outer_names }
    }
}

impl EmbeddingStage {
    pub fn new(diagram: WedgeDiagram, traces: Vec<LoopTrace>) -> Result<Self> {
        for (i, t) in traces.iter().enumerate() {
            for &(a, e) in &t.0 {
                if a >= diagram.arcs() {
                    return Err(malformed(format!("trace {i} refers to arc {a}, but there are only {} arcs", diagram.arcs())));
                }
                if e != 1 && e != -1 {
                    return Err(malformed(format!("trace {i} has exponent {e}, expected +1 or -1")));
                }
            }
        }
        Ok(EmbeddingStage { diagram, traces, outer_names: None })
    }

    pub fn with_outer_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.traces.len() {
            return Err(malformed(format!("{} outer names for {} traces", names.len(), self.traces.len())));
        }
        self.outer_names = Some(names);
        Ok(self)
    }

    pub fn diagram(&self) -> &WedgeDiagram {
        &self.diagram
    }

    pub fn traces(&self) -> &[LoopTrace] {
        &self.traces
    }

    pub fn outer_names(&self) -> Option<&[String]> {
        self.outer_names.as_deref()
    }

    /// The free outer group generated by the traced loops.
    pub fn outer_presentation(&self) -> GroupPresentation {
        let p = GroupPresentation::free(self.traces.len());
        match &self.outer_names {
            Some(n) => p.with_names(n.clone()).expect("one name per trace"),
            None => p,
        }
    }

    pub fn inner_presentation(&self) -> GroupPresentation {
        wirtinger(&self.diagram)
    }
}

/// The morphism `outer → wirtinger(stage)` given by the traces.
///
/// The traces either cover the generators of `outer` or, when `outer` is a
/// diagram presentation with more arcs than loops, the generators of its
/// Tietze simplification; in that case each outer generator is first written
/// in the surviving generators.
pub fn inclusion_morphism(stage: &EmbeddingStage, outer: &GroupPresentation) -> Result<GroupMorphism> {
    let inner = stage.inner_presentation();
    let words: Vec<GroupWord> = stage.traces.iter().map(LoopTrace::word).collect();
    if words.len() == outer.rank() {
        return GroupMorphism::new(outer.clone(), inner, words);
    }
    let simp = tietze_simplify_tracked(outer, DEFAULT_BUDGET);
    if words.len() == simp.presentation.rank() {
        let images = simp.map.iter().map(|w| w.substitute(&words)).collect();
        return GroupMorphism::new(outer.clone(), inner, images);
    }
    Err(Error::RankMismatch(format!(
        "stage has {} traces but the outer group has {} generators ({} after simplification)",
        words.len(),
        outer.rank(),
        simp.presentation.rank()
    )))
}

/// Matrix of the inclusion on first homology, `inner loops × outer generators`:
/// column `k` counts, per inner loop, the signed arcs met by outer generator `k`.
pub fn abelianized_inclusion(stage: &EmbeddingStage) -> IntMatrix {
    let m = inclusion_morphism(stage, &stage.outer_presentation()).expect("traces match the outer rank");
    &stage.diagram.loop_projection() * &m.exponent_matrix()
}

/// Whether the abelianized inclusion equals the transpose of `transition`,
/// a matrix with one row per outer loop and one column per inner loop.
pub fn duality_check_matrix(stage: &EmbeddingStage, transition: &IntMatrix) -> Result<bool> {
    if transition.rows() != stage.traces.len() || transition.cols() != stage.diagram.loops().len() {
        return Err(Error::RankMismatch(format!(
            "transition matrix is {}×{} but the stage has {} traces and {} loops",
            transition.rows(),
            transition.cols(),
            stage.traces.len(),
            stage.diagram.loops().len()
        )));
    }
    Ok(abelianized_inclusion(stage) == transition.transpose())
}

pub fn duality_check(stage: &EmbeddingStage, sub: &Substitution) -> Result<bool> {
    duality_check_matrix(stage, &sub.transition_matrix())
}

/// The standard planar stage for a bonding with transition matrix `t`
/// (rows: outer loops, columns: inner loops).
///
/// Each inner loop is a single arc and there are no crossings. Outer loop `k`
/// meets inner loop `j` exactly `t[k][j]` times, with the meetings of the
/// different inner loops spread evenly: the `s`-th meeting with loop `j`
/// sits at `(2s+1) / (2·t[k][j])`, ties broken by loop index.
pub fn canonical_stage(t: &IntMatrix) -> Result<EmbeddingStage> {
    let rows = t.to_i64_rows().ok_or_else(|| Error::invalid("transition matrix entries too large"))?;
    let inner = t.cols();
    if inner == 0 {
        return Err(Error::invalid("a canonical stage needs at least one inner loop"));
    }
    let mut traces = Vec::with_capacity(rows.len());
    for row in &rows {
        if let Some(&bad) = row.iter().find(|&&x| x < 0) {
            return Err(Error::invalid(format!("negative transition entry {bad}")));
        }
        // (numerator, denominator, loop)
        let mut slots: Vec<(u128, u128, usize)> = Vec::new();
        for (j, &c) in row.iter().enumerate() {
            for s in 0..c as u128 {
                slots.push((2 * s + 1, 2 * c as u128, j));
            }
        }
        slots.sort_by(|a, b| match (a.0 * b.1).cmp(&(b.0 * a.1)) {
            Ordering::Equal => a.2.cmp(&b.2),
            o => o,
        });
        traces.push(LoopTrace(slots.into_iter().map(|(_, _, j)| (j, 1)).collect()));
    }
    let diagram = WedgeDiagram::new(
        inner,
        (0..inner).map(|j| vec![j]).collect(),
        Vec::new(),
        Wedge { incoming: (0..inner).collect(), outgoing: (0..inner).collect() },
    )?;
    EmbeddingStage::new(diagram, traces)
}

pub const FIXTURE_NAMES: [&str; 5] =
    ["dyadic_unknotted", "dyadic_trefoil", "fibonacci_unknotted", "fibonacci_trefoil", "thue_morse_simplified"];

/// A built-in stage together with the substitution it realizes.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub stage: EmbeddingStage,
    pub substitution: Substitution,
}

fn cross(over: usize, under_in: usize, under_out: usize, sign: i8) -> Crossing {
    Crossing { over, under_in, under_out, sign }
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn build(
    arcs: &[&str],
    loops: Vec<Vec<usize>>,
    crossings: Vec<Crossing>,
    wedge: (Vec<usize>, Vec<usize>),
    traces: Vec<Vec<(usize, i8)>>,
    outer: &[&str],
) -> EmbeddingStage {
    let d = WedgeDiagram::new(arcs.len(), loops, crossings, Wedge { incoming: wedge.0, outgoing: wedge.1 })
        .and_then(|d| d.with_names(names(arcs)))
        .expect("fixture diagram is well formed");
    EmbeddingStage::new(d, traces.into_iter().map(LoopTrace).collect())
        .and_then(|s| s.with_outer_names(names(outer)))
        .expect("fixture traces are well formed")
}

pub fn fixture(name: &str) -> Result<Fixture> {
    let (name, stage, substitution) = match name {
        // one loop through a single self-crossing; the crossing relation is trivial
        "dyadic_unknotted" => (
            "dyadic_unknotted",
            build(&["a", "a'"], vec![vec![0, 1]], vec![cross(0, 0, 1, 1)], (vec![1], vec![0]), vec![vec![(0, 1), (0, 1)]], &["x"]),
            Substitution::from_strs(&["00"])?,
        ),
        // arcs a, b, c plus a' between the wedge and the first crossing
        "dyadic_trefoil" => (
            "dyadic_trefoil",
            build(
                &["a", "b", "c", "a'"],
                vec![vec![3, 1, 2, 0]],
                vec![cross(3, 1, 2, 1), cross(2, 3, 1, 1), cross(1, 2, 0, 1)],
                (vec![0], vec![3]),
                vec![vec![(0, 1), (1, 1)]],
                &["x"],
            ),
            Substitution::from_strs(&["00"])?,
        ),
        "fibonacci_unknotted" => (
            "fibonacci_unknotted",
            build(
                &["a2", "a2'", "b2"],
                vec![vec![0, 1], vec![2]],
                vec![cross(1, 0, 1, 1)],
                (vec![1, 2], vec![0, 2]),
                vec![vec![(0, 1), (1, 1), (2, 1)], vec![(1, 1), (2, 1)]],
                &["a1", "b1"],
            ),
            Substitution::fibonacci(),
        ),
        "fibonacci_trefoil" => (
            "fibonacci_trefoil",
            build(
                &["w", "x", "y", "z", "b"],
                vec![vec![0, 1, 2, 3], vec![4]],
                vec![cross(2, 0, 1, 1), cross(3, 1, 2, 1), cross(1, 2, 3, 1)],
                (vec![3, 4], vec![0, 4]),
                vec![vec![(2, 1), (0, 1), (4, 1)], vec![(3, 1), (4, 1)]],
                &["a1", "b1"],
            ),
            Substitution::fibonacci(),
        ),
        "thue_morse_simplified" => (
            "thue_morse_simplified",
            build(
                &["a", "b", "b'", "b''"],
                vec![vec![0], vec![1, 2, 3]],
                vec![cross(0, 1, 2, -1), cross(0, 2, 3, 1)],
                (vec![0, 3], vec![0, 1]),
                vec![vec![(0, 1), (2, 1)], vec![(1, 1), (0, 1)]],
                &["A", "B"],
            ),
            Substitution::thue_morse(),
        ),
        other => {
            return Err(Error::invalid(format!(
                "unknown fixture '{other}'; expected one of {}",
                FIXTURE_NAMES.join(", ")
            )))
        }
    };
    Ok(Fixture { name, stage, substitution })
}

pub fn builtin_fixture(name: &str) -> Result<EmbeddingStage> {
    fixture(name).map(|f| f.stage)
}
