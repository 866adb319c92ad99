//! Deterministic Tietze simplification.
//!
//! One pass: cyclically reduce every relator, drop trivial relators and
//! relators equal to an earlier one up to cyclic permutation and inversion,
//! then eliminate one generator that occurs exactly once in some relator.
//! An elimination is only taken when it does not increase
//! `generators + total relator length`; among admissible eliminations the
//! cheapest wins, ties going to the shorter defining relator and then to the
//! higher generator index. Passes repeat until nothing applies or the move
//! budget is spent.

use std::collections::HashSet;

use super::presentation::GroupPresentation;
use super::word::{GroupWord, Syllable};

pub const DEFAULT_BUDGET: usize = 1000;

/// Result of a tracked simplification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplification {
    pub presentation: GroupPresentation,
    /// Original index of each surviving generator.
    pub kept: Vec<usize>,
    /// Each original generator as a word in the surviving generators.
    pub map: Vec<GroupWord>,
    pub moves: usize,
}

impl Simplification {
    /// Rewrites a word in the original generators into the surviving ones.
    pub fn rewrite(&self, w: &GroupWord) -> GroupWord {
        w.substitute(&self.map)
    }

    /// Each surviving generator as a word in the original generators.
    pub fn section(&self) -> Vec<GroupWord> {
        self.kept.iter().map(|&g| GroupWord::generator(g)).collect()
    }
}

pub fn tietze_simplify(p: &GroupPresentation, budget: usize) -> GroupPresentation {
    tietze_simplify_tracked(p, budget).presentation
}

struct State {
    rank: usize,
    relators: Vec<GroupWord>,
    kept: Vec<usize>,
    map: Vec<GroupWord>,
    moves: usize,
}

impl State {
    fn cost(&self) -> usize {
        self.rank + self.relators.iter().map(GroupWord::len).sum::<usize>()
    }

    /// Cyclic reduction plus removal of trivial and duplicate relators; each
    /// removal counts as one move.
    fn clean(&mut self, budget: usize) {
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(self.relators.len());
        for r in self.relators.drain(..) {
            let r = r.cyclic_reduce();
            let redundant = r.is_identity() || !seen.insert(r.cyclic_canonical());
            if redundant && self.moves < budget {
                self.moves += 1;
            } else if !r.is_identity() {
                out.push(r);
            }
        }
        self.relators = out;
    }

    /// Candidate `(cost, relator length, generator, relator index, value)` for
    /// eliminating `gen` via relator `idx`, where `value` expresses `gen`.
    fn eliminations(&self) -> Vec<(usize, usize, usize, usize, GroupWord)> {
        let mut out = Vec::new();
        for (idx, r) in self.relators.iter().enumerate() {
            for gen in 0..self.rank {
                if r.occurrences(gen) != 1 {
                    continue;
                }
                let syl = r.syllables();
                let pos = syl.iter().position(|s| s.gen == gen).expect("occurs once");
                // rotate so the generator comes first: r ~ g^e · rest
                let rest = GroupWord::new(syl[pos + 1..].iter().chain(syl[..pos].iter()).copied());
                let value = if syl[pos].exp > 0 { rest.inverse() } else { rest };
                let images = self.images_after(gen, &value);
                let new_len: usize = self
                    .relators
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != idx)
                    .map(|(_, s)| s.substitute(&images).cyclic_reduce().len())
                    .sum();
                out.push((self.rank - 1 + new_len, r.len(), gen, idx, value));
            }
        }
        out
    }

    /// Substitution sending `gen ↦ value` and renumbering the generators above it.
    fn images_after(&self, gen: usize, value: &GroupWord) -> Vec<GroupWord> {
        let shift = |g: usize| if g > gen { g - 1 } else { g };
        let value = GroupWord::new(value.syllables().iter().map(|s| Syllable { gen: shift(s.gen), exp: s.exp }));
        (0..self.rank)
            .map(|g| if g == gen { value.clone() } else { GroupWord::generator(shift(g)) })
            .collect()
    }

    fn eliminate(&mut self, gen: usize, idx: usize, value: &GroupWord) {
        let images = self.images_after(gen, value);
        self.relators.remove(idx);
        for r in &mut self.relators {
            *r = r.substitute(&images);
        }
        for m in &mut self.map {
            *m = m.substitute(&images);
        }
        self.kept.remove(gen);
        self.rank -= 1;
        self.moves += 1;
    }
}

pub fn tietze_simplify_tracked(p: &GroupPresentation, budget: usize) -> Simplification {
    let mut st = State {
        rank: p.rank(),
        relators: p.relators().to_vec(),
        kept: (0..p.rank()).collect(),
        map: (0..p.rank()).map(GroupWord::generator).collect(),
        moves: 0,
    };
    loop {
        st.clean(budget);
        if st.moves >= budget {
            break;
        }
        let current = st.cost();
        let best = st
            .eliminations()
            .into_iter()
            .filter(|c| c.0 <= current)
            .min_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)).then(b.2.cmp(&a.2)).then(a.3.cmp(&b.3)));
        match best {
            Some((_, _, gen, idx, value)) => st.eliminate(gen, idx, &value),
            None => break,
        }
    }
    let names: Option<Vec<String>> =
        p.has_custom_names().then(|| st.kept.iter().map(|&g| p.name(g)).collect());
    let mut presentation = GroupPresentation::new(st.rank, st.relators).expect("indices stay in range");
    if let Some(names) = names {
        presentation = presentation.with_names(names).expect("one name per generator");
    }
    Simplification { presentation, kept: st.kept, map: st.map, moves: st.moves }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> GroupWord {
        GroupWord::parse_letters(s).unwrap()
    }

    #[test]
    fn length_two_relator_identifies_generators() {
        // a2' b2 = a2 b2 with generators (a2, a2', b2)
        let p = GroupPresentation::from_equations(3, &[(w("bc"), w("ac"))]).unwrap();
        let s = tietze_simplify_tracked(&p, DEFAULT_BUDGET);
        assert!(s.presentation.is_free());
        assert_eq!(s.presentation.rank(), 2);
        assert_eq!(s.kept, vec![0, 2]);
        assert_eq!(s.map[1], w("a"));
    }

    #[test]
    fn free_presentation_unchanged() {
        let p = GroupPresentation::free(3);
        let s = tietze_simplify_tracked(&p, DEFAULT_BUDGET);
        assert_eq!(s.presentation, p);
        assert_eq!(s.moves, 0);
    }

    #[test]
    fn trefoil_to_one_relator() {
        let p = GroupPresentation::from_equations(3, &[(w("ab"), w("ca")), (w("ca"), w("bc"))]).unwrap();
        let q = tietze_simplify(&p, DEFAULT_BUDGET);
        assert_eq!(q.rank(), 2);
        assert_eq!(q.relators().len(), 1);
        assert_eq!(q.relators()[0].len(), 6);
        assert_eq!(q.relators()[0].cyclic_canonical(), w("abaBAB").cyclic_canonical());
    }

    #[test]
    fn budget_zero_only_reduces() {
        let p = GroupPresentation::new(2, vec![w("aB"), w("bAAB")]).unwrap();
        let q = tietze_simplify(&p, 0);
        assert_eq!(q.rank(), 2);
        assert_eq!(q.relators(), &[w("aB"), w("AA")]);
    }

    #[test]
    fn torsion_kept() {
        let p = GroupPresentation::new(1, vec![w("aa")]).unwrap();
        assert_eq!(tietze_simplify(&p, DEFAULT_BUDGET), p);
    }

    #[test]
    fn names_follow_surviving_generators() {
        let p = GroupPresentation::from_equations(3, &[(w("b"), w("a"))])
            .unwrap()
            .with_names(vec!["x".into(), "y".into(), "z".into()])
            .unwrap();
        let q = tietze_simplify(&p, DEFAULT_BUDGET);
        assert_eq!(q.names(), vec!["x", "z"]);
    }
}
