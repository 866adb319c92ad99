use flowknot::diagram::{abelianized_inclusion, canonical_stage, fixture, wirtinger, Crossing, Wedge, WedgeDiagram};
use flowknot::expansion::{
    cech_h1, embedding_independence_check, knot_group_system, stable_knot_group, CechH1, EmbeddedExpansion,
    FlowExpansion, StageSource,
};
use flowknot::fpgroup::{
    abelianize, count_homs, free_reduce, nielsen_reduce, tietze_simplify, FiniteTarget, GroupMorphism,
    GroupPresentation, GroupWord, SubgroupGraph, DEFAULT_BUDGET,
};
use flowknot::symbolic::{sigma_w, sturmian_substitution, tails_equivalent, Alphabet, SturmianParams, Substitution, SymbolicWord};
use flowknot::template::{genus_lower_bound, lorenz_braid, TemplateWord};
use proptest::prelude::*;

fn word(rank: usize, max_len: usize) -> impl Strategy<Value = GroupWord> {
    prop::collection::vec((0..rank, prop::bool::ANY), 0..=max_len)
        .prop_map(|v| GroupWord::from_pairs(&v.into_iter().map(|(g, s)| (g, if s { 1 } else { -1 })).collect::<Vec<_>>()).unwrap())
}

fn presentation() -> impl Strategy<Value = GroupPresentation> {
    (1usize..=3).prop_flat_map(|rank| {
        prop::collection::vec(word(rank, 6), 0..=3).prop_map(move |rels| GroupPresentation::new(rank, rels).unwrap())
    })
}

fn substitution() -> impl Strategy<Value = Substitution> {
    prop::collection::vec(prop::collection::vec(0u8..2, 1..=4), 2)
        .prop_map(|v| Substitution::new(Alphabet::BINARY, v.into_iter().map(SymbolicWord::new).collect()).unwrap())
}

fn binary_word(max_len: usize) -> impl Strategy<Value = SymbolicWord> {
    prop::collection::vec(0u8..2, 1..=max_len).prop_map(SymbolicWord::new)
}

/// Counts homomorphisms into S_n by explicit permutation arithmetic.
fn brute_symmetric(p: &GroupPresentation, n: usize) -> u128 {
    let mut perms: Vec<Vec<usize>> = vec![vec![]];
    for k in 0..n {
        perms = perms
            .into_iter()
            .flat_map(|q| (0..=k).map(move |pos| {
                let mut r = q.clone();
                r.insert(pos, k);
                r
            }))
            .collect();
    }
    let inverse = |q: &[usize]| {
        let mut r = vec![0; q.len()];
        for (i, &x) in q.iter().enumerate() {
            r[x] = i;
        }
        r
    };
    let eval = |assign: &[&Vec<usize>], w: &GroupWord| {
        let mut cur: Vec<usize> = (0..n).collect();
        for s in w.syllables() {
            let g = if s.exp > 0 { assign[s.gen].clone() } else { inverse(assign[s.gen]) };
            for _ in 0..s.exp.unsigned_abs() {
                cur = cur.iter().map(|&i| g[i]).collect();
            }
        }
        cur.iter().enumerate().all(|(i, &x)| i == x)
    };
    let mut count = 0;
    let mut idx = vec![0usize; p.rank()];
    loop {
        let assign: Vec<&Vec<usize>> = idx.iter().map(|&i| &perms[i]).collect();
        if p.relators().iter().all(|r| eval(&assign, r)) {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return count;
            }
            idx[k] += 1;
            if idx[k] < perms.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn free_reduce_idempotent(w in word(3, 12)) {
        let r = free_reduce(&w);
        prop_assert_eq!(free_reduce(&r), r.clone());
        prop_assert_eq!(r.exponent_sums(3), w.exponent_sums(3));
    }

    #[test]
    fn morphism_law(imgs in prop::collection::vec(word(2, 4), 2), u in word(2, 6), v in word(2, 6)) {
        let m = GroupMorphism::new(GroupPresentation::free(2), GroupPresentation::free(2), imgs).unwrap();
        prop_assert_eq!(m.apply(&u.mul(&v)), m.apply(&u).mul(&m.apply(&v)).free_reduce());
    }

    #[test]
    fn composition_matrix(a in substitution(), b in substitution()) {
        let ab = a.compose(&b).unwrap();
        prop_assert_eq!(ab.transition_matrix(), a.transition_matrix().checked_mul(&b.transition_matrix()).unwrap());
    }

    #[test]
    fn tietze_preserves_abelianization(p in presentation()) {
        prop_assert_eq!(abelianize(&tietze_simplify(&p, DEFAULT_BUDGET)), abelianize(&p));
    }

    #[test]
    fn tietze_preserves_s3_counts(p in presentation()) {
        let s = tietze_simplify(&p, DEFAULT_BUDGET);
        prop_assert_eq!(count_homs(&s, FiniteTarget::S3).unwrap(), count_homs(&p, FiniteTarget::S3).unwrap());
    }

    #[test]
    fn relabel_invariance(p in presentation(), shift in 0usize..3) {
        let n = p.rank();
        let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
        let q = p.relabel(&perm).unwrap();
        prop_assert_eq!(abelianize(&q), abelianize(&p));
        prop_assert_eq!(count_homs(&q, FiniteTarget::S3).unwrap(), count_homs(&p, FiniteTarget::S3).unwrap());
    }

    #[test]
    fn homs_match_permutation_oracle(p in presentation()) {
        prop_assert_eq!(count_homs(&p, FiniteTarget::S3).unwrap(), brute_symmetric(&p, 3));
    }

    #[test]
    fn nielsen_preserves_subgroup(tuple in prop::collection::vec(word(2, 5), 1..=3)) {
        let reduced = nielsen_reduce(&tuple, 2).unwrap().reduced;
        let before = SubgroupGraph::new(&tuple, 2).unwrap();
        let after = SubgroupGraph::new(&reduced, 2).unwrap();
        for x in &tuple {
            prop_assert!(after.contains(x));
        }
        for x in &reduced {
            prop_assert!(before.contains(x));
        }
    }

    #[test]
    fn genus_rotation_invariant(w in binary_word(12), k in 0usize..12) {
        if let Ok(t) = TemplateWord::new(w.clone()) {
            let l = w.letters();
            let k = k % l.len();
            let rotated: Vec<u8> = l[k..].iter().chain(&l[..k]).copied().collect();
            let r = TemplateWord::new(SymbolicWord::new(rotated)).unwrap();
            let (a, b) = (lorenz_braid(&t).unwrap(), lorenz_braid(&r).unwrap());
            prop_assert_eq!(a.crossings, b.crossings);
            prop_assert_eq!(genus_lower_bound(&a).unwrap(), genus_lower_bound(&b).unwrap());
        }
    }

    #[test]
    fn tails_laws(a in prop::collection::vec(1u32..4, 1..5), prefix in prop::collection::vec(1u32..4, 0..3)) {
        let pa = SturmianParams::new(a.clone()).unwrap();
        let mut longer = prefix.clone();
        longer.extend(&a);
        let pb = SturmianParams::new(longer).unwrap();
        prop_assert!(tails_equivalent(&pa, &pa));
        prop_assert!(tails_equivalent(&pa, &pb));
        prop_assert!(tails_equivalent(&pb, &pa));
    }

    #[test]
    fn telescoping_keeps_cech_rank(cf in prop::collection::vec(1u32..4, 3..5)) {
        let params = SturmianParams::new(cf).unwrap();
        let e = FlowExpansion::sturmian(&params, 4);
        let t = e.telescope(2).unwrap();
        let rank = |c| match c { CechH1::General { stable_rank, .. } => stable_rank, _ => 0 };
        prop_assert_eq!(rank(cech_h1(&e, 4).unwrap()), rank(cech_h1(&t, t.bondings().len()).unwrap()));
    }
}

#[test]
fn family_0010011_genus_grows() {
    // x_{k+1} is the primitive root of σ_w(x_k) with w = 0010011
    let e = sigma_w(&"0010011".parse().unwrap(), Alphabet::BINARY).unwrap();
    let mut x: SymbolicWord = "0010011".parse().unwrap();
    let mut last = None;
    for _ in 0..3 {
        let (t, _) = TemplateWord::root(x.clone()).unwrap();
        let g = genus_lower_bound(&lorenz_braid(&t).unwrap()).unwrap();
        if let Some(prev) = last {
            assert!(g > prev, "{g} <= {prev} at length {}", t.len());
        }
        last = Some(g);
        x = e.substitution.apply(t.word()).unwrap();
    }
}

#[test]
fn homology_does_not_see_the_embedding() {
    let one = |name: &str| {
        let f = fixture(name).unwrap();
        let base = FlowExpansion::from_substitutions(std::slice::from_ref(&f.substitution)).unwrap();
        EmbeddedExpansion::new(base, vec![(StageSource::Fixture(name.into()), f.stage)]).unwrap()
    };
    let (du, dt) = (one("dyadic_unknotted"), one("dyadic_trefoil"));
    assert!(embedding_independence_check(&du, &dt, 1).unwrap());
    assert!(embedding_independence_check(&du, &du, 1).unwrap());
    let (fu, ft) = (one("fibonacci_unknotted"), one("fibonacci_trefoil"));
    assert!(embedding_independence_check(&fu, &ft, 1).unwrap());
    assert!(embedding_independence_check(&du, &fu, 1).is_err());
}

#[test]
fn stable_group_abelianizes_to_cech_limit() {
    let params = SturmianParams::new(vec![1, 2, 3]).unwrap();
    let e = EmbeddedExpansion::canonical(FlowExpansion::sturmian(&params, 3));
    let sys = knot_group_system(&e, 3).unwrap();
    let stable = stable_knot_group(&sys).unwrap().unwrap();
    for depth in 1..=3 {
        match cech_h1(e.base(), depth).unwrap() {
            CechH1::General { limit: Some(l), .. } => assert_eq!(abelianize(&stable.presentation), l),
            other => panic!("{other}"),
        }
    }
}

#[test]
fn wirtinger_arc_permutation_invariance() {
    // trefoil wedge diagram with arcs a, b, c, a' and a relabeled copy
    let cross = |over, under_in, under_out| Crossing { over, under_in, under_out, sign: 1 };
    let d = WedgeDiagram::new(
        4,
        vec![vec![3, 1, 2, 0]],
        vec![cross(3, 1, 2), cross(2, 3, 1), cross(1, 2, 0)],
        Wedge { incoming: vec![0], outgoing: vec![3] },
    )
    .unwrap();
    let perm = [2usize, 0, 3, 1];
    let d2 = WedgeDiagram::new(
        4,
        vec![vec![perm[3], perm[1], perm[2], perm[0]]],
        vec![cross(perm[3], perm[1], perm[2]), cross(perm[2], perm[3], perm[1]), cross(perm[1], perm[2], perm[0])],
        Wedge { incoming: vec![perm[0]], outgoing: vec![perm[3]] },
    )
    .unwrap();
    let (p, q) = (wirtinger(&d), wirtinger(&d2));
    assert_eq!(abelianize(&p), abelianize(&q));
    for t in [FiniteTarget::S3, FiniteTarget::S4, FiniteTarget::Cyclic(5)] {
        assert_eq!(count_homs(&p, t).unwrap(), count_homs(&q, t).unwrap());
    }
    assert_eq!(count_homs(&p, FiniteTarget::S3).unwrap(), 12);
}

#[test]
fn canonical_sturmian_stages_are_dual() {
    for n in 1..=6 {
        let t = sturmian_substitution(n).unwrap().transition_matrix();
        let stage = canonical_stage(&t).unwrap();
        assert_eq!(abelianized_inclusion(&stage), t.transpose());
    }
}

#[test]
fn expansion_json_round_trip() {
    let e = EmbeddedExpansion::canonical(FlowExpansion::sturmian(&SturmianParams::new(vec![1, 2]).unwrap(), 3));
    let back = EmbeddedExpansion::from_json(&e.to_json()).unwrap();
    assert_eq!(back.to_json(), e.to_json());
}

#[test]
fn rank1_colimit_invariant_under_telescoping() {
    use flowknot::fpgroup::colimit_rank1;
    let fine = colimit_rank1(&[2, 3, 2, 3], Some(2), 4).unwrap();
    let coarse = colimit_rank1(&[6, 6], Some(1), 2).unwrap();
    assert_eq!(fine.primes, coarse.primes);
    let fine = colimit_rank1(&[4, 2, 2, 2], Some(1), 4).unwrap();
    let coarse = colimit_rank1(&[8, 4], Some(1), 2).unwrap();
    assert_eq!(fine.to_string(), coarse.to_string());
}
