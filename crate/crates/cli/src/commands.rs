use std::path::Path;

use flowknot::diagram::{duality_check, fixture as load_fixture, inclusion_morphism, FIXTURE_NAMES};
use flowknot::expansion::{
    cech_h1, knot_group_system, simplified_automorphism, stable_knot_group, unknotted_certificate, EmbeddedExpansion,
    FlowExpansion, StageSource,
};
use flowknot::fpgroup::{
    abelianize, count_homs, stable_image_rank, tietze_simplify_tracked, FiniteTarget, GroupPresentation, GroupWord,
    DEFAULT_BUDGET,
};
use flowknot::symbolic::{sigma_w as build_sigma_w, tails_equivalent, Alphabet, SturmianParams, Substitution, SymbolicWord};
use flowknot::template::{distinct_knot_certificate, CertificateBase};
use serde_json::json;

use crate::report::{CliError, Report};

type Outcome = Result<Report, CliError>;

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn equation(p: &GroupPresentation, l: &GroupWord, r: &GroupWord) -> String {
    format!("{} = {}", p.format_word(l), p.format_word(r))
}

pub fn fixture(name: &str) -> Outcome {
    let f = load_fixture(name).map_err(|_| {
        CliError::Input(format!("unknown fixture '{name}'; expected one of {}", FIXTURE_NAMES.join(", ")))
    })?;
    let stage = &f.stage;
    let d = stage.diagram();
    let outer = stage.outer_presentation();
    let inner = stage.inner_presentation();
    let simp = tietze_simplify_tracked(&inner, DEFAULT_BUDGET);
    let ab = abelianize(&inner);
    let morphism = inclusion_morphism(stage, &outer)?;
    let simplified_images: Vec<String> =
        morphism.images().iter().map(|w| simp.presentation.format_word(&simp.rewrite(w))).collect();
    let duality = duality_check(stage, &f.substitution)?;
    let base = FlowExpansion::from_substitutions(std::slice::from_ref(&f.substitution))?;
    let e = EmbeddedExpansion::new(base, vec![(StageSource::Fixture(f.name.into()), stage.clone())])?;
    let sys = knot_group_system(&e, 1)?;
    let verdict = unknotted_certificate(&sys);
    let image_rank = stable_image_rank(sys.system(), 1)?;
    let automorphism = simplified_automorphism(&morphism)?;
    let homs_s3 = count_homs(&simp.presentation, FiniteTarget::S3)?;
    let free_s3 = 6u128.pow(ab.free_rank as u32);

    let relations: Vec<String> = d.relations().iter().map(|(l, r)| equation(&inner, l, r)).collect();
    // with a single loop the wedge relation identifies the two wedge arcs
    let identified: Option<Vec<String>> = (d.loops().len() == 1).then(|| {
        let (y, x) = (d.wedge().incoming[0], d.wedge().outgoing[0]);
        let images: Vec<GroupWord> =
            (0..d.arcs()).map(|a| GroupWord::generator(if a == x { y } else { a })).collect();
        d.relations()[..d.crossings().len()]
            .iter()
            .map(|(l, r)| equation(&inner, &l.substitute(&images), &r.substitute(&images)))
            .collect()
    });
    let outer_names = outer.names();

    let mut rep = Report::new("fixture");
    rep.field("fixture", json!(f.name))
        .field("presentation", json!(inner))
        .field("presentationText", json!(inner.display()))
        .field("relations", json!(relations))
        .field("simplified", json!(simp.presentation))
        .field("simplifiedText", json!(simp.presentation.display()))
        .field("abelianization", json!(ab.to_string()))
        .field("inclusion", json!({ "images": morphism.images(), "text": morphism.display_images(), "simplifiedText": simplified_images }))
        .field("duality", json!(duality))
        .field("imageRank", json!(image_rank))
        .field("automorphism", json!(automorphism))
        .field("homsS3", json!({ "count": homs_s3.to_string(), "freeGroupCount": free_s3.to_string() }))
        .field("verdict", json!(verdict));
    if let Some(rel) = &identified {
        rep.field("relationsWedgeIdentified", json!(rel));
    }
    rep.line(format!("fixture: {}", f.name))
        .line(format!("presentation: {}", inner.display()))
        .line(format!("relations: {}", relations.join("; ")));
    if let Some(rel) = &identified {
        rep.line(format!("relations (wedge arcs identified): {}", rel.join("; ")));
    }
    rep.line(format!("simplified: {}", simp.presentation.display()))
        .line(format!("abelianization: {ab}"));
    let pairs = |imgs: &[String]| {
        outer_names.iter().zip(imgs).map(|(g, w)| format!("{g} -> {w}")).collect::<Vec<_>>().join(", ")
    };
    rep.line(format!("inclusion: {}", pairs(&morphism.display_images())))
        .line(format!("inclusion (simplified): {}", pairs(&simplified_images)))
        .line(format!("duality (abelianized inclusion = transpose of transition matrix): {duality}"))
        .line(format!("image rank: {} ({:?})", image_rank.rank, image_rank.method).to_lowercase())
        .line(format!("homs into S3: {homs_s3} (free group with the same H1: {free_s3})"))
        .line(format!(
            "automorphism: {}",
            automorphism.map_or("n/a (a group is not free)".to_string(), |b| b.to_string())
        ));
    match &verdict {
        flowknot::expansion::Verdict::NotFreeAtStage { witness, .. } => rep.line(format!("verdict: {verdict}: {witness}")),
        _ => rep.line(format!("verdict: {verdict}")),
    };
    if !duality {
        rep.flag_inconsistent("fixture fails the duality check");
    }
    Ok(rep)
}

pub fn expansion(path: &Path, depth: usize) -> Outcome {
    let e = EmbeddedExpansion::from_json(&read(path)?)?;
    if depth > e.stages().len() {
        return Err(CliError::Input(format!("depth {depth} exceeds the {} stages in the file", e.stages().len())));
    }
    let sys = knot_group_system(&e, depth)?;
    let verdict = unknotted_certificate(&sys);
    let stable = stable_knot_group(&sys)?;
    let cech = cech_h1(e.base(), depth)?;
    let duality = e.duality(depth)?;

    let mut rep = Report::new("expansion");
    rep.field("ranks", json!(e.base().ranks())).field("depth", json!(depth));
    rep.line(format!("ranks: {:?}", e.base().ranks())).line(format!("depth: {depth}"));
    let first = sys.system().presentation(1);
    rep.line(format!("stage 1: {} (outer)", first.display()));
    let mut stages = vec![json!({ "stage": 1, "presentation": first, "abelianization": abelianize(first).to_string() })];
    for i in 1..=depth {
        let m = sys.system().map(i);
        let target = m.target();
        let simp = tietze_simplify_tracked(target, DEFAULT_BUDGET);
        let images: Vec<String> = m.images().iter().map(|w| simp.presentation.format_word(&simp.rewrite(w))).collect();
        let rank = stable_image_rank(sys.system(), i)?;
        let ab = abelianize(target);
        stages.push(json!({
            "stage": i + 1,
            "source": e.sources()[i - 1].to_string(),
            "presentation": target,
            "simplified": simp.presentation,
            "abelianization": ab.to_string(),
            "inclusion": images,
            "validity": m.validity(),
            "duality": duality[i - 1],
            "imageRank": rank,
        }));
        rep.line(format!(
            "stage {}: [{}] {} ~ {}; H1 = {ab}",
            i + 1,
            e.sources()[i - 1],
            target.display(),
            simp.presentation.display()
        ))
        .line(format!("  inclusion {} -> {}: ({}), duality {}, image rank {}", i, i + 1, images.join(", "), duality[i - 1], rank.rank));
    }
    rep.field("stages", json!(stages))
        .field("verdict", json!(verdict))
        .field("stableKnotGroup", json!(stable))
        .field("cechH1", json!(cech))
        .field("cechH1Text", json!(cech.to_string()));
    rep.line(format!("verdict: {verdict}"))
        .line(match &stable {
            Some(s) => format!("stable knot group: {} from stage {}", s.presentation.display(), s.stage),
            None => "stable knot group: none".to_string(),
        })
        .line(format!("cech H1: {cech}"));
    if duality.iter().any(|&ok| !ok) {
        rep.flag_inconsistent("a stage fails the duality check against its bonding");
    }
    Ok(rep)
}

pub fn sturmian(cf: Vec<u32>, compare: Option<Vec<u32>>) -> Outcome {
    let params = SturmianParams::new(cf)?;
    let depth = params.entries().len();
    let mut rep = Report::new("sturmian");
    rep.field("cf", json!(params.entries()));
    rep.line(format!("cf: {:?}", params.entries()));
    let mut subs = Vec::new();
    for (n, s) in params.entries().iter().zip(params.substitutions()) {
        let t = s.transition_matrix();
        let det = t.determinant()?;
        rep.line(format!("sigma_{n}: 0 -> {}, 1 -> {}; matrix {t}; det {det}", s.image(0), s.image(1)));
        subs.push(json!({ "n": n, "substitution": s, "matrix": t, "det": det.to_string() }));
    }
    let e = EmbeddedExpansion::canonical(FlowExpansion::sturmian(&params, depth));
    let sys = knot_group_system(&e, depth)?;
    let verdict = unknotted_certificate(&sys);
    let stable = stable_knot_group(&sys)?;
    let cech = cech_h1(e.base(), depth)?;
    rep.field("substitutions", json!(subs))
        .field("verdict", json!(verdict))
        .field("stableKnotGroup", json!(stable))
        .field("cechH1Text", json!(cech.to_string()));
    rep.line(format!("unknotted embedding: {verdict}")).line(match &stable {
        Some(s) => format!("stable knot group: {}", s.presentation.display()),
        None => "stable knot group: none".to_string(),
    });
    rep.line(format!("cech H1: {cech}"));
    if let Some(other) = compare {
        let other = SturmianParams::new(other)?;
        let eq = tails_equivalent(&params, &other);
        rep.field("compare", json!({ "cf": other.entries(), "tailsEquivalent": eq }));
        rep.line(format!("tails equivalent to {:?}: {eq}", other.entries()));
    }
    Ok(rep)
}

fn parse_word(w: &str) -> Result<SymbolicWord, CliError> {
    if w.contains(',') {
        let letters = w
            .split(',')
            .map(|t| t.trim().parse::<u8>().map_err(|_| CliError::Input(format!("bad letter '{t}'"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SymbolicWord::new(letters))
    } else {
        Ok(w.parse()?)
    }
}

pub fn sigma_w(w: &str, alphabet: usize) -> Outcome {
    let alphabet = Alphabet::new(alphabet)?;
    let word = parse_word(w)?;
    let e = build_sigma_w(&word, alphabet)?;
    let ok = e.check_uniform_injective();
    let mut rep = Report::new("sigma-w");
    rep.field("w", json!(e.w))
        .field("alphabet", json!(alphabet.size()))
        .field("mu", json!(e.mu))
        .field("returnTime", json!(e.return_time()))
        .field("images", json!(e.substitution.images()))
        .field("uniformInjective", json!(ok));
    rep.line(format!("w: {}  alphabet: {}  mu: {}  return time: {}", e.w, alphabet.size(), e.mu, e.return_time()));
    for (i, img) in e.substitution.images().iter().enumerate() {
        rep.line(format!("sigma_w({i}) = {img}"));
    }
    rep.line(format!("uniform return and injective: {ok}"));
    if !ok {
        rep.flag_inconsistent("σ_w images are not uniform and distinct");
    }
    Ok(rep)
}

pub fn certificate(sub: Option<&Path>, cf: Option<Vec<u32>>, m: usize, budget: usize) -> Outcome {
    let base = match (sub, cf) {
        (Some(path), _) => {
            let s: Substitution = serde_json::from_str(&read(path)?).map_err(|e| CliError::Input(e.to_string()))?;
            CertificateBase::Substitution(s)
        }
        (None, Some(cf)) => CertificateBase::Sturmian(SturmianParams::new(cf)?),
        (None, None) => return Err(CliError::Input("give --sub or --cf".into())),
    };
    let cert = distinct_knot_certificate(&base, m, budget)?;
    let mut rep = Report::new("certificate");
    rep.field("base", json!(base.substitution()))
        .field("budget", json!(budget))
        .field("requested", json!(cert.requested))
        .field("complete", json!(cert.complete))
        .field("rows", json!(cert.rows));
    let s = base.substitution();
    rep.line(format!("base: 0 -> {}, 1 -> {}", s.image(0), s.image(1)))
        .line(format!("requested: {m}  seed length budget: {budget}  complete: {}", cert.complete))
        .line("w\tmu\tstrands\tcrossings\tgenusLB\tloopWord");
    for r in &cert.rows {
        rep.line(format!("{}\t{}\t{}\t{}\t{}\t{}", r.w, r.mu, r.strands, r.crossings, r.genus_lb, r.loop_word));
    }
    Ok(rep)
}

pub fn homs(path: &Path, target: &str) -> Outcome {
    let p: GroupPresentation = serde_json::from_str(&read(path)?).map_err(|e| CliError::Input(e.to_string()))?;
    let target: FiniteTarget = target.parse()?;
    let count = count_homs(&p, target)?;
    let mut rep = Report::new("homs");
    rep.field("presentation", json!(p))
        .field("target", json!(target.to_string()))
        .field("count", json!(count.to_string()));
    rep.line(format!("presentation: {}", p.display())).line(format!("homs into {target}: {count}"));
    if let FiniteTarget::Cyclic(m) = target {
        let predicted = abelianize(&p).hom_count_to_cyclic(m as u64);
        rep.field("predicted", json!(predicted.to_string()));
        rep.line(format!("predicted from abelianization: {predicted}"));
        if predicted != count.into() {
            rep.flag_inconsistent("count differs from the abelianization prediction");
        }
    }
    Ok(rep)
}
