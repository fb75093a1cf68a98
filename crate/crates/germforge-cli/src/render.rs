//! Report and JSON rendering for each subcommand. Reports are plain lines;
//! JSON documents carry `"schema": 1` and a `"kind"` naming the command.

use crate::{document, Output};
use germforge::basis::BasisComputation;
use germforge::division::{DivisionResult, IdealBasis, Ring};
use germforge::ideal::{MultMatrix, QuotientBasis, TruncationCertificate, TruncationEvidence};
use germforge::intrinsic::{IntrinsicDecomposition, IntrinsicIdeal};
use germforge::json as gj;
use germforge::monomial::Monomial;
use germforge::poly::Polynomial;
use germforge::singularity::{
    AlgebraicObjects, ContactTransformation, IdealPresentation, NormalForm, Recognition,
};
use germforge::transition::{
    PersistentDiagrams, RegionDecomposition, TransitionComponent, TransitionSet,
};
use germforge::unfolding::Unfolding;
use germforge::vars::VarList;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::path::Path;

/// Display a monomial in the germ variables, e.g. `x^2*lambda`.
fn mono(m: &Monomial) -> String {
    let vars = match m.nvars() {
        2 => VarList::xl(),
        n => VarList((1..=n as u8).map(germforge::vars::Var::Alpha).collect()),
    };
    Polynomial::from_monomial(vars, m.clone(), germforge::int(1)).to_string()
}

fn mono_set(ms: &[Monomial]) -> String {
    let inner: Vec<String> = ms.iter().map(mono).collect();
    format!("{{{}}}", inner.join(", "))
}

fn poly_set(ps: &[Polynomial]) -> String {
    let inner: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
    format!("{{{}}}", inner.join(", "))
}

/// Display a staircase ideal as `M^m<lambda^n> + …`.
fn staircase(i: &IntrinsicIdeal) -> String {
    if i.stairs.is_empty() {
        return "0".into();
    }
    let pieces: Vec<String> = i
        .stairs
        .iter()
        .map(|&(m, n)| {
            let mm = match m {
                0 => String::new(),
                1 => "M".into(),
                _ => format!("M^{m}"),
            };
            let ll = match n {
                0 => String::new(),
                1 => "<lambda>".into(),
                _ => format!("<lambda^{n}>"),
            };
            match (mm.is_empty(), ll.is_empty()) {
                (true, true) => "E".into(),
                (false, true) => mm,
                (true, false) => ll,
                (false, false) => format!("{mm}{ll}"),
            }
        })
        .collect();
    pieces.join(" + ")
}

fn ring_name(r: &Ring) -> String {
    match r {
        Ring::LocalJet(n) => format!("local-jet({n})"),
        Ring::GlobalPoly => "global-poly".into(),
    }
}

fn monos_json(ms: &[Monomial]) -> Value {
    Value::Array(ms.iter().map(gj::monomial_to_json).collect())
}

fn polys_json(ps: &[Polynomial]) -> Value {
    Value::Array(ps.iter().map(gj::polynomial_to_json).collect())
}

pub fn verify_output(cert: &TruncationCertificate) -> Output {
    let (ev_name, ev_json, ev_line) = match &cert.evidence {
        TruncationEvidence::FinitePower { k } => (
            "finite-power",
            json!({ "k": k }),
            format!("M^{k} is contained in the ideal"),
        ),
        TruncationEvidence::Staircase { stairs } => (
            "staircase",
            gj::staircase_to_json(&IntrinsicIdeal::new(stairs.clone())),
            format!(
                "infinite codimension; contained staircase {}",
                staircase(&IntrinsicIdeal::new(stairs.clone()))
            ),
        ),
        TruncationEvidence::MonomialWedge { gens } => (
            "monomial-wedge",
            monos_json(gens),
            format!("infinite codimension; monomial wedge {}", mono_set(gens)),
        ),
    };
    let mut report = String::new();
    writeln!(report, "certified degree: {}", cert.degree).unwrap();
    writeln!(report, "ring: {}", ring_name(&cert.ring_advice)).unwrap();
    writeln!(report, "evidence: {ev_line}").unwrap();
    Output {
        json: document(
            "verify",
            vec![
                ("degree", json!(cert.degree)),
                ("ring", json!(ring_name(&cert.ring_advice))),
                ("evidence", json!({ "type": ev_name, "data": ev_json })),
            ],
        ),
        report,
    }
}

/// Canonical display order for basis generators: the polynomial's leading
/// canonical term, highest degree first.
fn display_sorted(gens: &[Polynomial]) -> Vec<Polynomial> {
    let mut out = gens.to_vec();
    out.sort_by(|a, b| {
        let am = &a.terms()[0].mono;
        let bm = &b.terms()[0].mono;
        bm.total_degree()
            .cmp(&am.total_degree())
            .then_with(|| bm.0.cmp(&am.0))
    });
    out
}

pub fn basis_output(comp: &BasisComputation, input: &IdealBasis) -> Output {
    let gens = display_sorted(&comp.basis.gens);
    let mut report = String::new();
    writeln!(report, "ring: {}", ring_name(&input.ring)).unwrap();
    writeln!(report, "reduced basis: {}", poly_set(&gens)).unwrap();
    writeln!(
        report,
        "leading terms: {}",
        mono_set(&comp.basis.leading_monomials())
    )
    .unwrap();
    if !comp.dropped.is_empty() {
        writeln!(report, "jet-dropped monomials: {}", mono_set(&comp.dropped)).unwrap();
    }
    Output {
        json: document(
            "standard-basis",
            vec![
                ("ring", json!(ring_name(&input.ring))),
                ("basis", polys_json(&gens)),
                ("leading_terms", monos_json(&comp.basis.leading_monomials())),
                ("dropped", monos_json(&comp.dropped)),
            ],
        ),
        report,
    }
}

pub fn division_output(f: &Polynomial, div: &DivisionResult, input: &IdealBasis) -> Output {
    let mut report = String::new();
    writeln!(report, "dividend: {f}").unwrap();
    for (q, g) in div.quotients.iter().zip(&input.gens) {
        writeln!(report, "quotient for {g}: {q}").unwrap();
    }
    writeln!(report, "remainder: {}", div.remainder).unwrap();
    if div.truncated {
        writeln!(report, "note: reduction overflowed the jet degree").unwrap();
    }
    Output {
        json: document(
            "division",
            vec![
                ("dividend", gj::polynomial_to_json(f)),
                ("quotients", polys_json(&div.quotients)),
                ("remainder", gj::polynomial_to_json(&div.remainder)),
                ("truncated", json!(div.truncated)),
                ("dropped", monos_json(&div.dropped)),
            ],
        ),
        report,
    }
}

pub fn colon_output(m: &Monomial, quot: &IdealBasis) -> Output {
    let gens = display_sorted(&quot.gens);
    let mut report = String::new();
    writeln!(report, "colon ideal (I : {}):", mono(m)).unwrap();
    writeln!(report, "generators: {}", poly_set(&gens)).unwrap();
    Output {
        json: document(
            "colon-ideal",
            vec![
                ("by", gj::monomial_to_json(m)),
                ("generators", polys_json(&gens)),
            ],
        ),
        report,
    }
}

pub fn mult_matrix_output(mm: &MultMatrix) -> Output {
    let mut report = String::new();
    writeln!(report, "quotient basis: {}", mono_set(&mm.basis.monomials)).unwrap();
    writeln!(report, "multiplication by {}:", mm.var).unwrap();
    for row in &mm.matrix {
        let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        writeln!(report, "  [{}]", cells.join(", ")).unwrap();
    }
    writeln!(report, "nilpotency degree: {}", mm.nilpotency).unwrap();
    let matrix: Vec<Value> = mm
        .matrix
        .iter()
        .map(|row| Value::Array(row.iter().map(gj::rat_to_json).collect()))
        .collect();
    Output {
        json: document(
            "mult-matrix",
            vec![
                ("var", json!(mm.var.to_string())),
                ("basis", monos_json(&mm.basis.monomials)),
                ("matrix", Value::Array(matrix)),
                ("nilpotency", json!(mm.nilpotency)),
            ],
        ),
        report,
    }
}

pub fn normal_set_output(q: &QuotientBasis) -> Output {
    let mut report = String::new();
    writeln!(report, "normal set: {}", mono_set(&q.monomials)).unwrap();
    writeln!(report, "dimension: {}", q.dimension()).unwrap();
    Output {
        json: document(
            "normal-set",
            vec![
                ("monomials", monos_json(&q.monomials)),
                ("dimension", json!(q.dimension())),
            ],
        ),
        report,
    }
}

pub fn intrinsic_output(dec: &IntrinsicDecomposition) -> Output {
    let mut report = String::new();
    writeln!(report, "intrinsic part: {}", staircase(&dec.itr)).unwrap();
    if dec.complement_part.is_empty() {
        writeln!(report, "the ideal is intrinsic").unwrap();
    } else {
        writeln!(report, "complement span: {}", poly_set(&dec.complement_part)).unwrap();
    }
    Output {
        json: document(
            "intrinsic",
            vec![
                ("staircase", gj::staircase_to_json(&dec.itr)),
                ("complement", polys_json(&dec.complement_part)),
            ],
        ),
        report,
    }
}

fn presentation_line(p: &IdealPresentation) -> String {
    match p {
        IdealPresentation::Intrinsic(i) => staircase(i),
        IdealPresentation::Decomposed(d) => {
            format!(
                "{} + span{}",
                staircase(&d.itr),
                poly_set(&d.complement_part)
            )
        }
        IdealPresentation::Wedge(gens) => format!("monomial wedge {}", mono_set(gens)),
    }
}

fn presentation_json(p: &IdealPresentation) -> Value {
    match p {
        IdealPresentation::Intrinsic(i) => json!({
            "type": "intrinsic", "staircase": gj::staircase_to_json(i)
        }),
        IdealPresentation::Decomposed(d) => json!({
            "type": "decomposed",
            "staircase": gj::staircase_to_json(&d.itr),
            "complement": polys_json(&d.complement_part),
        }),
        IdealPresentation::Wedge(gens) => json!({
            "type": "wedge", "generators": monos_json(gens)
        }),
    }
}

pub fn alg_objects_output(o: &AlgebraicObjects) -> Output {
    let mut report = String::new();
    match &o.p {
        Some(p) => writeln!(report, "P(g)    = {}", staircase(p)).unwrap(),
        None => writeln!(report, "P(g)    = (infinite codimension)").unwrap(),
    }
    writeln!(report, "S(g)    = {}", staircase(&o.s)).unwrap();
    writeln!(report, "corners = {}", mono_set(&o.s_gens)).unwrap();
    writeln!(report, "S-perp  = {}", mono_set(&o.s_perp)).unwrap();
    match &o.intermediate {
        Some(a) => writeln!(report, "A(g)    = {}", mono_set(a)).unwrap(),
        None => writeln!(report, "A(g)    = (infinite codimension)").unwrap(),
    }
    writeln!(report, "RT(g)   = {}", presentation_line(&o.rt.presentation)).unwrap();
    match &o.t {
        Some(t) => {
            writeln!(report, "T(g)    = RT(g) + span{}", poly_set(&t.span)).unwrap();
            writeln!(
                report,
                "E/T     = {} (codimension {})",
                mono_set(&t.et_basis),
                t.et_basis.len()
            )
            .unwrap();
        }
        None => writeln!(report, "T(g)    = (infinite codimension)").unwrap(),
    }
    let t_json = o.t.as_ref().map(|t| {
        json!({
            "span": polys_json(&t.span),
            "ell": t.ell,
            "et_basis": monos_json(&t.et_basis),
            "codimension": t.et_basis.len(),
        })
    });
    Output {
        json: document(
            "alg-objects",
            vec![
                ("p", o.p.as_ref().map(gj::staircase_to_json).into()),
                ("s", gj::staircase_to_json(&o.s)),
                ("s_corners", monos_json(&o.s_gens)),
                ("s_perp", monos_json(&o.s_perp)),
                ("intermediate", o.intermediate.as_deref().map(monos_json).into()),
                ("rt", presentation_json(&o.rt.presentation)),
                ("t", t_json.into()),
            ],
        ),
        report,
    }
}

pub fn normal_form_output(nf: &NormalForm, degree: u32) -> Output {
    let mut report = String::new();
    writeln!(report, "normal form (degree {degree}): {}", nf.poly).unwrap();
    if nf.shear != germforge::int(0) {
        writeln!(report, "applied shear: x -> x + ({})*lambda", nf.shear).unwrap();
    }
    if !nf.unremoved.is_empty() {
        writeln!(
            report,
            "intermediate terms kept: {}",
            mono_set(&nf.unremoved)
        )
        .unwrap();
    }
    Output {
        json: document(
            "normal-form",
            vec![
                ("degree", json!(degree)),
                ("poly", gj::polynomial_to_json(&nf.poly)),
                ("shear", gj::rat_to_json(&nf.shear)),
                ("unremoved", monos_json(&nf.unremoved)),
            ],
        ),
        report,
    }
}

pub fn unfolding_output(u: &Unfolding, codim: usize) -> Output {
    let mut report = String::new();
    writeln!(report, "universal unfolding: {}", u.poly).unwrap();
    writeln!(report, "codimension: {codim}").unwrap();
    let dirs: Vec<String> = u.directions.iter().map(mono).collect();
    writeln!(report, "directions: {{{}}}", dirs.join(", ")).unwrap();
    let mut fields = match gj::unfolding_to_json(u) {
        Value::Object(m) => m.into_iter().map(|(k, v)| (k, v)).collect::<Vec<_>>(),
        _ => unreachable!(),
    };
    fields.push(("codimension".into(), json!(codim)));
    Output {
        json: document(
            "universal-unfolding",
            fields
                .iter()
                .map(|(k, v)| (k.as_str(), v.clone()))
                .collect(),
        ),
        report,
    }
}

pub fn recognition_output(nf: &Polynomial, rec: &Recognition) -> Output {
    let mut report = String::new();
    writeln!(report, "a germ is contact-equivalent to {nf} iff").unwrap();
    writeln!(report, "zero coefficients at: {}", mono_set(&rec.zero_at)).unwrap();
    writeln!(
        report,
        "nonzero coefficients at: {}",
        mono_set(&rec.nonzero_at)
    )
    .unwrap();
    Output {
        json: document(
            "recognition",
            vec![
                ("normal_form", gj::polynomial_to_json(nf)),
                ("zero_at", monos_json(&rec.zero_at)),
                ("nonzero_at", monos_json(&rec.nonzero_at)),
            ],
        ),
        report,
    }
}

pub fn transformation_output(tr: &ContactTransformation) -> Output {
    let mut report = String::new();
    writeln!(report, "X = {}", tr.x).unwrap();
    writeln!(report, "S = {}", tr.s).unwrap();
    writeln!(report, "certified: J^{}(g - S*f(X, lambda)) = 0", tr.degree).unwrap();
    Output {
        json: document(
            "transformation",
            vec![
                ("x", gj::polynomial_to_json(&tr.x)),
                ("s", gj::polynomial_to_json(&tr.s)),
                ("degree", json!(tr.degree)),
            ],
        ),
        report,
    }
}

fn component_report(report: &mut String, c: &TransitionComponent) {
    let name = c.kind.label();
    match c.trivial {
        Some(t) => {
            writeln!(report, "{name}: {t:?}").unwrap();
            return;
        }
        None => {
            let gens: Vec<String> = c.generators.iter().map(|p| format!("{p} = 0")).collect();
            writeln!(report, "{name}: {}", gens.join(", ")).unwrap();
        }
    }
    let side: Vec<String> = c.side.descriptors.iter().map(|d| d.to_string()).collect();
    writeln!(
        report,
        "  sampled {} points, {} realized; {}",
        c.side.sampled,
        c.side.realized,
        side.join("; ")
    )
    .unwrap();
}

pub fn transition_output(t: &TransitionSet) -> Output {
    let mut report = String::new();
    for c in t.components() {
        component_report(&mut report, c);
    }
    let body = match gj::transition_set_to_json(t) {
        Value::Object(m) => m,
        _ => unreachable!(),
    };
    Output {
        json: gj::document("transition-set", body),
        report,
    }
}

pub fn persistent_output(
    dec: &RegionDecomposition,
    pd: &PersistentDiagrams,
    svg_dir: Option<&Path>,
) -> Output {
    let mut report = String::new();
    writeln!(report, "regions: {}", dec.regions.len()).unwrap();
    for w in &dec.warnings {
        writeln!(report, "warning: {w}").unwrap();
    }
    for (id, d) in &pd.per_region {
        let region = dec.regions.iter().find(|r| r.id == *id).unwrap();
        let rep: Vec<String> = region
            .representative
            .iter()
            .map(|c| c.to_string())
            .collect();
        let counts: Vec<String> = d
            .signature
            .counts
            .iter()
            .map(|(c, n)| format!("{c}x{n}"))
            .collect();
        writeln!(
            report,
            "region {id} at ({}): solution counts {}, {} folds",
            rep.join(", "),
            counts.join(" "),
            d.signature.folds
        )
        .unwrap();
    }
    let ids: Vec<String> = pd.shortlist.iter().map(|i| i.to_string()).collect();
    writeln!(report, "shortlist (distinct diagrams): {}", ids.join(", ")).unwrap();
    if let Some(dir) = svg_dir {
        writeln!(report, "plots written to {}", dir.display()).unwrap();
    }
    Output {
        json: document(
            "persistent-diagrams",
            vec![
                ("regions", gj::regions_to_json(dec)),
                ("diagrams", gj::persistent_diagrams_to_json(pd)),
            ],
        ),
        report,
    }
}
