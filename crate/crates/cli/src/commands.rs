//! The subcommands. Each returns an exit code, a human summary and a
//! machine-readable report.

use std::fmt::Write as _;

use hodge_lattice_core::asymnorm::{boundedness_ratio, region_sample, MetricEvaluator, ModelMetric, Region};
use hodge_lattice_core::exactlin::ExactMatrix;
use hodge_lattice_core::hodgenum::{orbit_hodge_metric, NilpotentOrbitVHS};
use hodge_lattice_core::l2decide::{
    check_implication, decide, decide_quasi_unipotent, laurent_integrability, Certificate, DecisionReport,
    Implication,
};
use hodge_lattice_core::lattice::residues;
use hodge_lattice_core::monodromy::{validate_tuple, MonodromyTuple};
use hodge_lattice_core::quadrature::{
    default_cutoffs, log_weighted_disk_integral, section_l2_estimate, Classification, QuadratureReport,
    SectionQuadrature,
};
use hodge_lattice_core::weight::{multi_grading, weight_filtration, WeightFiltration};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::document::{ratio_f64, InputDocument};
use crate::report::{self, float, list_text, rational_text, short};
use crate::{CliError, Command, Options};

pub struct Outcome {
    pub code: i32,
    pub summary: String,
    pub report: Value,
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn outcome(pass: bool, summary: String, body: Value) -> Outcome {
    Outcome {
        code: if pass { 0 } else { 1 },
        summary,
        report: body,
    }
}

fn core(path: &str) -> impl Fn(hodge_lattice_core::Error) -> CliError + '_ {
    move |e| CliError::Input(format!("{path}: {e}"))
}

fn tuple(doc: &InputDocument) -> Result<MonodromyTuple, CliError> {
    validate_tuple(&doc.monodromy()?).map_err(core("matrices"))
}

fn logs(t: &MonodromyTuple) -> Vec<ExactMatrix> {
    t.logs().logs.iter().map(|l| l.n.clone()).collect()
}

pub fn execute(cmd: Command, doc: &InputDocument, opts: &Options) -> Result<Outcome, CliError> {
    match cmd {
        Command::Validate => validate(doc),
        Command::Log => log(doc),
        Command::Lattice => lattice(doc),
        Command::Weights => weights(doc, opts),
        Command::Norm => norm(doc, opts),
        Command::Decide => decide_cmd(doc, opts),
        Command::Quadcheck => quadcheck(doc, opts),
        Command::Compare => compare(doc, opts),
    }
}

fn validate(doc: &InputDocument) -> Result<Outcome, CliError> {
    let matrices = doc.monodromy()?;
    match validate_tuple(&matrices) {
        Ok(t) => {
            let summary = format!(
                "rank = {}, n = {}\nm = {}\nunipotent: {}\n",
                t.rank(),
                t.variables(),
                list_text(t.indices(), |m| m.to_string()),
                t.is_unipotent()
            );
            let body = json!({
                "rank": t.rank(),
                "variables": t.variables(),
                "indices": t.indices(),
                "order": t.order(),
                "unipotent": t.is_unipotent(),
                "valid": true,
            });
            Ok(outcome(true, summary, body))
        }
        Err(e) => Ok(outcome(
            false,
            format!("invalid monodromy tuple: {e}\n"),
            json!({ "valid": false, "reason": e.to_string() }),
        )),
    }
}

fn log(doc: &InputDocument) -> Result<Outcome, CliError> {
    let t = tuple(doc)?;
    let mut summary = String::new();
    let mut entries = Vec::new();
    for (j, l) in t.logs().logs.iter().enumerate() {
        let eig = l.a_eigenvalues();
        let _ = writeln!(
            summary,
            "T_{}: m = {}, eigenvalues of A = {}",
            j + 1,
            l.index,
            list_text(&eig, rational_text)
        );
        let _ = writeln!(summary, "A_{} = {}\nN_{} = {}", j + 1, l.a, j + 1, l.n);
        let blocks: Vec<Value> = l
            .blocks
            .iter()
            .map(|b| {
                json!({
                    "eigenvalue": report::scalar(&b.eigenvalue),
                    "k": b.k,
                    "residue": report::rational(&b.residue(l.index)),
                    "projector": report::matrix(&b.projector),
                })
            })
            .collect();
        entries.push(json!({
            "j": j + 1,
            "index": l.index,
            "a": report::matrix(&l.a),
            "n": report::matrix(&l.n),
            "blocks": blocks,
            "reconstructs": l.reconstruct() == t.matrices()[j].lift(l.reconstruct().order()),
        }));
    }
    let pass = entries.iter().all(|e| e["reconstructs"] == Value::Bool(true));
    Ok(outcome(pass, summary, json!({ "logs": entries })))
}

fn lattice(doc: &InputDocument) -> Result<Outcome, CliError> {
    let t = tuple(doc)?;
    let r = residues(&t);
    let mut summary = String::new();
    let mut entries = Vec::new();
    for (j, e) in r.entries.iter().enumerate() {
        let _ = writeln!(
            summary,
            "Res_{}: eigenvalues {} {}",
            j + 1,
            list_text(&e.eigenvalues, rational_text),
            if e.contained { "in (-1, 0]" } else { "NOT in (-1, 0]" }
        );
        entries.push(json!({
            "j": j + 1,
            "eigenvalues": e.eigenvalues.iter().map(report::rational).collect::<Vec<_>>(),
            "a": report::matrix(&e.a),
            "n": report::matrix(&e.n),
            "contained": e.contained,
        }));
    }
    let pass = r.contained();
    let _ = writeln!(summary, "containment: {}", verdict(pass));
    Ok(outcome(pass, summary, json!({ "residues": entries, "contained": pass })))
}

fn filtration_table(w: &WeightFiltration) -> Value {
    let rows: Vec<Value> = (w.lowest()..=w.highest())
        .map(|l| json!({ "l": l, "dim": w.dim(l), "graded": w.graded_dim(l) }))
        .collect();
    Value::Array(rows)
}

fn weights(doc: &InputDocument, opts: &Options) -> Result<Outcome, CliError> {
    let t = tuple(doc)?;
    let ns = logs(&t);
    let mut summary = String::new();
    let mut tables = Vec::new();
    let mut pass = true;
    let mut partial: Option<ExactMatrix> = None;
    for (j, n) in ns.iter().enumerate() {
        let sum = match &partial {
            Some(p) => p.add(n),
            None => n.clone(),
        };
        for (label, m) in [(format!("N_{}", j + 1), n), (format!("N_1+..+N_{}", j + 1), &sum)] {
            if label.starts_with("N_1+") && j == 0 {
                continue;
            }
            let w = weight_filtration(m, opts.center).map_err(core("matrices"))?;
            let ok = w.verify(m).is_ok();
            pass &= ok;
            let graded: Vec<String> = (w.lowest()..=w.highest())
                .filter(|&l| w.graded_dim(l) > 0)
                .map(|l| format!("{l}:{}", w.graded_dim(l)))
                .collect();
            let _ = writeln!(summary, "W({label}): Gr dims {{{}}} axioms {}", graded.join(", "), verdict(ok));
            tables.push(json!({ "operator": label, "table": filtration_table(&w), "axioms": ok }));
        }
        partial = Some(sum);
    }
    let q = doc.q_form()?;
    let grading = multi_grading(&ns, &q, opts.center).map_err(core("q"))?;
    let pieces: Vec<Value> = grading
        .pieces()
        .iter()
        .map(|p| json!({ "degrees": p.degrees, "dim": p.basis.cols() }))
        .collect();
    for p in grading.pieces() {
        let _ = writeln!(summary, "piece {}: dim {}", list_text(&p.degrees, |d| d.to_string()), p.basis.cols());
    }
    let reproduces = grading.reproduces_filtrations();
    let _ = writeln!(summary, "grading reproduces filtrations: {reproduces}");
    Ok(outcome(
        pass,
        summary,
        json!({
            "center": opts.center,
            "filtrations": tables,
            "pieces": pieces,
            "reproduces_filtrations": reproduces,
        }),
    ))
}

fn model_metric(doc: &InputDocument, t: &MonodromyTuple, vhs: Option<&NilpotentOrbitVHS>, center: i32) -> Result<ModelMetric, CliError> {
    let ns = match vhs {
        Some(v) if !v.nilpotents().is_empty() => v.nilpotents().to_vec(),
        _ => logs(t),
    };
    let grading = multi_grading(&ns, &doc.q_form()?, center).map_err(core("q"))?;
    ModelMetric::new(grading).map_err(core("q"))
}

fn norm(doc: &InputDocument, opts: &Options) -> Result<Outcome, CliError> {
    let t = tuple(doc)?;
    let vhs = doc.orbit(&logs(&t))?;
    let model = model_metric(doc, &t, vhs.as_ref(), opts.center)?;
    let points = doc
        .points()
        .ok_or_else(|| CliError::Input("points: required by norm".into()))?;
    let vectors = doc.vectors();
    let mut summary = String::new();
    let mut rows = Vec::new();
    for (pi, z) in points.iter().enumerate() {
        if z.iter().any(|c| c.im <= 0.0) {
            return Err(CliError::Input(format!("points[{pi}]: outside the upper half-space")));
        }
        let sample = match &vhs {
            Some(v) => Some(orbit_hodge_metric(v, z).map_err(core("vhs"))?),
            None => None,
        };
        for (vi, v) in vectors.iter().enumerate() {
            let m = model.norm_squared(v, z).unwrap_or(f64::NAN);
            let truth = sample.as_ref().and_then(|s| s.norm_squared(v));
            let _ = writeln!(
                summary,
                "point {} vector {}: model {}{}",
                pi + 1,
                vi + 1,
                short(m),
                truth.map(|x| format!(", true {}", short(x))).unwrap_or_default()
            );
            rows.push(json!({
                "point": pi + 1,
                "vector": vi + 1,
                "model": float(m),
                "true": truth.map(float).unwrap_or(Value::Null),
            }));
        }
    }
    Ok(outcome(true, summary, json!({ "values": rows })))
}

fn certificate_json(c: &Certificate) -> Value {
    json!({
        "alpha": c.alpha,
        "j": c.j,
        "degree": c.degree,
        "exponent": c.exponent,
        "integrable": c.integrable,
        "boundary": c.boundary,
    })
}

fn certificate_text(c: &Certificate) -> String {
    format!(
        "certificate (alpha={}, j={}, l={}, n={}){}{}",
        c.alpha,
        c.j,
        c.degree,
        c.exponent,
        if c.integrable { "" } else { " not integrable" },
        if c.boundary { " [boundary]" } else { "" }
    )
}

fn decision_json(r: &DecisionReport) -> Value {
    let implication = match check_implication(r) {
        Implication::Pass => json!("pass"),
        Implication::Vacuous => json!("vacuous"),
        Implication::Excluded => json!("excluded"),
        Implication::Fail(c) => json!({ "fail": certificate_json(&c) }),
    };
    json!({
        "is_l2": r.is_l2,
        "in_lattice": r.in_lattice,
        "in_lowest_piece": r.in_lowest_piece(),
        "boundary": r.boundary,
        "implication": implication,
        "certificates": r.certificates.iter().map(certificate_json).collect::<Vec<_>>(),
        "lattice_exponents": r.lattice_exponents.iter()
            .map(|(a, j, e)| json!({ "alpha": a, "j": j, "exponent": e }))
            .collect::<Vec<_>>(),
    })
}

fn decide_cmd(doc: &InputDocument, opts: &Options) -> Result<Outcome, CliError> {
    let t = tuple(doc)?;
    let frame = doc.frame(t)?;
    let section = doc
        .section(&frame)?
        .ok_or_else(|| CliError::Input("section: required by decide".into()))?;
    let mut summary = String::new();
    let (is_l2, in_lattice, body) = if frame.tuple().is_unipotent() {
        let r = decide(&section, &frame, opts.center).map_err(core("section"))?;
        for c in &r.certificates {
            let _ = writeln!(summary, "{}", certificate_text(c));
        }
        (r.is_l2, r.in_lattice, decision_json(&r))
    } else {
        let d = decide_quasi_unipotent(&section, &frame, opts.center).map_err(core("section"))?;
        for rec in &d.records {
            let _ = writeln!(
                summary,
                "alpha={} j={}: m={} k={} exponent {} -> cover exponent {}",
                rec.alpha, rec.j, rec.m, rec.k, rec.exponent, rec.cover_exponent
            );
        }
        for c in &d.cover.certificates {
            let _ = writeln!(summary, "cover {}", certificate_text(c));
        }
        let records: Vec<Value> = d
            .records
            .iter()
            .map(|r| {
                json!({
                    "alpha": r.alpha, "j": r.j, "m": r.m, "k": r.k,
                    "exponent": r.exponent, "cover_exponent": r.cover_exponent,
                })
            })
            .collect();
        let mut body = decision_json(&d.cover);
        body["in_lattice"] = json!(d.in_lattice);
        body["in_lowest_piece"] = json!(d.in_lattice);
        body["cover_in_lattice"] = json!(d.cover.in_lattice);
        body["records"] = Value::Array(records);
        body["consistent"] = json!(d.consistent);
        (d.cover.is_l2, d.in_lattice, body)
    };
    let _ = writeln!(summary, "is_L2 = {is_l2}, in_lattice = {in_lattice}");
    Ok(outcome(is_l2 && in_lattice, summary, body))
}

fn classification_json(c: &Classification) -> Value {
    match c {
        Classification::Convergent { value } => json!({ "convergent": float(*value) }),
        Classification::Divergent { rate } => json!({ "divergent": float(*rate) }),
        Classification::Inconclusive => json!("inconclusive"),
    }
}

fn quadrature_json(r: &QuadratureReport) -> Value {
    json!({
        "log_cutoffs": r.log_cutoffs.iter().map(|&x| float(x)).collect::<Vec<_>>(),
        "partials": r.partials.iter().map(|&x| float(x)).collect::<Vec<_>>(),
        "classification": classification_json(&r.classification),
        "evaluations": r.evaluations,
        "skipped": r.skipped,
    })
}

fn quadcheck(doc: &InputDocument, opts: &Options) -> Result<Outcome, CliError> {
    let cutoffs = default_cutoffs();
    let mut summary = String::from("  k   i  symbolic    quadrature\n");
    let mut cells = Vec::new();
    let mut pass = true;
    for k in -3i32..=3 {
        for i in -2i32..=2 {
            let sym = laurent_integrability(k as i64, &BigRational::from_integer(BigInt::from(i)));
            let q = log_weighted_disk_integral(k, i as f64, &cutoffs, opts.tol).map_err(core("quadcheck"))?;
            let agree = !matches!(q.classification, Classification::Inconclusive)
                && sym.convergent == q.classification.is_convergent();
            pass &= agree;
            let _ = writeln!(
                summary,
                "{k:>3} {i:>3}  {:<10}  {:<10}{}{}",
                if sym.convergent { "convergent" } else { "divergent" },
                match q.classification {
                    Classification::Convergent { .. } => "convergent",
                    Classification::Divergent { .. } => "divergent",
                    Classification::Inconclusive => "inconclusive",
                },
                if sym.boundary { "  boundary" } else { "" },
                if agree { "" } else { "  MISMATCH" }
            );
            cells.push(json!({
                "k": k,
                "i": i,
                "symbolic": sym.convergent,
                "boundary": sym.boundary,
                "quadrature": quadrature_json(&q),
                "agree": agree,
            }));
        }
    }
    let mut body = json!({ "grid": cells, "tolerance": float(opts.tol) });
    if doc.section.is_some() && doc.n == 1 {
        let t = tuple(doc)?;
        let vhs = doc.orbit(&logs(&t))?;
        let model = model_metric(doc, &t, vhs.as_ref(), opts.center)?;
        let frame = doc.frame(t)?;
        let section = doc.section(&frame)?.expect("checked above");
        if frame.tuple().is_unipotent() && !section.has_tail() {
            let r = decide(&section, &frame, opts.center).map_err(core("section"))?;
            let metric: &dyn MetricEvaluator = match &vhs {
                Some(v) => v,
                None => &model,
            };
            let config = SectionQuadrature {
                tol: opts.tol,
                seed: opts.seed,
                ..SectionQuadrature::default()
            };
            let q = section_l2_estimate(&section, &frame, metric, &config).map_err(core("section"))?;
            let numeric = q.classification.is_convergent();
            let agree = r.boundary || (!matches!(q.classification, Classification::Inconclusive) && numeric == r.is_l2);
            pass &= agree;
            let _ = writeln!(
                summary,
                "section: symbolic is_L2 = {}, quadrature {}{}",
                r.is_l2,
                if matches!(q.classification, Classification::Inconclusive) {
                    "inconclusive".to_string()
                } else {
                    numeric.to_string()
                },
                if r.boundary { " (boundary, not compared)" } else if agree { "" } else { "  MISMATCH" }
            );
            body["section"] = json!({
                "is_l2": r.is_l2,
                "boundary": r.boundary,
                "quadrature": quadrature_json(&q),
                "agree": agree,
            });
        }
    }
    let _ = writeln!(summary, "agreement: {}", verdict(pass));
    Ok(outcome(pass, summary, body))
}

fn compare(doc: &InputDocument, opts: &Options) -> Result<Outcome, CliError> {
    let t = tuple(doc)?;
    let vhs = doc
        .orbit(&logs(&t))?
        .ok_or_else(|| CliError::Input("vhs: required by compare".into()))?;
    let region = doc
        .region
        .ok_or_else(|| CliError::Input("region: required by compare".into()))?;
    let region = Region::new(ratio_f64(region.a), ratio_f64(region.epsilon), vhs.variables())
        .map_err(core("region"))?;
    let model = model_metric(doc, &t, Some(&vhs), opts.center)?;
    let samples = region_sample(&region, opts.samples, opts.seed);
    let mut summary = String::new();
    let mut rows = Vec::new();
    let mut pass = true;
    for (i, v) in doc.vectors().iter().enumerate() {
        let r = boundedness_ratio(&vhs, &model, &region, std::slice::from_ref(v), &samples);
        let ok = r.pass && r.min >= BAND.0 && r.max <= BAND.1;
        pass &= ok;
        let _ = writeln!(
            summary,
            "vector {}: ratio in [{}, {}] over {} points ({} excluded) {}",
            i + 1,
            short(r.min),
            short(r.max),
            r.evaluated,
            r.excluded,
            verdict(ok)
        );
        rows.push(json!({
            "vector": i + 1,
            "min": float(r.min),
            "max": float(r.max),
            "evaluated": r.evaluated,
            "excluded": r.excluded,
            "pass": ok,
        }));
    }
    Ok(outcome(
        pass,
        summary,
        json!({
            "samples": opts.samples,
            "seed": opts.seed,
            "band": [float(BAND.0), float(BAND.1)],
            "ratios": rows,
        }),
    ))
}

/// Accepted range of `|v|²_true / model(v)`.
pub const BAND: (f64, f64) = (1e-2, 1e2);
