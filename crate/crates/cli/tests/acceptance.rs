//! The acceptance suite: one PASS/FAIL line per criterion, nonzero exit on
//! any failure.

use std::time::Instant;

use hodge_lattice::{report_text, run_text, Command, Options};
use hodge_lattice_core::asymnorm::{boundedness_ratio, region_sample, ModelMetric, Region};
use hodge_lattice_core::exactlin::{CycScalar, ExactMatrix};
use hodge_lattice_core::fixtures::{
    elliptic_vhs, nilpotent_of_type, random_nilpotent, random_quasi_unipotent, unipotent_jordan,
};
use hodge_lattice_core::hodgenum::{curvature_probe, hodge_norm_squared};
use hodge_lattice_core::l2decide::{check_implication, decide, laurent_integrability, Implication};
use hodge_lattice_core::lattice::{base_change_pullback, residues, CanonicalFrame, FrameBasis, LaurentPoly, LaurentSection};
use hodge_lattice_core::monodromy::validate_tuple;
use hodge_lattice_core::quadrature::{default_cutoffs, log_weighted_disk_integral, Classification};
use hodge_lattice_core::weight::{multi_grading, weight_filtration};
use nalgebra::DVector;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;

fn check(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn basis_vector(i: usize, r: usize) -> DVector<Complex64> {
    DVector::from_fn(r, |k, _| Complex64::new(if k == i { 1.0 } else { 0.0 }, 0.0))
}

fn exp_log_exactness() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut bad = 0;
    let count = 60;
    for _ in 0..count {
        let n = rng.gen_range(1..=6);
        let m = rng.gen_range(1..=12);
        let t = random_quasi_unipotent(&mut rng, n, m);
        let tuple = validate_tuple(&[t.clone()]).map_err(|e| e.to_string())?;
        let log = &tuple.logs().logs[0];
        let back = log.reconstruct();
        if back != t.lift(back.order()) {
            bad += 1;
        }
    }
    check(bad == 0, format!("{count} matrices, {bad} mismatches"))
}

fn residue_containment() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut bad = 0;
    for _ in 0..40 {
        let n = rng.gen_range(1..=5);
        let m = rng.gen_range(1..=12);
        let t = validate_tuple(&[random_quasi_unipotent(&mut rng, n, m)]).map_err(|e| e.to_string())?;
        if !residues(&t).contained() {
            bad += 1;
        }
    }
    let mut nonzero = 0;
    for n in 1..=6 {
        let t = validate_tuple(&[unipotent_jordan(n)]).map_err(|e| e.to_string())?;
        let r = residues(&t);
        if !r.entries.iter().all(|e| e.contained && e.eigenvalues.iter().all(BigRational::is_zero)) {
            nonzero += 1;
        }
    }
    check(
        bad == 0 && nonzero == 0,
        format!("40 quasi-unipotent tuples: {bad} outside (-1,0]; unipotent with nonzero residue: {nonzero}"),
    )
}

fn weight_axioms() -> Verdict {
    let mut bad = Vec::new();
    for b in 1..=6 {
        let n = nilpotent_of_type(&[b]);
        for c in [-1, 0, 2] {
            if weight_filtration(&n, c).map_err(|e| e.to_string())?.verify(&n).is_err() {
                bad.push(format!("J_{b} center {c}"));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..20 {
        let size = rng.gen_range(1..=8);
        let n = random_nilpotent(&mut rng, size);
        if let Err(v) = weight_filtration(&n, 0).map_err(|e| e.to_string())?.verify(&n) {
            bad.push(format!("random #{i}: {v:?}"));
        }
    }
    check(bad.is_empty(), format!("6 Jordan blocks x 3 centers + 20 random; failures {bad:?}"))
}

fn test_tuples() -> Vec<Vec<ExactMatrix>> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let t = unipotent_jordan(2);
    vec![
        vec![t.clone()],
        vec![unipotent_jordan(3)],
        vec![random_quasi_unipotent(&mut rng, 3, 6)],
        vec![t.clone(), t.mul(&t).neg()],
    ]
}

fn frame_equivariance() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for ms in test_tuples() {
        let f = CanonicalFrame::new(validate_tuple(&ms).map_err(|e| e.to_string())?, FrameBasis::Standard)
            .map_err(|e| e.to_string())?;
        for j in 0..ms.len() {
            let t = f.monodromy_complex(j);
            for _ in 0..100 {
                let z: Vec<Complex64> = (0..ms.len())
                    .map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(0.1..3.0)))
                    .collect();
                let mut shifted = z.clone();
                shifted[j] += 1.0;
                let w = f.evaluate(&z).map_err(|e| e.to_string())?;
                let ws = f.evaluate(&shifted).map_err(|e| e.to_string())?;
                worst = worst.max((ws - &t * &w).norm() / w.norm());
                count += 1;
            }
        }
    }
    check(worst < 1e-9, format!("{count} samples, max relative error {worst:.2e}"))
}

fn base_change() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for _ in 0..20 {
        let m = rng.gen_range(2..=6);
        let n = rng.gen_range(1..=3);
        let t = random_quasi_unipotent(&mut rng, n, m);
        let f = CanonicalFrame::new(validate_tuple(&[t]).map_err(|e| e.to_string())?, FrameBasis::EigenAdapted)
            .map_err(|e| e.to_string())?;
        let polys = (0..n)
            .map(|_| LaurentPoly::monomial(vec![rng.gen_range(-2..=2)], CycScalar::from_int(rng.gen_range(1..=3))))
            .collect();
        let sigma = LaurentSection::new(&f, polys).map_err(|e| e.to_string())?;
        let p = base_change_pullback(&f, &sigma, false).map_err(|e| e.to_string())?;
        let deg = p.degrees[0] as f64;
        for _ in 0..10 {
            let zt = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(0.05..0.5));
            let down = sigma.evaluate(&f, &[zt * deg]).map_err(|e| e.to_string())?;
            let up = p.section.evaluate(&p.cover, &[zt]).map_err(|e| e.to_string())?;
            worst = worst.max((down - &up).norm() / up.norm());
            count += 1;
        }
    }
    let mut exact = true;
    for m in 1i64..=12 {
        for k in 0..m {
            for n in -5i64..=5 {
                exact &= (m * n + m - 1 - k >= 0) == (n >= 0);
            }
        }
    }
    check(
        worst < 1e-9 && exact,
        format!("{count} pullback samples, max relative error {worst:.2e}; exponent equivalence exact: {exact}"),
    )
}

fn elliptic_closed_forms() -> Verdict {
    let vhs = elliptic_vhs();
    let mut worst: f64 = 0.0;
    for x in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        for y in [1.0, 2.0, 3.0, 4.0, 5.0] {
            let z = [Complex64::new(x, y)];
            let w = vhs.lowest_piece_frame(&z).map_err(|e| e.to_string())?.column(0).into_owned();
            let cases = [
                (w, 2.0 * y),
                (basis_vector(0, 2), 1.0 / y),
                (basis_vector(1, 2), (x * x + y * y) / y),
            ];
            for (v, expected) in cases {
                let got = hodge_norm_squared(&vhs, &v, &z)
                    .map_err(|e| e.to_string())?
                    .ok_or("metric unavailable")?;
                worst = worst.max((got - expected).abs() / expected);
            }
        }
    }
    check(worst < 1e-9, format!("25 points x 3 norms, max relative error {worst:.2e}"))
}

fn mutual_boundedness() -> Verdict {
    let vhs = elliptic_vhs();
    let grading = multi_grading(vhs.nilpotents(), &ExactMatrix::identity(2, 1), 0).map_err(|e| e.to_string())?;
    let model = ModelMetric::new(grading).map_err(|e| e.to_string())?;
    let region = Region::new(0.5, 1.0, 1).map_err(|e| e.to_string())?;
    let samples = region_sample(&region, 1000, 7);
    let r1 = boundedness_ratio(&vhs, &model, &region, &[basis_vector(0, 2)], &samples);
    let r2 = boundedness_ratio(&vhs, &model, &region, &[basis_vector(1, 2)], &samples);
    let two_pi = 2.0 * std::f64::consts::PI;
    let in_band = |r: &hodge_lattice_core::asymnorm::BoundednessReport| {
        r.pass && r.evaluated == 1000 && r.min >= 1e-2 && r.max <= 1e2
    };
    let constant = (r1.min - two_pi).abs() / two_pi < 1e-6 && (r1.max - two_pi).abs() / two_pi < 1e-6;
    check(
        in_band(&r1) && in_band(&r2) && constant,
        format!(
            "e1 ratio in [{:.10}, {:.10}], e2 ratio in [{:.4}, {:.4}]",
            r1.min, r1.max, r2.min, r2.max
        ),
    )
}

fn oracle_grid() -> Verdict {
    let mut mismatches = Vec::new();
    let mut boundary = 0;
    for k in -3i32..=3 {
        for i in -2i32..=2 {
            let sym = laurent_integrability(k as i64, &BigRational::from_integer(BigInt::from(i)));
            let q = log_weighted_disk_integral(k, i as f64, &default_cutoffs(), 1e-4).map_err(|e| e.to_string())?;
            let numeric = match q.classification {
                Classification::Convergent { .. } => Some(true),
                Classification::Divergent { .. } => Some(false),
                Classification::Inconclusive => None,
            };
            if numeric != Some(sym.convergent) {
                mismatches.push((k, i));
            }
            let expect_boundary = i == -1 && k <= -2;
            if sym.boundary != expect_boundary || (expect_boundary && numeric != Some(true)) {
                mismatches.push((k, i));
            }
            boundary += usize::from(sym.boundary);
        }
    }
    check(
        mismatches.is_empty() && boundary == 2,
        format!("35 cells, {boundary} boundary cells, mismatches {mismatches:?}"),
    )
}

fn random_section(rng: &mut ChaCha8Rng, f: &CanonicalFrame) -> LaurentSection {
    let r = f.rank();
    let mut polys = vec![LaurentPoly::zero(1); r];
    for _ in 0..rng.gen_range(1..=3) {
        let alpha = rng.gen_range(0..r);
        let c = rng.gen_range(-3i64..=3);
        if c != 0 {
            polys[alpha].add_term(vec![rng.gen_range(-2..=2)], CycScalar::from_int(c));
        }
    }
    LaurentSection::new(f, polys).expect("frame-compatible")
}

fn implication_suite() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut total, mut fails, mut boundary, mut pass, mut vacuous) = (0, 0, 0, 0, 0);
    for model in [unipotent_jordan(2), unipotent_jordan(3)] {
        let f = CanonicalFrame::new(validate_tuple(&[model]).map_err(|e| e.to_string())?, FrameBasis::Standard)
            .map_err(|e| e.to_string())?;
        for _ in 0..600 {
            let s = random_section(&mut rng, &f);
            let r = decide(&s, &f, 0).map_err(|e| e.to_string())?;
            total += 1;
            match check_implication(&r) {
                Implication::Pass => pass += 1,
                Implication::Vacuous => vacuous += 1,
                Implication::Excluded => boundary += 1,
                Implication::Fail(_) => fails += 1,
            }
        }
    }
    check(
        fails == 0 && total >= 1000,
        format!("{total} sections: {pass} L2 and in lattice, {vacuous} not L2, {boundary} boundary-flagged, {fails} failures"),
    )
}

fn curvature() -> Verdict {
    let vhs = elliptic_vhs();
    let frame = |z: &[Complex64]| vhs.lowest_piece_frame(z);
    let grid: Vec<Vec<Complex64>> = [-0.5, 0.0, 0.5]
        .iter()
        .flat_map(|&x| [1.0, 2.0, 3.0, 5.0].map(|y| vec![Complex64::new(x, y)]))
        .collect();
    let r = curvature_probe(&vhs, &frame, &grid, 1e-3, 1e-6).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    let mut negative = 0;
    for (z, v) in &r.values {
        let v = v.ok_or("curvature sample skipped")?;
        let y = z[0].im;
        worst = worst.max((v - 1.0 / (4.0 * y * y)).abs());
        negative += usize::from(v < 0.0);
    }
    check(
        r.pass && negative == 0 && worst < 1e-4,
        format!("{} points, min {:.6}, max deviation from 1/(4y^2) {worst:.2e}", grid.len(), r.min),
    )
}

fn determinism_and_examples() -> Verdict {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/data/");
    let read = |n: &str| std::fs::read_to_string(format!("{dir}{n}")).map_err(|e| e.to_string());
    let opts = Options { seed: 42, samples: 300, ..Options::default() };
    let elliptic = read("elliptic.json")?;
    let mut identical = true;
    for cmd in [Command::Quadcheck, Command::Compare, Command::Norm, Command::Decide] {
        identical &= report_text(&run_text(cmd, &elliptic, &opts)) == report_text(&run_text(cmd, &elliptic, &opts));
    }
    let v = run_text(Command::Validate, &read("unipotent_2block.json")?, &opts);
    let l = run_text(Command::Lattice, &read("minus_identity.json")?, &opts);
    let d = run_text(Command::Decide, &read("elliptic_pole.json")?, &opts);
    let cert = &d.report["certificates"][0];
    let examples = v.code == 0
        && v.summary.contains("m = [1]")
        && l.code == 0
        && l.summary.contains("[-1/2]")
        && l.report["contained"] == true
        && d.code == 1
        && d.report["in_lattice"] == false
        && d.report["is_l2"] == false
        && cert["alpha"] == 2
        && cert["j"] == 1
        && cert["degree"] == 1
        && cert["exponent"] == -1;
    check(
        identical && examples,
        format!("byte-identical reports: {identical}; examples (exit {}, {}, {}) as documented: {examples}", v.code, l.code, d.code),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 11] = [
        ("exp-log exactness", exp_log_exactness),
        ("residue containment", residue_containment),
        ("weight filtration axioms", weight_axioms),
        ("frame equivariance", frame_equivariance),
        ("base change", base_change),
        ("elliptic closed forms", elliptic_closed_forms),
        ("mutual boundedness", mutual_boundedness),
        ("integrability oracle grid", oracle_grid),
        ("L2 implies lattice", implication_suite),
        ("curvature probe", curvature),
        ("determinism and cli examples", determinism_and_examples),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (status, detail) = match f() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{status} {:>2} {name}: {detail} ({:.2}s)", i + 1, t.elapsed().as_secs_f64());
    }
    println!("{} of {} criteria passed in {:.1}s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
