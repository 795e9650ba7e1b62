use num_complex::Complex64;

use toric_mirror::bundle::projectivize_canonical;
use toric_mirror::critical::{find_critical_points, SolverOptions};
use toric_mirror::fan::standard::*;
use toric_mirror::gw::{GwProvider, Provenance};
use toric_mirror::io::{self, Branch, FanDocument, PotentialDocument};
use toric_mirror::kahler::default_q_basis;
use toric_mirror::superpotential::{corrected_potential, hori_vafa};
use toric_mirror::{Error, Fan, KahlerData, LaurentPoly};

fn t_for(q: f64, r: usize) -> Vec<f64> {
    vec![-q.ln(); r]
}

fn standard(fan: Fan) -> KahlerData {
    let basis = default_q_basis(&fan).unwrap();
    KahlerData::standard(fan, basis).unwrap()
}

fn named_potentials() -> Vec<(&'static str, LaurentPoly, usize)> {
    let mut out = Vec::new();
    for (name, fan, count) in [
        ("P1", projective_line(), 2),
        ("P2", projective_plane(), 3),
        ("P1xP1", p1_times_p1(), 4),
    ] {
        out.push((name, hori_vafa(&standard(fan)).unwrap(), count));
    }
    let x = projectivize_canonical(&projective_line()).unwrap();
    let w = corrected_potential(&standard(x), &GwProvider::new(), 2)
        .unwrap()
        .potential;
    out.push(("F2", w, 4));
    out
}

#[test]
fn counts_are_stable_under_tolerance() {
    for (name, w, count) in named_potentials() {
        let t = t_for(0.01, w.num_q_vars());
        for tol in [1e-10, 1e-12] {
            let opts = SolverOptions {
                tol,
                ..SolverOptions::default()
            };
            let r = find_critical_points(&w, &t, &opts).unwrap();
            assert_eq!(r.len(), count, "{name} at tol {tol}");
            assert!(r.residuals.iter().all(|&x| x <= tol));
        }
    }
}

#[test]
fn reports_are_byte_identical() {
    for (_, w, _) in named_potentials() {
        let t = t_for(0.01, w.num_q_vars());
        let seq = SolverOptions {
            parallel: false,
            ..SolverOptions::default()
        };
        let a = io::to_canonical_json(&find_critical_points(&w, &t, &seq).unwrap()).unwrap();
        let b = io::to_canonical_json(
            &find_critical_points(&w, &t, &SolverOptions::default()).unwrap(),
        )
        .unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn points_are_separated() {
    for (_, w, _) in named_potentials() {
        let r = find_critical_points(&w, &t_for(0.01, w.num_q_vars()), &SolverOptions::default())
            .unwrap();
        for (i, p) in r.points.iter().enumerate() {
            assert!(p.iter().all(|z| z.norm() > 0.0));
            for q in &r.points[i + 1..] {
                let d: f64 = p.iter().zip(q).map(|(a, b)| (a - b).norm_sqr()).sum();
                assert!(d.sqrt() > 1e-8);
            }
        }
    }
}

#[test]
fn bundle_document_pipeline() {
    // Y document → bundle document → potential document → critical points
    let y = FanDocument::parse(r#"{"dimension": 1, "rays": [[1], [-1]]}"#).unwrap();
    let x = projectivize_canonical(&y.to_fan().unwrap()).unwrap();
    let k = standard(x.clone());
    let doc_text = io::to_canonical_json(&FanDocument::from_fan(&x, Some(&k))).unwrap();
    let doc = FanDocument::parse(&doc_text).unwrap();
    let fan = doc.to_fan().unwrap();
    assert_eq!(fan, x);
    let kd = doc.kahler_data(&fan).unwrap();
    let pot = io::potential_document(&kd, &GwProvider::new(), 3).unwrap();
    assert_eq!(pot.branch, Branch::Corrected);
    assert_eq!(pot.correction_text.as_deref(), Some("1 + q1"));
    assert_eq!(pot.q_areas, vec!["t1", "t2"]);
    assert!(pot
        .open_invariants
        .iter()
        .all(|o| matches!(o.provenance, Provenance::BasicDisk | Provenance::Builtin)));
    let text = io::to_canonical_json(&pot).unwrap();
    let w = PotentialDocument::parse(&text)
        .unwrap()
        .to_laurent()
        .unwrap();
    let r = find_critical_points(&w, &t_for(0.01, 2), &SolverOptions::default()).unwrap();
    assert_eq!(r.len(), 4);
    let mut values: Vec<f64> = r.values.iter().map(|v| v.re).collect();
    values.sort_by(f64::total_cmp);
    for (v, e) in values.iter().zip([-0.22, -0.18, 0.18, 0.22]) {
        assert!((v - e).abs() < 1e-9);
    }
    assert!(r.values.iter().all(|v| v.im.abs() < 1e-12));
}

#[test]
fn bundle_over_p2_requires_invariants() {
    let x = projectivize_canonical(&projective_plane()).unwrap();
    let k = standard(x);
    match io::potential_document(&k, &GwProvider::new(), 1) {
        Err(Error::UnknownInvariant { class }) => assert_eq!(class, vec![-3, 1, 1, 1, 0]),
        other => panic!("unexpected {other:?}"),
    }
    let doc = io::potential_document(&k, &GwProvider::new().assume_zero(true), 2).unwrap();
    assert!(doc
        .gw_values
        .iter()
        .all(|g| g.provenance == Provenance::AssumedZero && g.value == "0"));
}

#[test]
fn evaluation_matches_naive_sum() {
    let w = corrected_potential(&standard(f2_reference()), &GwProvider::new(), 2)
        .unwrap()
        .potential;
    let t = t_for(0.01, 2);
    let q = 0.01f64;
    let z = [Complex64::new(0.3, -0.2), Complex64::new(-0.7, 0.4)];
    let naive = z[0] + z[1] + q * q * q / (z[0] * z[1] * z[1]) + (q + q * q) / z[1];
    let got = w.evaluate(&z, &t).unwrap();
    assert!((got - naive).norm() <= 1e-12 * naive.norm());
}
