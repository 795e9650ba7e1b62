use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_rational::BigRational;

use toric_mirror::bundle::projectivize_canonical;
use toric_mirror::critical::{find_critical_points, SolverOptions};
use toric_mirror::fan::standard::*;
use toric_mirror::gw::GwProvider;
use toric_mirror::kahler::{default_q_basis, ParamValues};
use toric_mirror::superpotential::{corrected_potential, hori_vafa};
use toric_mirror::{Fan, KahlerData};

fn standard(fan: Fan) -> KahlerData {
    let basis = default_q_basis(&fan).unwrap();
    KahlerData::standard(fan, basis).unwrap()
}

fn multistart(c: &mut Criterion) {
    let t = -(0.01f64).ln();
    let f2 = corrected_potential(&standard(f2_reference()), &GwProvider::new(), 2)
        .unwrap()
        .potential;
    let p1p1 = hori_vafa(&standard(p1_times_p1())).unwrap();
    let x = projectivize_canonical(&projective_plane()).unwrap();
    let x_pot = corrected_potential(&standard(x), &GwProvider::new().assume_zero(true), 1)
        .unwrap()
        .potential;
    let cases = [("F2", f2, 2), ("P1xP1", p1p1, 2), ("P(K_P2+O)", x_pot, 2)];

    let mut group = c.benchmark_group("critical_points");
    group.sample_size(10);
    for (name, w, r) in &cases {
        for parallel in [false, true] {
            let opts = SolverOptions {
                parallel,
                ..SolverOptions::default()
            };
            let label = if parallel { "parallel" } else { "sequential" };
            group.bench_with_input(BenchmarkId::new(label, name), w, |b, w| {
                b.iter(|| find_critical_points(w, &vec![t; *r], &opts))
            });
        }
    }
    group.finish();
}

fn vertex_enumeration(c: &mut Criterion) {
    // a 3-fold bundle over a blown-up surface has enough rays to matter
    let base = Fan::new(
        2,
        vec![
            vec![1, 0],
            vec![1, 1],
            vec![0, 1],
            vec![-1, 0],
            vec![-1, -1],
            vec![0, -1],
        ],
        None,
    )
    .unwrap();
    let x = projectivize_canonical(&base).unwrap();
    // the base has more primitive relations than H₂ has rank, so pass a basis
    let basis = x.homology_basis().unwrap();
    let k = KahlerData::standard(x, basis).unwrap();
    let values: ParamValues = k
        .params()
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), BigRational::from_integer((i as i64 + 2).into())))
        .collect();
    let mut group = c.benchmark_group("vertices");
    for parallel in [false, true] {
        let label = if parallel { "parallel" } else { "sequential" };
        group.bench_function(label, |b| b.iter(|| k.vertices_with(&values, parallel)));
    }
    group.finish();
}

criterion_group!(benches, multistart, vertex_enumeration);
criterion_main!(benches);
