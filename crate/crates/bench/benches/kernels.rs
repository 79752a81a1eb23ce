use criterion::{black_box, criterion_group, criterion_main, Criterion};
use witten_psi::poly::{int, rat};
use witten_psi::psi::{check_h1, sturm_roots, trace_branches, PsiBox};
use witten_psi::spectral::{assemble_witten, fit_exponent, geometric_lambdas, min_eig, GridSpec, SweepRecord};
use witten_psi::{parse_poly, Axis};

fn roots(c: &mut Criterion) {
    // section of the Maire derivative at y = 1/3 and a degree-9 product with close roots
    let maire = parse_poly("3*x^2 - y^2").unwrap().restrict(Axis::Y, &rat(1, 3));
    let close = parse_poly("(x - 1/1000)*(x + 1/1000)*(x^2 - 2)*(x^3 - x)*(x^2 + 1)").unwrap().restrict(Axis::Y, &int(0));
    c.bench_function("sturm_roots/maire_section", |b| {
        b.iter(|| sturm_roots(black_box(&maire), &int(-1), &int(1)).unwrap())
    });
    c.bench_function("sturm_roots/degree9_close", |b| {
        b.iter(|| sturm_roots(black_box(&close), &int(-2), &int(2)).unwrap())
    });
}

fn branches(c: &mut Criterion) {
    let phi = parse_poly("x^3 - x*y^2").unwrap();
    let bx = PsiBox::square(int(1));
    c.bench_function("trace_branches/maire_129", |b| b.iter(|| trace_branches(black_box(&phi), &bx, 129).unwrap()));
    c.bench_function("check_h1/maire_129", |b| b.iter(|| check_h1(black_box(&phi), &bx, 0.25, 129).unwrap()));
}

fn spectral(c: &mut Criterion) {
    let phi = parse_poly("x^3 - x*y^2").unwrap();
    let mut group = c.benchmark_group("spectral");
    group.sample_size(10);
    for n in [64, 128, 256] {
        let g = GridSpec::new(0.5, n).unwrap();
        group.bench_function(format!("assemble/n{n}"), |b| b.iter(|| assemble_witten(black_box(&phi), 80.0, &g)));
        let k = assemble_witten(&phi, 80.0, &g);
        group.bench_function(format!("min_eig/n{n}"), |b| b.iter(|| min_eig(black_box(&k), 1e-8, 500).unwrap()));
    }
    group.finish();
}

fn fit(c: &mut Criterion) {
    let recs: Vec<_> = geometric_lambdas(10.0, 2.0, 64)
        .into_iter()
        .map(|l| SweepRecord { lambda: l, mu_min: 3.0 * l.powf(2.0 / 3.0), n_used: 64, converged: true, residual: 0.0 })
        .collect();
    c.bench_function("fit_exponent/64", |b| b.iter(|| fit_exponent(black_box(&recs), 0.5).unwrap()));
}

criterion_group!(benches, roots, branches, spectral, fit);
criterion_main!(benches);
