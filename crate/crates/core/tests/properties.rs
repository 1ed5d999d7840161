use proptest::prelude::*;

use shapley_minimax::approximation::approximate_payment_free;
use shapley_minimax::axioms::{check_axiom, Axiom};
use shapley_minimax::games::{
    build_payment_free_representation, eval_payment_free_rep, payment_free_from_spec, random_spec,
    recession_operator, shapley_eval, GameSpec, RandomGameShape,
};
use shapley_minimax::norms::{epsilon_net, extreme_points, NetTarget, WeakNorm};
use shapley_minimax::numeric::{
    dot, is_stochastic, sample_points, sup_norm, Execution, SampleConfig, StochasticVector, Tolerance, Vector,
};
use shapley_minimax::operator::{self, Coordinate, Operator};
use shapley_minimax::oracle::grid_minimize;
use shapley_minimax::representation::{halfspace_simplex_extremes, maximin_eval, minimax_eval, YNet};
use shapley_minimax::risk::{self, coherent_eval};

fn tol() -> Tolerance {
    Tolerance::default()
}

fn points(seed: u64, count: usize, n: usize, half_width: f64) -> Vec<Vector> {
    sample_points(&SampleConfig::cube(seed, count, n, half_width).unwrap()).unwrap()
}

fn vec_in(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-100.0..100.0f64, n)
}

fn pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..6).prop_flat_map(|n| (vec_in(n), vec_in(n)))
}

fn norms(n: usize) -> Vec<WeakNorm> {
    let mut gens = vec![Vector::unit(n, 0), Vector::from(vec![-0.5; n])];
    if n > 1 {
        gens.push(Vector::from((0..n).map(|j| if j == 1 { 2.0 } else { 0.0 }).collect::<Vec<_>>()));
    }
    vec![
        WeakNorm::Top { n },
        WeakNorm::TopPlus { n },
        WeakNorm::Sup { n },
        WeakNorm::polyhedral(gens).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn sup_norm_is_a_norm((x, y) in pair(), lambda in -50.0..50.0f64) {
        let sum: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        prop_assert!(sup_norm(&sum).unwrap() <= sup_norm(&x).unwrap() + sup_norm(&y).unwrap() + 1e-12);
        let scaled: Vec<f64> = x.iter().map(|v| lambda * v).collect();
        let lhs = sup_norm(&scaled).unwrap();
        prop_assert!((lhs - lambda.abs() * sup_norm(&x).unwrap()).abs() <= 1e-12 * lhs.max(1.0));
    }

    #[test]
    fn weak_norms_are_sublinear((x, y) in pair(), lambda in 0.0..10.0f64) {
        for q in norms(x.len()) {
            let qx = q.eval(&x).unwrap();
            let scaled: Vec<f64> = x.iter().map(|v| lambda * v).collect();
            prop_assert!((q.eval(&scaled).unwrap() - lambda * qx).abs() <= 1e-9 * (1.0 + lambda * qx.abs()));
            let mid: Vec<f64> = x.iter().zip(&y).map(|(a, b)| 0.5 * (a + b)).collect();
            prop_assert!(q.eval(&mid).unwrap() <= 0.5 * (qx + q.eval(&y).unwrap()) + 1e-9);
        }
    }

    #[test]
    fn generators_are_bounded_by_the_norm(x in (1usize..6).prop_flat_map(vec_in)) {
        for q in norms(x.len()) {
            let neg: Vec<f64> = x.iter().map(|v| -v).collect();
            let (hi, lo) = (q.eval(&x).unwrap(), -q.eval(&neg).unwrap());
            for p in q.generators() {
                let v = dot(&p, &x);
                prop_assert!(lo - 1e-9 <= v && v <= hi + 1e-9);
            }
            let via_extremes = extreme_points(&q, tol()).unwrap().iter().map(|p| dot(p, &x)).fold(f64::NEG_INFINITY, f64::max);
            let via_extremes = if matches!(q, WeakNorm::TopPlus { .. }) { via_extremes.max(0.0) } else { via_extremes };
            prop_assert!((via_extremes - hi).abs() <= 1e-9);
        }
        let simplex = (0..x.len()).map(|j| dot(&Vector::unit(x.len(), j), &x)).fold(f64::NEG_INFINITY, f64::max);
        prop_assert_eq!(simplex, shapley_minimax::norms::top(&x).unwrap());
    }

    #[test]
    fn halfspace_vertices_are_stochastic(a in (2usize..7).prop_flat_map(|n| prop::collection::vec(-1.0..1.0f64, n))) {
        for p in halfspace_simplex_extremes(&a, tol()) {
            prop_assert!(is_stochastic(&p, tol()));
            prop_assert!(dot(&p, &a) <= 1e-9);
            prop_assert!(p.support_size(1e-9) <= 2);
        }
    }
}

#[test]
fn sampling_is_reproducible() {
    let cfg = SampleConfig::cube(9, 500, 3, 2.0).unwrap();
    assert_eq!(sample_points(&cfg).unwrap(), sample_points(&cfg).unwrap());
}

#[test]
fn nets_cover_their_targets() {
    for n in 1..=3 {
        for eps in [0.5, 0.3] {
            let cube = NetTarget::Box { lower: Vector::constant(n, -1.0), upper: Vector::constant(n, 1.0) };
            let net = epsilon_net(&cube, eps, n).unwrap();
            let r = net.coverage_radius(&points(3, 1_000, n, 1.0), |d| sup_norm(d).unwrap());
            assert!(r <= eps / 2.0 + 1e-12, "box n={n}: {r}");
            let sphere = epsilon_net(&NetTarget::UnitSphere, eps, n).unwrap();
            let on_sphere: Vec<Vector> = points(4, 1_000, n, 1.0)
                .iter()
                .filter_map(|x| shapley_minimax::norms::project_to_sphere(x))
                .collect();
            let r = sphere.coverage_radius(&on_sphere, |d| sup_norm(d).unwrap());
            assert!(r <= eps / 2.0 + 1e-12, "sphere n={n}: {r}");
        }
    }
}

fn games(count: u64, subprobability: bool) -> Vec<GameSpec> {
    (0..count)
        .map(|k| {
            let mut shape = RandomGameShape::new(1 + (k % 4) as usize);
            shape.subprobability = subprobability;
            random_spec(40 + k, shape)
        })
        .collect()
}

#[test]
fn payment_free_operators_are_homogeneous() {
    for spec in games(20, false) {
        let pf = payment_free_from_spec(&spec);
        let cfg = SampleConfig::cube(1, 10_000, pf.n, 10.0).unwrap();
        let r = check_axiom(&pf, Axiom::H, &cfg, tol()).unwrap();
        assert!(r.holds, "{r}");
    }
}

#[test]
fn axiom_reports_are_reproducible() {
    let spec = &games(3, false)[2];
    let cfg = SampleConfig::cube(5, 2_000, spec.n, 10.0).unwrap();
    let seq = cfg.clone().with_execution(Execution::Sequential);
    for axiom in Axiom::ALL {
        let a = check_axiom(spec, axiom, &cfg, tol()).unwrap();
        assert_eq!(a, check_axiom(spec, axiom, &cfg, tol()).unwrap());
        assert_eq!(a, check_axiom(spec, axiom, &seq, tol()).unwrap());
    }
}

#[test]
fn recession_matches_payment_free_operator() {
    for spec in games(20, false) {
        let pf = payment_free_from_spec(&spec);
        let bound = 2.0 * spec.max_abs_payoff() / 2f64.powi(20);
        for x in points(6, 200, spec.n, 10.0) {
            let hat = recession_operator(&spec, &x, tol()).unwrap();
            let direct = shapley_eval(&pf, &x).unwrap();
            for (a, b) in hat.iter().zip(&direct) {
                assert!((a - b).abs() <= bound.max(1e-9), "{a} vs {b}");
            }
        }
    }
}

#[test]
fn payment_free_representation_dominates_and_is_exact_on_net() {
    for spec in games(10, false) {
        let pf = payment_free_from_spec(&spec);
        let net = YNet::new(points(8, 40, pf.n, 3.0)).unwrap();
        let (rep, _) = build_payment_free_representation(&pf, &net, tol()).unwrap();
        for z in &net.points {
            let (f, g) = (shapley_eval(&pf, z).unwrap(), eval_payment_free_rep(&rep, z).unwrap());
            for (a, b) in f.iter().zip(&g) {
                assert!((a - b).abs() <= 1e-9);
            }
        }
        for x in points(9, 2_000, pf.n, 10.0) {
            let (f, g) = (shapley_eval(&pf, &x).unwrap(), eval_payment_free_rep(&rep, &x).unwrap());
            for (a, b) in f.iter().zip(&g) {
                assert!(b >= &(a - 1e-9), "{b} < {a}");
            }
        }
    }
}

#[test]
fn refining_the_net_tightens_both_envelopes() {
    for (k, spec) in games(6, false).into_iter().enumerate() {
        let f = Coordinate::new(spec, 0).unwrap();
        let n = f.dim_in();
        let fine = points(10 + k as u64, 60, n, 4.0);
        let coarse = YNet::new(fine[..15].to_vec()).unwrap();
        let fine = YNet::new(fine).unwrap();
        for x in points(11, 500, n, 4.0) {
            let fx = f.eval_scalar(&x).unwrap();
            let (uc, uf) = (minimax_eval(&f, &coarse, &x).unwrap().value, minimax_eval(&f, &fine, &x).unwrap().value);
            let (lc, lf) = (maximin_eval(&f, &coarse, &x).unwrap().value, maximin_eval(&f, &fine, &x).unwrap().value);
            assert!(uf <= uc && lf >= lc);
            assert!(lf <= fx + 1e-9 && fx <= uf + 1e-9);
        }
    }
}

#[test]
fn minimax_agrees_with_grid_search() {
    let h = 0.25;
    for (k, spec) in games(20, false).into_iter().enumerate() {
        let f = Coordinate::new(spec, 0).unwrap();
        let n = f.dim_in().min(3);
        if n != f.dim_in() {
            continue;
        }
        let cube = NetTarget::Box { lower: Vector::constant(n, -2.0), upper: Vector::constant(n, 2.0) };
        let net = YNet::new(epsilon_net(&cube, h, n).unwrap().points).unwrap();
        for x in points(k as u64, 20, n, 1.5) {
            let phi = |y: &[f64]| -> shapley_minimax::Result<f64> {
                let d: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
                Ok(shapley_minimax::norms::top(&d)? + f.eval_scalar(y)?)
            };
            let grid = grid_minimize(phi, &vec![-2.0; n], &vec![2.0; n], h).unwrap();
            let mm = minimax_eval(&f, &net, &x).unwrap().value;
            assert!((mm - grid.value).abs() <= 2.0 * h, "{mm} vs {}", grid.value);
        }
    }
}

#[test]
fn approximants_are_homogeneous() {
    let spec = payment_free_from_spec(&games(3, false)[2]);
    let approx = approximate_payment_free(&spec, 0.5, tol()).unwrap();
    for (k, x) in points(12, 500, spec.n, 5.0).iter().enumerate() {
        let lambda = k as f64 / 50.0;
        let scaled: Vec<f64> = x.iter().map(|v| lambda * v).collect();
        let g = eval_payment_free_rep(&approx.rep, x).unwrap();
        let gs = eval_payment_free_rep(&approx.rep, &scaled).unwrap();
        for (a, b) in g.iter().zip(&gs) {
            assert!((lambda * a - b).abs() <= 1e-9 * (1.0 + b.abs()));
        }
    }
}

#[test]
fn coherent_measures_are_coherent() {
    let pset = vec![
        StochasticVector::new(vec![0.5, 0.25, 0.25], tol()).unwrap(),
        StochasticVector::unit(3, 1),
        StochasticVector::new(vec![0.1, 0.1, 0.8], tol()).unwrap(),
    ];
    let mu = |x: &[f64]| coherent_eval(&pset, x).unwrap();
    let xs = points(13, 10_000, 3, 10.0);
    for w in xs.windows(2) {
        let (x, y) = (&w[0], &w[1]);
        let up: Vec<f64> = x.iter().map(|v| v + y[0].abs()).collect();
        assert!(mu(&up) <= mu(x) + 1e-9);
        let cash: Vec<f64> = x.iter().map(|v| v + 2.0).collect();
        assert!((mu(&cash) - (mu(x) - 2.0)).abs() <= 1e-9);
        let lambda = y[1].abs();
        let scaled: Vec<f64> = x.iter().map(|v| lambda * v).collect();
        assert!((mu(&scaled) - lambda * mu(x)).abs() <= 1e-9 * (1.0 + lambda));
        let mid: Vec<f64> = x.iter().zip(y.iter()).map(|(a, b)| 0.5 * (a + b)).collect();
        assert!(mu(&mid) <= 0.5 * (mu(x) + mu(y)) + 1e-9);
    }
}

#[test]
fn worst_case_has_both_representations() {
    let worst = risk::worst_case(3).unwrap();
    let units: Vec<_> = (0..3).map(|j| StochasticVector::unit(3, j)).collect();
    for x in points(14, 10_000, 3, 10.0) {
        assert_eq!(worst.eval(&x).unwrap(), coherent_eval(&units, &x).unwrap());
    }
}

#[test]
fn normalization_is_idempotent() {
    for mu in [risk::worst_case(3).unwrap(), risk::nonconvex(3).unwrap()] {
        for y in points(15, 1_000, 3, 10.0) {
            let once = mu.normalize(&y).unwrap();
            assert!(mu.eval(&once).unwrap().abs() <= 1e-9);
            let twice = mu.normalize(&once).unwrap();
            for (a, b) in once.iter().zip(twice.iter()) {
                assert!((a - b).abs() <= 1e-9);
            }
        }
    }
}

#[test]
fn top_passes_its_axioms() {
    let cfg = SampleConfig::cube(1, 2_000, 3, 10.0).unwrap();
    for axiom in [Axiom::M, Axiom::AH, Axiom::H, Axiom::Nt, Axiom::N] {
        assert!(check_axiom(&operator::top(3), axiom, &cfg, tol()).unwrap().holds);
    }
}
