//! Randomized invariants: prox-operator lemmas over the whole catalogue,
//! oracle agreement, metric axioms for the coupled Wasserstein estimate and
//! entropy-estimator consistency.

use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;
use splangevin::metrics::{entropy_estimate, wasserstein2_1d_samples, EntropyMethod};
use splangevin::prox::{
    moreau_envelope, numerical_prox_oracle, yosida, Abs, EdgeDiff, ProxChain, ProxFunction,
    Quadratic, ShiftedAbs, Zero,
};

const SLACK: f64 = 1e-9;

/// Serializable description of a catalogue term, so proptest can shrink it.
#[derive(Debug, Clone)]
enum TermSpec {
    Zero,
    Abs(usize),
    Shifted(Vec<f64>),
    Quad(Vec<f64>, f64),
    Edge(usize, usize, f64),
}

impl TermSpec {
    fn build(&self) -> Arc<dyn ProxFunction<f64>> {
        match self {
            TermSpec::Zero => Arc::new(Zero),
            TermSpec::Abs(dim) => Arc::new(Abs::new(*dim)),
            TermSpec::Shifted(s) => Arc::new(ShiftedAbs::new(s.clone())),
            TermSpec::Quad(c, s2) => Arc::new(Quadratic::new(c.clone(), *s2).unwrap()),
            TermSpec::Edge(v, w, t) => Arc::new(EdgeDiff::new(*v, *w, *t).unwrap()),
        }
    }
}

fn coords(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0..5.0f64, dim)
}

fn arb_term(dim: usize) -> BoxedStrategy<TermSpec> {
    let mut arms: Vec<BoxedStrategy<TermSpec>> = vec![
        Just(TermSpec::Zero).boxed(),
        Just(TermSpec::Abs(dim)).boxed(),
        coords(dim).prop_map(TermSpec::Shifted).boxed(),
        (coords(dim), 0.4..3.0f64)
            .prop_map(|(c, s2)| TermSpec::Quad(c, s2))
            .boxed(),
    ];
    if dim >= 2 {
        arms.push(
            (0..dim, 0..dim, 0.2..2.0f64)
                .prop_filter("distinct endpoints", |(v, w, _)| v != w)
                .prop_map(|(v, w, t)| TermSpec::Edge(v.min(w), v.max(w), t))
                .boxed(),
        );
    }
    prop::strategy::Union::new(arms).boxed()
}

/// Term plus compatible inputs, with dimension drawn from `dims`.
fn term_and_points(
    dims: std::ops::RangeInclusive<usize>,
    points: usize,
) -> impl Strategy<Value = (TermSpec, Vec<Vec<f64>>, f64)> {
    dims.prop_flat_map(move |dim| {
        (
            arb_term(dim),
            prop::collection::vec(coords(dim), points),
            0.02..3.0f64,
        )
    })
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>()
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn prox_is_nonexpansive((spec, pts, gamma) in term_and_points(1..=4, 2)) {
        let g = spec.build();
        let pa = g.prox(&pts[0], gamma).unwrap();
        let pb = g.prox(&pts[1], gamma).unwrap();
        prop_assert!(dist2(&pa, &pb).sqrt() <= dist2(&pts[0], &pts[1]).sqrt() + SLACK);
    }

    #[test]
    fn moreau_envelope_is_bracketed((spec, pts, gamma) in term_and_points(1..=4, 1)) {
        let g = spec.build();
        let x = &pts[0];
        let env = moreau_envelope(g.as_ref(), x, gamma).unwrap();
        let value = g.eval(x);
        let slope2 = norm2(&g.min_subgradient(x));
        let scale = 1.0 + value.abs() + gamma * slope2;
        prop_assert!(env <= value + SLACK * scale);
        prop_assert!(env >= value - 0.5 * gamma * slope2 - SLACK * scale);
    }

    #[test]
    fn yosida_is_a_dominated_subgradient_at_the_prox(
        (spec, pts, gamma) in term_and_points(1..=4, 2),
    ) {
        let g = spec.build();
        let (x, probe) = (&pts[0], &pts[1]);
        let p = g.prox(x, gamma).unwrap();
        let yos = yosida(g.as_ref(), x, gamma).unwrap();
        let inner: f64 = yos.iter().zip(probe.iter().zip(&p)).map(|(s, (y, q))| s * (y - q)).sum();
        let scale = 1.0 + g.eval(probe).abs() + g.eval(&p).abs() + inner.abs();
        prop_assert!(g.eval(probe) >= g.eval(&p) + inner - SLACK * scale);
        prop_assert!(norm2(&yos).sqrt() <= norm2(&g.min_subgradient(x)).sqrt() + SLACK);
    }

    #[test]
    fn composed_prox_controls_the_distance_to_any_anchor(
        (specs, anchor, y0, gamma) in (2usize..=4, 1usize..=5).prop_flat_map(|(dim, len)| (
            prop::collection::vec(arb_term(dim), len),
            coords(dim),
            coords(dim),
            0.02..2.0f64,
        )),
    ) {
        let terms: Vec<_> = specs.iter().map(TermSpec::build).collect();
        let chain = ProxChain::new(terms.clone());
        let (end, inter) = chain.apply(&y0, gamma).unwrap();

        let mut pre = vec![y0.clone()];
        pre.extend(inter.iter().take(inter.len().saturating_sub(1)).cloned());
        let mut rhs = dist2(&y0, &anchor);
        for (g, at) in terms.iter().zip(&pre) {
            rhs -= 2.0 * gamma
                * (moreau_envelope(g.as_ref(), at, gamma).unwrap() - g.eval(&anchor));
        }
        let lhs = dist2(&end, &anchor);
        prop_assert!(lhs <= rhs + SLACK * (1.0 + lhs.abs() + rhs.abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn closed_form_prox_matches_the_numerical_oracle(
        (spec, pts, gamma) in term_and_points(1..=4, 1),
    ) {
        let g = spec.build();
        let x = &pts[0];
        let closed = g.prox(x, gamma).unwrap();
        let g2 = g.clone();
        let numeric = numerical_prox_oracle(move |u: &[f64]| g2.eval(u), x, gamma, 1e-8).unwrap();
        for (a, b) in closed.iter().zip(&numeric) {
            prop_assert!((a - b).abs() <= 1e-6, "closed {closed:?} vs oracle {numeric:?}");
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 1 {
        return vec![vec![0]];
    }
    let mut out = Vec::new();
    for tail in permutations(n - 1) {
        for slot in 0..n {
            let mut p = tail.clone();
            p.insert(slot, n - 1);
            out.push(p);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn w2_is_symmetric_on_equal_sizes(
        a in prop::collection::vec(-10.0..10.0f64, 1..40),
        b in prop::collection::vec(-10.0..10.0f64, 1..40),
    ) {
        let n = a.len().min(b.len());
        let (a, b) = (&a[..n], &b[..n]);
        prop_assert_eq!(
            wasserstein2_1d_samples(a, b).unwrap(),
            wasserstein2_1d_samples(b, a).unwrap()
        );
    }

    #[test]
    fn w2_satisfies_the_triangle_inequality(
        a in prop::collection::vec(-10.0..10.0f64, 12),
        b in prop::collection::vec(-10.0..10.0f64, 12),
        c in prop::collection::vec(-10.0..10.0f64, 12),
    ) {
        let ac = wasserstein2_1d_samples(&a, &c).unwrap().sqrt();
        let ab = wasserstein2_1d_samples(&a, &b).unwrap().sqrt();
        let bc = wasserstein2_1d_samples(&b, &c).unwrap().sqrt();
        prop_assert!(ac <= ab + bc + SLACK);
    }

    #[test]
    fn w2_vanishes_exactly_on_permuted_multisets(
        a in prop::collection::vec(-10.0..10.0f64, 2..30),
        rotate in 0usize..29,
    ) {
        let mut shuffled = a.clone();
        shuffled.reverse();
        shuffled.rotate_left(rotate % a.len());
        prop_assert_eq!(wasserstein2_1d_samples(&a, &shuffled).unwrap(), 0.0);
        // Converse: a vanishing distance forces equal sorted atom lists.
        let b: Vec<f64> = a.iter().map(|v| v + 0.25).collect();
        prop_assert!(wasserstein2_1d_samples(&a, &b).unwrap() > 0.0);
    }

    #[test]
    fn w2_equals_the_brute_force_assignment_optimum(
        pair in (1usize..=6).prop_flat_map(|n| (
            prop::collection::vec(-10.0..10.0f64, n),
            prop::collection::vec(-10.0..10.0f64, n),
        )),
    ) {
        let (a, b) = pair;
        let n = a.len();
        let best = permutations(n)
            .into_iter()
            .map(|p| {
                p.iter()
                    .enumerate()
                    .map(|(i, &j)| (a[i] - b[j]) * (a[i] - b[j]))
                    .sum::<f64>()
                    / n as f64
            })
            .fold(f64::INFINITY, f64::min);
        let coupled = wasserstein2_1d_samples(&a, &b).unwrap();
        prop_assert!((coupled - best).abs() <= 1e-12 * (1.0 + best));
    }
}

#[test]
fn entropy_error_shrinks_with_sample_size() {
    let truth = 0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E).ln();
    let normal = rand_distr::StandardNormal;
    let mut small_errs = Vec::new();
    let mut large_errs = Vec::new();
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(9_000 + seed);
        let draws: Vec<f64> = (0..100_000).map(|_| normal.sample(&mut rng)).collect();
        for (n, errs) in [(1_000, &mut small_errs), (100_000, &mut large_errs)] {
            let est = entropy_estimate(&draws[..n], EntropyMethod::default()).unwrap();
            errs.push((est.value - truth).abs());
        }
    }
    small_errs.sort_by(f64::total_cmp);
    large_errs.sort_by(f64::total_cmp);
    let median = |v: &[f64]| v[v.len() / 2];
    assert!(
        median(&large_errs) < median(&small_errs),
        "KDE error should shrink: n=1e3 median {} vs n=1e5 median {}",
        median(&small_errs),
        median(&large_errs)
    );
}
