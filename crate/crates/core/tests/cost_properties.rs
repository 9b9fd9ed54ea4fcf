mod common;

use common::*;
use proptest::prelude::*;
use qfly_pbc::cost::{crossover_t, int, rat, round_cycles, AffineTerm, CostExpr, Domain, Rational};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn term() -> impl Strategy<Value = AffineTerm> {
    (0i64..5000, 1i64..12, 0i64..500, 1i64..12).prop_map(|(a, aq, b, bq)| AffineTerm {
        intercept: rat(a, aq),
        slope: rat(b, bq),
    })
}

fn expr() -> impl Strategy<Value = (CostExpr, Vec<AffineTerm>)> {
    prop::collection::vec(term(), 1..6)
        .prop_map(|terms| (CostExpr::from_terms(terms.clone(), Domain::default()).unwrap(), terms))
}

fn point() -> impl Strategy<Value = Rational> {
    (1i64..60).prop_flat_map(|q| (2 * q..=10 * q).prop_map(move |p| rat(p, q)))
}

proptest! {
    #[test]
    fn add_is_pointwise((a, _) in expr(), (b, _) in expr(), t in point()) {
        let sum = a.add(&b).unwrap();
        prop_assert_eq!(sum.eval_unchecked(&t), a.eval_unchecked(&t) + b.eval_unchecked(&t));
    }

    #[test]
    fn max_is_pointwise((a, _) in expr(), (b, _) in expr(), t in point()) {
        let m = a.max_of(&b).unwrap();
        prop_assert_eq!(m.eval_unchecked(&t), a.eval_unchecked(&t).max(b.eval_unchecked(&t)));
    }

    #[test]
    fn scale_is_pointwise((a, _) in expr(), k in 0i64..100, q in 1i64..9, t in point()) {
        let f = rat(k, q);
        prop_assert_eq!(a.scale(&f).unwrap().eval_unchecked(&t), a.eval_unchecked(&t) * f);
    }

    #[test]
    fn pruning_keeps_the_envelope((a, raw) in expr(), t in point()) {
        prop_assert_eq!(a.eval_unchecked(&t), naive_max(&raw, &t));
        prop_assert!(a.terms().len() <= raw.len());
        // canonical: slopes strictly increase
        prop_assert!(a.terms().windows(2).all(|w| w[0].slope < w[1].slope));
    }

    #[test]
    fn convex((a, _) in expr(), t1 in point(), t2 in point()) {
        let mid = (&t1 + &t2) / int(2);
        let lhs = a.eval_unchecked(&mid);
        let rhs = (a.eval_unchecked(&t1) + a.eval_unchecked(&t2)) / int(2);
        prop_assert!(lhs <= rhs);
    }

    #[test]
    fn monotone((a, _) in expr(), t1 in point(), t2 in point()) {
        let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        prop_assert!(a.eval_unchecked(&lo) <= a.eval_unchecked(&hi));
        prop_assert!(a.eval(&lo).unwrap().rounded() <= a.eval(&hi).unwrap().rounded());
    }

    #[test]
    fn text_round_trip((a, _) in expr()) {
        let back: CostExpr = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn crossover_is_a_sign_change((f, _) in expr(), (g, _) in expr()) {
        let d = Domain::default();
        let at_lo = f.eval_unchecked(d.lo()) >= g.eval_unchecked(d.lo());
        match crossover_t(&f, &g).unwrap() {
            None => {
                for k in 0..=80 {
                    let t = int(2) + rat(k, 10);
                    prop_assert_eq!(f.eval_unchecked(&t) >= g.eval_unchecked(&t), at_lo);
                }
            }
            Some(x) => {
                prop_assert!(d.contains(&x));
                // just past the crossover the comparison has flipped
                let after = &x + rat(1, 1_000_000);
                if d.contains(&after) {
                    prop_assert_ne!(f.eval_unchecked(&after) >= g.eval_unchecked(&after), at_lo);
                }
            }
        }
    }

    #[test]
    fn rounding_is_half_up(n in 0i64..1_000_000, q in 1i64..20) {
        let v = rat(n, q);
        let r = round_cycles(&v) as i64;
        // r - 1/2 <= v < r + 1/2
        prop_assert!(rat(2 * r - 1, 2) <= v && v < rat(2 * r + 1, 2));
    }
}

#[test]
fn sum_matches_fold() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let parts: Vec<CostExpr> = (0..4).map(|_| random_expr(&mut rng).0).collect();
        let total = qfly_pbc::cost::sum(parts.iter(), &Domain::default()).unwrap();
        let t = random_t(&mut rng);
        let expected: Rational = parts.iter().map(|p| p.eval_unchecked(&t)).sum();
        assert_eq!(total.eval_unchecked(&t), expected);
    }
}
