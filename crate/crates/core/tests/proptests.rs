//! Property tests over randomized series data.

use proptest::prelude::*;

use pscaffold::fp::Prime;
use pscaffold::series::{artin_schreier_reduce, LaurentSeries, Valuation};

fn arb_prime() -> impl Strategy<Value = Prime> {
    prop::sample::select(vec![2u32, 3, 5, 7]).prop_map(|p| Prime::new(p).unwrap())
}

fn arb_series(p: Prime) -> impl Strategy<Value = LaurentSeries> {
    prop::collection::vec((-10i64..=8, 1i64..p.p() as i64), 1..5)
        .prop_map(move |pairs| LaurentSeries::from_pairs(p, &pairs))
}

fn prime_and_two_series() -> impl Strategy<Value = (Prime, LaurentSeries, LaurentSeries)> {
    arb_prime().prop_flat_map(|p| (Just(p), arb_series(p), arb_series(p)))
}

proptest! {
    #[test]
    fn wp_is_additive((_, a, b) in prime_and_two_series()) {
        prop_assert_eq!(a.add(&b).wp(), a.wp().add(&b.wp()));
    }

    #[test]
    fn reduction_round_trips((p, beta, _) in prime_and_two_series()) {
        let (red, y) = artin_schreier_reduce(&beta, 96).unwrap();
        prop_assert!(beta.agrees_with(&red.add(&y.wp())));
        // reduced form: negative valuation prime to p, a constant, or zero
        match red.valuation().unwrap() {
            Valuation::Finite(v) if v < 0 => prop_assert!(v.rem_euclid(p.p() as i64) != 0),
            Valuation::Finite(v) => prop_assert_eq!(v, 0),
            Valuation::Infinite => {}
        }
    }

    #[test]
    fn vandermonde_convolution((p, x, y) in prime_and_two_series()) {
        for t in 0..p.p() {
            let mut sum = LaurentSeries::zero(p);
            for i in 0..=t {
                sum = sum.add(&y.binomial(i).unwrap().mul(&x.binomial(t - i).unwrap()));
            }
            prop_assert_eq!(sum, x.add(&y).binomial(t).unwrap());
        }
    }

    #[test]
    fn product_valuations_add((_, a, b) in prime_and_two_series()) {
        if let (Valuation::Finite(va), Valuation::Finite(vb)) =
            (a.valuation().unwrap(), b.valuation().unwrap())
        {
            prop_assert_eq!(a.mul(&b).valuation().unwrap(), Valuation::Finite(va + vb));
        }
    }
}
