use num_traits::{Signed, Zero};
use proptest::prelude::*;

use loopwalk::exact_core::{binomial, cosh_series, exp_series, sinh_over_w_series, Rational, Series};
use loopwalk::loop_engine::{
    count_nonadjacent, count_with_initial, denominator_series, denominator_terms, transfer_expansion, verify_loop,
    DenominatorTerm, NonadjacentSubset,
};
use loopwalk::models::{bd_system, bm_phi, bessel_phi, BirthDeathChain};
use loopwalk::special_polys::{bernoulli_poly, euler_poly};
use loopwalk::umbral::{combo_egf, combo_moment, SymbolCombo, SymbolKind};

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=7).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn positive() -> impl Strategy<Value = Rational> {
    (1i64..=12, 1i64..=5).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn series(order: usize) -> impl Strategy<Value = Series> {
    prop::collection::vec(rational(), order + 1).prop_map(Series::from_coeffs)
}

fn unit_series(order: usize) -> impl Strategy<Value = Series> {
    (series(order), rational().prop_filter("nonzero", |c| !c.is_zero())).prop_map(|(s, c)| {
        let mut coeffs = s.into_coeffs();
        coeffs[0] = c;
        Series::from_coeffs(coeffs)
    })
}

fn probability() -> impl Strategy<Value = Rational> {
    (2i64..=9).prop_flat_map(|d| (1..d, Just(d))).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn symbol() -> impl Strategy<Value = SymbolKind> {
    prop_oneof![Just(SymbolKind::Bernoulli), Just(SymbolKind::Euler), Just(SymbolKind::Uniform)]
}

fn combo() -> impl Strategy<Value = SymbolCombo> {
    (rational(), prop::collection::vec((symbol(), 1usize..=3, rational()), 0..3)).prop_map(|(x, terms)| {
        terms
            .into_iter()
            .fold(SymbolCombo::new(x), |c, (k, p, s)| c.with(k, p, s))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms(a in series(8), b in series(8), c in series(8)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a);
    }

    #[test]
    fn reciprocal_is_two_sided(a in unit_series(10)) {
        let inv = a.recip().unwrap();
        prop_assert_eq!(&a * &inv, Series::one(10));
        prop_assert_eq!(&inv * &a, Series::one(10));
    }

    #[test]
    fn exp_is_additive(a in rational(), b in rational(), order in 0usize..14) {
        prop_assert_eq!(exp_series(&a, order).mul_series(&exp_series(&b, order)), exp_series(&(&a + &b), order));
    }

    #[test]
    fn hyperbolic_kernels_are_even(c in rational()) {
        prop_assert!(cosh_series(&c, 15).is_even());
        prop_assert!(sinh_over_w_series(&c, 15).is_even());
    }

    #[test]
    fn reflection(n in 0usize..=12, p in 0usize..=6, x in rational()) {
        let pr = Rational::from_integer(p.into());
        let sign = if n % 2 == 0 { Rational::from_integer(1.into()) } else { Rational::from_integer((-1).into()) };
        prop_assert_eq!(euler_poly(n, p, &(&pr - &x)), &sign * euler_poly(n, p, &x));
        prop_assert_eq!(bernoulli_poly(n, p, &(&pr - &x)), &sign * bernoulli_poly(n, p, &x));
    }

    #[test]
    fn euler_order_additivity(n in 0usize..=8, p in 0usize..=4, r in 0usize..=4, x in rational(), y in rational()) {
        let conv = (0..=n).fold(Rational::zero(), |acc, k| {
            acc + Rational::from_integer(binomial(n, k)) * euler_poly(k, p, &x) * euler_poly(n - k, r, &y)
        });
        prop_assert_eq!(conv, euler_poly(n, p + r, &(&x + &y)));
    }

    #[test]
    fn symbols_match_polynomials(n in 0usize..=10, p in 1usize..=5, x in rational()) {
        let e = SymbolCombo::new(x.clone()).with(SymbolKind::Euler, p, Rational::from_integer(1.into()));
        prop_assert_eq!(combo_moment(&e, n), euler_poly(n, p, &x));
        let b = SymbolCombo::new(x.clone()).with(SymbolKind::Bernoulli, p, Rational::from_integer(1.into()));
        prop_assert_eq!(combo_moment(&b, n), bernoulli_poly(n, p, &x));
    }

    #[test]
    fn doubled_euler_symbol(n in 0usize..=10, p in 1usize..=5, y in rational()) {
        // (2E^{(p)} + p + y)^n = 2^n E_n^{(p)}(p/2 + y/2)
        let pr = Rational::from_integer(p.into());
        let two = Rational::from_integer(2.into());
        let c = SymbolCombo::new(&pr + &y).with(SymbolKind::Euler, p, two.clone());
        let expected = two.pow(n as i32) * euler_poly(n, p, &((&pr + &y) / &two));
        prop_assert_eq!(combo_moment(&c, n), expected);
    }

    #[test]
    fn independent_union_multiplies(a in combo(), b in combo()) {
        let order = 8;
        prop_assert_eq!(combo_egf(&a.union(&b), order), combo_egf(&a, order).mul_series(&combo_egf(&b, order)));
    }

    #[test]
    fn subsets_starting_at_one(n in 2usize..=25, l in 2usize..=13) {
        prop_assume!(l <= n);
        let rest = if l == 1 { 1 } else if n >= 2 { count_nonadjacent(l - 1, n - 2) } else { 0 };
        prop_assert_eq!(count_with_initial(1, l, n), rest);
    }

    #[test]
    fn phi_telescopes(a in positive(), gap1 in positive(), gap2 in positive()) {
        let b = &a + &gap1;
        let c = &b + &gap2;
        let order = 10;
        prop_assert_eq!(bm_phi(&a, &b, order).unwrap().mul_series(&bm_phi(&b, &c, order).unwrap()), bm_phi(&a, &c, order).unwrap());
        prop_assert_eq!(bessel_phi(&a, &b, order).unwrap().mul_series(&bessel_phi(&b, &c, order).unwrap()), bessel_phi(&a, &c, order).unwrap());
        let zero = Rational::zero();
        prop_assert_eq!(bessel_phi(&zero, &a, order).unwrap().mul_series(&bessel_phi(&a, &b, order).unwrap()), bessel_phi(&zero, &b, order).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn chain_loop_theorem(probs in prop::collection::vec(probability(), 1..=6)) {
        let chain = BirthDeathChain::new(probs).unwrap();
        prop_assert!(verify_loop(&bd_system(&chain, 40).unwrap()).unwrap().equal);
    }
}

/// Terms over `{k+2..n}` re-indexed from `denominator_terms(n - k - 1)`.
fn shifted_terms(k: usize, n: usize) -> Vec<(i8, Vec<usize>)> {
    if n < k + 2 {
        return Vec::new();
    }
    denominator_terms(n - k - 1)
        .into_iter()
        .map(|t| (t.sign, t.subset.indices().iter().map(|i| i + k + 1).collect()))
        .collect()
}

#[test]
fn denominator_peels_off_smallest_loop() {
    for n in 1..=12usize {
        let terms: Vec<DenominatorTerm> = denominator_terms(n);
        for k in 1..=n {
            let mut starting_at_k: Vec<(i8, Vec<usize>)> = terms
                .iter()
                .filter(|t| t.subset.smallest() == Some(k))
                .map(|t| (t.sign, t.subset.indices().to_vec()))
                .collect();
            // -L_k (1 + sum of signed terms over {k+2..n})
            let mut peeled: Vec<(i8, Vec<usize>)> = vec![(-1, vec![k])];
            for (sign, mut idx) in shifted_terms(k, n) {
                idx.push(k);
                peeled.push((-sign, idx));
            }
            starting_at_k.sort();
            peeled.sort();
            assert_eq!(starting_at_k, peeled, "n={n} k={k}");
        }
        for t in &terms {
            assert!(NonadjacentSubset::new(t.subset.indices().to_vec(), n).is_ok());
        }
    }
}

#[test]
fn transfer_error_shrinks_with_word_length() {
    let half = Rational::new(1.into(), 2.into());
    let quarter = Rational::new(1.into(), 4.into());
    let order = 6;
    let s = cosh_series(&Rational::from_integer(1.into()), order).recip().unwrap().pow(2);
    let loops = vec![s.scale(&half), s.scale(&quarter)];
    let exact = denominator_series(&loops).unwrap().recip().unwrap();
    let err = |k| {
        exact
            .sub_series(&transfer_expansion(&loops, k).unwrap().series)
            .coeffs()
            .iter()
            .map(Signed::abs)
            .max()
            .unwrap()
    };
    let (e20, e50, e100) = (err(20), err(50), err(100));
    assert!(e50 < e20);
    assert!(e100 < e50);
}
