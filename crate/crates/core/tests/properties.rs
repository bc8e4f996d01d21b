use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;
use qform_core::decider::{decide_binary_squareclass, decide_binary_tree};
use qform_core::forms::arnold_compose;
use qform_core::padic::{is_square_in_qp, legendre, square_class, valuation};
use qform_core::{approximate_quotient, coverage, BinaryForm, Prime, QuadraticForm, Valuation};

const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

fn p(n: u64) -> Prime {
    Prime::new(n).unwrap()
}

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

fn prime() -> impl Strategy<Value = Prime> {
    prop::sample::select(PRIMES.to_vec()).prop_map(p)
}

fn nonzero(range: i64) -> impl Strategy<Value = i64> {
    (-range..=range).prop_filter("nonzero", |v| *v != 0)
}

fn form(range: i64) -> impl Strategy<Value = BinaryForm> {
    (-range..=range, -range..=range, -range..=range)
        .prop_filter_map("primitive and nonsingular", |(a, b, c)| {
            BinaryForm::new(a, b, c).ok()
        })
}

fn fin(v: Valuation) -> i64 {
    v.finite().unwrap()
}

/// Products of elementary unimodular matrices.
fn unimodular() -> impl Strategy<Value = [[i64; 2]; 2]> {
    prop::collection::vec((0..4u8, -3i64..=3), 0..6).prop_map(|steps| {
        let mut m = [[1i64, 0], [0, 1]];
        for (kind, t) in steps {
            let e = match kind {
                0 => [[1, t], [0, 1]],
                1 => [[1, 0], [t, 1]],
                2 => [[0, 1], [1, 0]],
                _ => [[-1, 0], [0, 1]],
            };
            m = [
                [
                    m[0][0] * e[0][0] + m[0][1] * e[1][0],
                    m[0][0] * e[0][1] + m[0][1] * e[1][1],
                ],
                [
                    m[1][0] * e[0][0] + m[1][1] * e[1][0],
                    m[1][0] * e[0][1] + m[1][1] * e[1][1],
                ],
            ];
        }
        m
    })
}

proptest! {
    #[test]
    fn valuation_is_multiplicative(a in nonzero(1 << 30), b in nonzero(1 << 30), q in prime()) {
        let lhs = valuation(&(big(a) * big(b)), q);
        prop_assert_eq!(fin(lhs), fin(valuation(&big(a), q)) + fin(valuation(&big(b), q)));
    }

    #[test]
    fn valuation_is_ultrametric(a in -100_000i64..100_000, b in -100_000i64..100_000, q in prime()) {
        let sum = valuation(&big(a + b), q);
        prop_assert!(sum >= valuation(&big(a), q).min(valuation(&big(b), q)));
    }

    #[test]
    fn legendre_is_multiplicative(a in -10_000i64..10_000, b in -10_000i64..10_000, q in prop::sample::select(vec![3u64, 5, 7, 11, 13, 101])) {
        let q = p(q);
        let lhs = legendre(&big(a * b), q).unwrap();
        prop_assert_eq!(lhs, legendre(&big(a), q).unwrap() * legendre(&big(b), q).unwrap());
    }

    #[test]
    fn composition_multiplies_values(
        f in form(50),
        pts in prop::array::uniform6(-100i64..=100),
    ) {
        let [x1, y1, x2, y2, x3, y3] = pts.map(big);
        let (x, y) = arnold_compose(&f, &(x1.clone(), y1.clone()), &(x2.clone(), y2.clone()), &(x3.clone(), y3.clone()));
        let product = f.evaluate(&x1, &y1) * f.evaluate(&x2, &y2) * f.evaluate(&x3, &y3);
        prop_assert_eq!(f.evaluate(&x, &y), product);
    }

    #[test]
    fn density_is_an_equivalence_invariant(f in form(12), m in unimodular(), q in prime()) {
        let g = f.substitute(m).unwrap();
        prop_assert_eq!(g.discriminant(), f.discriminant());
        let (vf, vg) = (decide_binary_tree(&f, q), decide_binary_tree(&g, q));
        prop_assert_eq!(vf.dense, vg.dense);
        prop_assert_eq!(vf.leaf, vg.leaf);
    }

    #[test]
    fn unramified_density_is_the_legendre_symbol(f in form(30), q in prime()) {
        let disc = f.discriminant();
        prop_assume!(fin(valuation(&disc, q)) == 0);
        let expected = if q.is_two() {
            // odd discriminants are 1 or 5 mod 8
            (disc.clone() % 8 + 8) % 8 == big(1)
        } else {
            legendre(&disc, q).unwrap() == 1
        };
        prop_assert_eq!(decide_binary_tree(&f, q).dense, expected);
        prop_assert_eq!(decide_binary_squareclass(&f, q).dense, expected);
    }

    #[test]
    fn anisotropic_values_have_even_valuation(f in form(15), q in prime(), x in -60i64..=60, y in -60i64..=60) {
        prop_assume!(!f.is_isotropic_mod_p(q));
        let v = f.evaluate(&big(x), &big(y));
        prop_assume!(v != big(0));
        prop_assert_eq!(fin(valuation(&v, q)) % 2, 0);
    }

    #[test]
    fn witnesses_verify(f in form(10), q in prop::sample::select(vec![2u64, 3, 5, 7]), num in -200i64..=200, den in 1i64..=60, r in 1u32..=4) {
        let q = p(q);
        let form: QuadraticForm = f.into();
        prop_assume!(qform_core::decide(&form, q).dense);
        let w = approximate_quotient(&form, q, &big(num), &big(den), r, 60).unwrap();
        prop_assert!(w.verify(&form, q).unwrap().at_least(r as i64));
        prop_assert_eq!(w.verify(&form, q).unwrap(), w.achieved);
    }

    #[test]
    fn coverage_is_monotone(f in form(6), q in prop::sample::select(vec![2u64, 3, 5]), bound in 1u64..8, extra in 1u64..6) {
        let q = p(q);
        let form: QuadraticForm = f.into();
        let small = coverage(&form, q, 2, bound).unwrap();
        let large = coverage(&form, q, 2, bound + extra).unwrap();
        for x in &small.covered {
            prop_assert!(large.is_covered(*x));
        }
        let coarse = coverage(&form, q, 1, bound).unwrap();
        let reduced: BTreeSet<u64> = small.covered.iter().map(|x| x % q.get()).collect();
        for x in &coarse.covered {
            prop_assert!(reduced.contains(x));
        }
    }
}

/// `n` is a square in `Q_p` iff it is a square modulo `p^(ν(n) + 5)`.
#[test]
fn squares_match_exhaustive_search() {
    for q in [2u64, 3, 5, 7] {
        let prime = p(q);
        for k in 0..=2u32 {
            let modulus = q.pow(k + 5);
            let squares: BTreeSet<u64> = (0..modulus).map(|x| x * x % modulus).collect();
            for n in -400i64..=400 {
                if n == 0 || fin(valuation(&big(n), prime)) != k as i64 {
                    continue;
                }
                let residue = n.rem_euclid(modulus as i64) as u64;
                assert_eq!(
                    is_square_in_qp(&big(n), &big(1), prime).unwrap(),
                    squares.contains(&residue),
                    "n={n} p={q}"
                );
            }
        }
    }
}

#[test]
fn square_class_counts() {
    for (q, expected) in [(2u64, 8usize), (3, 4), (5, 4), (7, 4), (11, 4)] {
        let classes: BTreeSet<_> = (-300i64..=300)
            .filter(|&n| n != 0)
            .map(|n| square_class(&big(n), &big(1), p(q)).unwrap())
            .collect();
        assert_eq!(classes.len(), expected, "p={q}");
    }
}
