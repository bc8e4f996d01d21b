//! Deciding whether `R(Q)` is dense in `Q_p`.
//!
//! Two independent routes decide binary forms: the elementary decision tree
//! ([`decide_binary_tree`]) walks isotropy, singularity and discriminant
//! factorization; [`decide_binary_squareclass`] only asks whether the
//! discriminant is a square in `Q_p`. They must always agree.

use core::fmt;

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::One;

use crate::forms::{BinaryForm, DiscFactorization, GeneralForm, QuadraticForm};
use crate::padic::{self, Prime};

/// A question asked along a decision path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Isotropic,
    Singular,
    OddPrime,
    ExponentOdd,
    EllIsResidue,
    EllIsOneModEight,
    DiscriminantIsSquare,
    AtLeastThreeVariables,
    TwoVariables,
}

impl Node {
    pub fn id(self) -> &'static str {
        match self {
            Node::Isotropic => "isotropic",
            Node::Singular => "singular",
            Node::OddPrime => "p-odd",
            Node::ExponentOdd => "k-odd",
            Node::EllIsResidue => "ell-residue",
            Node::EllIsOneModEight => "ell-1-mod-8",
            Node::DiscriminantIsSquare => "disc-square",
            Node::AtLeastThreeVariables => "rank-ge-3",
            Node::TwoVariables => "rank-2",
        }
    }

    pub fn question(self, p: Prime) -> String {
        match self {
            Node::Isotropic => format!("Is Q isotropic modulo {p}?"),
            Node::Singular => format!("Is Q singular modulo {p}?"),
            Node::OddPrime => format!("Is p = {p} odd?"),
            Node::ExponentOdd => "Is k odd?".into(),
            Node::EllIsResidue => format!("Is (ell/{p}) = 1?"),
            Node::EllIsOneModEight => "Is ell ≡ 1 (mod 8)?".into(),
            Node::DiscriminantIsSquare => format!("Is the discriminant a square in Q_{p}?"),
            Node::AtLeastThreeVariables => "Does Q have at least three variables?".into(),
            Node::TwoVariables => "Is Q binary?".into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub node: Node,
    pub answer: bool,
}

/// Terminal node reached by a decider, naming the result that justifies it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Leaf {
    /// Anisotropic mod `p`: every value has even valuation.
    Anisotropic,
    /// Isotropic and nonsingular mod `p`: values lift to every residue.
    IsotropicNonsingular,
    /// Odd `p`, `k` odd.
    OddPrimeExponentOdd,
    /// Odd `p`, `k` even, `ell` a residue.
    OddPrimeResidue,
    /// Odd `p`, `k` even, `ell` a non-residue.
    OddPrimeNonresidue,
    /// `p = 2`, `k` odd.
    TwoExponentOdd,
    /// `p = 2`, `k` even, `ell ≡ 1 mod 8`.
    TwoEllOneModEight,
    /// `p = 2`, `k` even, `ell ≢ 1 mod 8`.
    TwoEllNotOneModEight,
    /// Discriminant a square in `Q_p`.
    SquareDiscriminant,
    /// Discriminant not a square in `Q_p`.
    NonsquareDiscriminant,
    /// Three or more variables are always dense.
    RankAtLeastThree,
    /// `a x^2`: every quotient is a square.
    RankOne,
}

impl Leaf {
    /// The eight terminal nodes of the elementary decision tree.
    pub const TREE: [Leaf; 8] = [
        Leaf::Anisotropic,
        Leaf::IsotropicNonsingular,
        Leaf::OddPrimeExponentOdd,
        Leaf::OddPrimeResidue,
        Leaf::OddPrimeNonresidue,
        Leaf::TwoExponentOdd,
        Leaf::TwoEllOneModEight,
        Leaf::TwoEllNotOneModEight,
    ];

    pub fn dense(self) -> bool {
        matches!(
            self,
            Leaf::IsotropicNonsingular
                | Leaf::OddPrimeResidue
                | Leaf::TwoEllOneModEight
                | Leaf::SquareDiscriminant
                | Leaf::RankAtLeastThree
        )
    }

    pub fn tag(self) -> &'static str {
        match self {
            Leaf::Anisotropic => "anisotropic-mod-p",
            Leaf::IsotropicNonsingular => "isotropic-nonsingular-mod-p",
            Leaf::OddPrimeExponentOdd => "odd-p-singular-k-odd",
            Leaf::OddPrimeResidue => "odd-p-singular-ell-residue",
            Leaf::OddPrimeNonresidue => "odd-p-singular-ell-nonresidue",
            Leaf::TwoExponentOdd => "p2-singular-k-odd",
            Leaf::TwoEllOneModEight => "p2-singular-ell-1-mod-8",
            Leaf::TwoEllNotOneModEight => "p2-singular-ell-not-1-mod-8",
            Leaf::SquareDiscriminant => "square-class-disc-square",
            Leaf::NonsquareDiscriminant => "square-class-disc-nonsquare",
            Leaf::RankAtLeastThree => "rank-at-least-3",
            Leaf::RankOne => "rank-1-square-quotients",
        }
    }

    /// One-line reason for the verdict at this leaf.
    pub fn summary(self) -> &'static str {
        match self {
            Leaf::Anisotropic => "every nonzero value has even valuation, so p is never approached",
            Leaf::IsotropicNonsingular => "values lift to every residue by Hensel's lemma",
            Leaf::OddPrimeExponentOdd => "disc has odd valuation, so it is not a square",
            Leaf::OddPrimeResidue => {
                "reduction to a form of discriminant ell that is isotropic and nonsingular"
            }
            Leaf::OddPrimeNonresidue => {
                "reduction to a form of discriminant ell that is anisotropic"
            }
            Leaf::TwoExponentOdd => "disc has odd 2-adic valuation, so it is not a square",
            Leaf::TwoEllOneModEight => {
                "reduction to a form that is isotropic and nonsingular mod 2"
            }
            Leaf::TwoEllNotOneModEight => "ell is not a 2-adic square",
            Leaf::SquareDiscriminant => "the discriminant is a square in Q_p",
            Leaf::NonsquareDiscriminant => "the discriminant is not a square in Q_p",
            Leaf::RankAtLeastThree => "forms in three or more variables are always dense",
            Leaf::RankOne => "every quotient is a square",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Leaf> {
        const ALL: [Leaf; 12] = [
            Leaf::Anisotropic,
            Leaf::IsotropicNonsingular,
            Leaf::OddPrimeExponentOdd,
            Leaf::OddPrimeResidue,
            Leaf::OddPrimeNonresidue,
            Leaf::TwoExponentOdd,
            Leaf::TwoEllOneModEight,
            Leaf::TwoEllNotOneModEight,
            Leaf::SquareDiscriminant,
            Leaf::NonsquareDiscriminant,
            Leaf::RankAtLeastThree,
            Leaf::RankOne,
        ];
        ALL.into_iter().find(|l| l.tag() == tag)
    }
}

impl fmt::Display for Leaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub prime: Prime,
    pub dense: bool,
    pub path: Vec<Step>,
    pub leaf: Leaf,
    /// Present for binary forms.
    pub factorization: Option<DiscFactorization>,
}

impl Verdict {
    fn new(
        prime: Prime,
        path: Vec<Step>,
        leaf: Leaf,
        factorization: Option<DiscFactorization>,
    ) -> Self {
        Verdict {
            prime,
            dense: leaf.dense(),
            path,
            leaf,
            factorization,
        }
    }

    pub fn theorem_tag(&self) -> &'static str {
        self.leaf.tag()
    }
}

/// The elementary decision tree: isotropic? → singular? → p odd? → k odd? →
/// `(ell/p) = 1` or `ell ≡ 1 mod 8`.
pub fn decide_binary_tree(f: &BinaryForm, p: Prime) -> Verdict {
    let fact = f.factor_discriminant(p);
    let mut path = Vec::with_capacity(5);
    let mut ask = |node, answer| {
        path.push(Step { node, answer });
        answer
    };

    let leaf = if !ask(Node::Isotropic, f.is_isotropic_mod_p(p)) {
        Leaf::Anisotropic
    } else if !ask(Node::Singular, f.is_singular_mod_p(p)) {
        Leaf::IsotropicNonsingular
    } else if ask(Node::OddPrime, p.is_odd()) {
        if ask(Node::ExponentOdd, fact.k % 2 == 1) {
            Leaf::OddPrimeExponentOdd
        } else {
            let residue = padic::legendre(&fact.ell, p).expect("p is odd") == 1;
            if ask(Node::EllIsResidue, residue) {
                Leaf::OddPrimeResidue
            } else {
                Leaf::OddPrimeNonresidue
            }
        }
    } else if ask(Node::ExponentOdd, fact.k % 2 == 1) {
        Leaf::TwoExponentOdd
    } else if ask(Node::EllIsOneModEight, fact.ell_mod_8() == 1) {
        Leaf::TwoEllOneModEight
    } else {
        Leaf::TwoEllNotOneModEight
    };
    Verdict::new(p, path, leaf, Some(fact))
}

/// Dense iff the discriminant is a square in `Q_p`.
pub fn decide_binary_squareclass(f: &BinaryForm, p: Prime) -> Verdict {
    let disc = f.discriminant();
    let square = padic::is_square_in_qp(&disc, &BigInt::one(), p).expect("denominator is one");
    let leaf = if square {
        Leaf::SquareDiscriminant
    } else {
        Leaf::NonsquareDiscriminant
    };
    let path = vec![Step {
        node: Node::DiscriminantIsSquare,
        answer: square,
    }];
    Verdict::new(p, path, leaf, Some(f.factor_discriminant(p)))
}

/// Any rank: three or more variables are dense, binary forms go through the
/// decision tree, and `a x^2` is never dense.
pub fn decide_general(f: &GeneralForm, p: Prime) -> Verdict {
    if let Some(binary) = f.as_binary() {
        return decide_binary_tree(&binary, p);
    }
    if f.rank() >= 3 {
        let path = vec![Step {
            node: Node::AtLeastThreeVariables,
            answer: true,
        }];
        return Verdict::new(p, path, Leaf::RankAtLeastThree, None);
    }
    let path = vec![
        Step {
            node: Node::AtLeastThreeVariables,
            answer: false,
        },
        Step {
            node: Node::TwoVariables,
            answer: false,
        },
    ];
    Verdict::new(p, path, Leaf::RankOne, None)
}

pub fn decide(f: &QuadraticForm, p: Prime) -> Verdict {
    match f {
        QuadraticForm::Binary(b) => decide_binary_tree(b, p),
        QuadraticForm::General(g) => decide_general(g, p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bf(a: i64, b: i64, c: i64) -> BinaryForm {
        BinaryForm::new(a, b, c).unwrap()
    }

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn nodes(v: &Verdict) -> Vec<(Node, bool)> {
        v.path.iter().map(|s| (s.node, s.answer)).collect()
    }

    #[test]
    fn sum_of_two_squares() {
        let v = decide_binary_tree(&bf(1, 0, 1), p(5));
        assert!(v.dense);
        assert_eq!(
            nodes(&v),
            [(Node::Isotropic, true), (Node::Singular, false)]
        );
        assert!(!decide_binary_tree(&bf(1, 0, 1), p(3)).dense);

        let v = decide_binary_tree(&bf(1, 0, 1), p(2));
        assert!(!v.dense);
        assert_eq!(v.leaf, Leaf::TwoEllNotOneModEight);
        let fact = v.factorization.unwrap();
        assert_eq!((fact.k, fact.ell), (2, BigInt::from(-1)));

        let v = decide_binary_tree(&bf(1, 0, -1), p(2));
        assert!(v.dense);
        assert_eq!(v.leaf, Leaf::TwoEllOneModEight);
    }

    #[test]
    fn square_class_examples() {
        assert!(decide_binary_squareclass(&bf(1, 0, 1), p(13)).dense);
        assert!(!decide_binary_squareclass(&bf(1, 1, 1), p(3)).dense);
        for q in [2, 3, 5, 7, 11, 13] {
            assert!(decide_binary_squareclass(&bf(1, 0, -1), p(q)).dense);
        }
    }

    #[test]
    fn general_examples() {
        let sum3 = GeneralForm::sum_of_squares(3).unwrap();
        assert!(decide_general(&sum3, p(7)).dense);
        let as_general = bf(1, 0, 1).to_general();
        assert_eq!(
            decide_general(&as_general, p(5)),
            decide_binary_tree(&bf(1, 0, 1), p(5))
        );
        let x2 = GeneralForm::sum_of_squares(1).unwrap();
        let v = decide_general(&x2, p(3));
        assert!(!v.dense);
        assert_eq!(v.leaf, Leaf::RankOne);
    }

    #[test]
    fn path_order_follows_the_tree() {
        let order = [
            Node::Isotropic,
            Node::Singular,
            Node::OddPrime,
            Node::ExponentOdd,
        ];
        for q in [2, 3, 5, 7] {
            for a in -5..=5 {
                for b in -5..=5 {
                    for c in -5..=5 {
                        let Ok(f) = BinaryForm::new(a, b, c) else {
                            continue;
                        };
                        let v = decide_binary_tree(&f, p(q));
                        assert!(!v.path.is_empty());
                        for (step, node) in v.path.iter().zip(order) {
                            assert_eq!(step.node, node);
                        }
                        if v.path.len() == 5 {
                            let last = if q == 2 {
                                Node::EllIsOneModEight
                            } else {
                                Node::EllIsResidue
                            };
                            assert_eq!(v.path[4].node, last);
                        }
                        assert!(Leaf::TREE.contains(&v.leaf));
                        assert_eq!(v.dense, v.leaf.dense());
                    }
                }
            }
        }
    }

    #[test]
    fn tags_round_trip() {
        for leaf in Leaf::TREE {
            assert_eq!(Leaf::from_tag(leaf.tag()), Some(leaf));
        }
        assert_eq!(Leaf::from_tag("nope"), None);
    }
}
