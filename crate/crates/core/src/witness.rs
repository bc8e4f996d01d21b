//! Constructive evidence for a verdict.
//!
//! Dense forms get a [`Witness`]: two lattice points whose quotient is
//! p-adically close to a requested target. Non-dense forms get an
//! [`ExclusionCertificate`]: a target and radius that no quotient can reach.

use core::fmt;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::decider::{self, Leaf};
use crate::error::{Error, Result};
use crate::forms::{self, BinaryForm, Point2, QuadraticForm, SingularReduction};
use crate::lattice::{self, Ball};
use crate::padic::{self, Prime, Valuation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// The target is hit exactly (`0` or `1`).
    Exact,
    /// Hensel lifting on the form itself.
    HenselLift,
    /// Singular reduction to `Q''`, lifting there, and mapping back.
    ReducedHenselLift,
    /// Bounded lattice enumeration.
    Enumeration,
}

impl Strategy {
    pub fn tag(self) -> &'static str {
        match self {
            Strategy::Exact => "exact",
            Strategy::HenselLift => "hensel-lift",
            Strategy::ReducedHenselLift => "reduce-then-lift",
            Strategy::Enumeration => "enumeration",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// `Q(numerator) / Q(denominator)` within `p^-precision` of the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub numerator: Vec<BigInt>,
    pub denominator: Vec<BigInt>,
    pub target_num: BigInt,
    pub target_den: BigInt,
    pub precision: u32,
    pub achieved: Valuation,
    pub strategy: Strategy,
}

/// `ν_p(Q(u)/Q(v) - num/den)`, straight from the integers.
pub fn quotient_distance(
    form: &QuadraticForm,
    p: Prime,
    numerator: &[BigInt],
    denominator: &[BigInt],
    target_num: &BigInt,
    target_den: &BigInt,
) -> Result<Valuation> {
    let top = form.evaluate(numerator)?;
    let bottom = form.evaluate(denominator)?;
    if bottom.is_zero() {
        return Err(Error::invalid("denominator point evaluates to zero"));
    }
    // Q(u)/Q(v) - N/D = (Q(u) D - N Q(v)) / (Q(v) D)
    padic::valuation_rational(
        &(top * target_den - target_num * &bottom),
        &(bottom * target_den),
        p,
    )
}

fn reduced_target(num: &BigInt, den: &BigInt) -> Result<(BigInt, BigInt)> {
    if den.is_zero() {
        return Err(Error::invalid("target has zero denominator"));
    }
    let g = num.gcd(den);
    let (mut n, mut d) = (num / &g, den / &g);
    if d.is_negative() {
        n = -n;
        d = -d;
    }
    Ok((n, d))
}

impl Witness {
    /// Builds a witness after re-verifying it from the raw integers.
    pub fn new(
        form: &QuadraticForm,
        p: Prime,
        numerator: Vec<BigInt>,
        denominator: Vec<BigInt>,
        target: (&BigInt, &BigInt),
        precision: u32,
        strategy: Strategy,
    ) -> Result<Self> {
        let (target_num, target_den) = reduced_target(target.0, target.1)?;
        let achieved =
            quotient_distance(form, p, &numerator, &denominator, &target_num, &target_den)?;
        if !achieved.at_least(precision as i64) {
            return Err(Error::internal(format!(
                "witness {numerator:?}/{denominator:?} reaches valuation {achieved}, below {precision}"
            )));
        }
        Ok(Witness {
            numerator,
            denominator,
            target_num,
            target_den,
            precision,
            achieved,
            strategy,
        })
    }

    /// Recomputes the achieved valuation.
    pub fn verify(&self, form: &QuadraticForm, p: Prime) -> Result<Valuation> {
        quotient_distance(
            form,
            p,
            &self.numerator,
            &self.denominator,
            &self.target_num,
            &self.target_den,
        )
    }

    /// `(x, y, z, w)` for binary forms.
    pub fn binary_coordinates(&self) -> Option<[&BigInt; 4]> {
        match (self.numerator.as_slice(), self.denominator.as_slice()) {
            ([x, y], [z, w]) => Some([x, y, z, w]),
            _ => None,
        }
    }
}

/// A target that no quotient approaches: `ν_p(q - target) <= radius_exponent`
/// for every `q` in `R(Q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExclusionCertificate {
    pub prime: Prime,
    pub target_num: BigInt,
    pub target_den: BigInt,
    pub radius_exponent: u32,
    pub justification: Leaf,
    /// Coordinate bound up to which the certificate was checked exhaustively.
    pub verified_bound: u64,
}

impl ExclusionCertificate {
    /// Whether the quotient `num/den` stays outside the excluded ball.
    pub fn excludes(&self, num: &BigInt, den: &BigInt) -> Result<bool> {
        let diff = num * &self.target_den - &self.target_num * den;
        let v = padic::valuation_rational(&diff, &(den * &self.target_den), self.prime)?;
        Ok(!v.at_least(self.radius_exponent as i64 + 1))
    }
}

fn odd_lift_side_condition(f: &BinaryForm, p: &BigInt, x: &BigInt, y: &BigInt) -> (bool, bool) {
    let gx = BigInt::from(2) * f.a() * x + f.b() * y;
    let gy = f.b() * x + BigInt::from(2) * f.c() * y;
    (!gx.is_multiple_of(p), !gy.is_multiple_of(p))
}

/// Whether `(x, y)` satisfies the odd-prime lifting side condition
/// `p ∤ (2ax + by)` or `p ∤ (bx + 2cy)`.
pub fn lift_side_condition(f: &BinaryForm, p: Prime, x: &BigInt, y: &BigInt) -> bool {
    let (gx, gy) = odd_lift_side_condition(f, &p.to_bigint(), x, y);
    gx || gy
}

/// Finds `(x, y)` with `Q(x, y) ≡ n (mod p^r)` for a form that is isotropic
/// and nonsingular modulo the odd prime `p`.
pub fn lift_representation(f: &BinaryForm, p: Prime, n: &BigInt, r: u32) -> Result<Point2> {
    if p.is_two() {
        return Err(Error::invalid("use lift_representation_two for p = 2"));
    }
    if r == 0 {
        return Err(Error::invalid("precision must be positive"));
    }
    if f.is_singular_mod_p(p) || !f.is_isotropic_mod_p(p) {
        return Err(Error::invalid(format!(
            "{f} is not isotropic and nonsingular modulo {p}"
        )));
    }
    let pb = p.to_bigint();
    let q = p.get();

    // Base case: scan F_p^2.
    let target = padic::residue_u64(n, q);
    let [a, b, c] = [f.a(), f.b(), f.c()].map(|v| padic::residue_u64(v, q) as u128);
    let m = q as u128;
    let mut base = None;
    'scan: for x in 0..m {
        for y in 0..m {
            if (x, y) == (0, 0) {
                continue;
            }
            let value = (a * (x * x % m) + b * (x * y % m) % m + c * (y * y % m)) % m;
            if value as u64 != target {
                continue;
            }
            let (bx, by) = (BigInt::from(x), BigInt::from(y));
            if lift_side_condition(f, p, &bx, &by) {
                base = Some((bx, by));
                break 'scan;
            }
        }
    }
    let (mut x, mut y) = base.ok_or_else(|| {
        Error::internal(format!("no base representation of {n} by {f} modulo {p}"))
    })?;

    let mut modulus = pb.clone();
    for _ in 1..r {
        let m = exact_quotient(&(f.evaluate(&x, &y) - n), &modulus)?;
        let (gx_ok, _) = odd_lift_side_condition(f, &pb, &x, &y);
        if gx_ok {
            // Q(x + z, y) = Q(x, y) + a z^2 + b z y + 2 a x z
            let gx = BigInt::from(2) * f.a() * &x + f.b() * &y;
            let i = (-(padic::mod_inverse(&gx, &pb)? * &m)).mod_floor(&pb);
            x += i * &modulus;
        } else {
            // symmetric identity in y
            let gy = f.b() * &x + BigInt::from(2) * f.c() * &y;
            let i = (-(padic::mod_inverse(&gy, &pb)? * &m)).mod_floor(&pb);
            y += i * &modulus;
        }
        modulus *= &pb;
        if !lift_side_condition(f, p, &x, &y) {
            return Err(Error::internal("lifting lost the side condition"));
        }
    }
    Ok((x, y))
}

fn exact_quotient(num: &BigInt, den: &BigInt) -> Result<BigInt> {
    let (q, r) = num.div_rem(den);
    if r.is_zero() {
        Ok(q)
    } else {
        Err(Error::internal(format!(
            "lifting invariant broken: {den} ∤ {num}"
        )))
    }
}

/// The side condition kept by [`lift_representation_two`]: the coordinate
/// paired with the even outer coefficient's partner is odd, i.e. `y` odd when
/// `a` is even and `x` odd otherwise.
pub fn two_adic_side_condition(f: &BinaryForm, x: &BigInt, y: &BigInt) -> bool {
    if f.a().is_even() {
        y.is_odd()
    } else {
        x.is_odd()
    }
}

/// Finds `(x, y)` with `Q(x, y) ≡ n (mod 2^r)` for a form that is isotropic
/// and nonsingular modulo 2.
pub fn lift_representation_two(f: &BinaryForm, n: &BigInt, r: u32) -> Result<Point2> {
    if r == 0 {
        return Err(Error::invalid("precision must be positive"));
    }
    if f.b().is_even() {
        return Err(Error::invalid(format!("{f} is singular modulo 2")));
    }
    if f.a().is_odd() && f.c().is_odd() {
        return Err(Error::invalid(format!("{f} is anisotropic modulo 2")));
    }
    let swapped = f.a().is_odd();
    let g = if swapped { f.swapped() } else { f.clone() };

    let mut x = n - g.c();
    let y = BigInt::one();
    let two = BigInt::from(2);
    let mut modulus = two.clone();
    for _ in 1..r {
        let m = exact_quotient(&(g.evaluate(&x, &y) - n), &modulus)?;
        // b and y are odd, hence their own inverses mod 2.
        let i = (m * g.b() * &y).mod_floor(&two);
        x += i * &modulus;
        modulus *= &two;
    }
    Ok(if swapped { (y, x) } else { (x, y) })
}

fn lift_to(f: &BinaryForm, p: Prime, n: &BigInt, r: u32) -> Result<Point2> {
    if p.is_two() {
        lift_representation_two(f, n, r)
    } else {
        lift_representation(f, p, n, r)
    }
}

/// Numerator and denominator points of an isotropic nonsingular form whose
/// quotient is within `p^-r` of `num/den` (already in lowest terms).
fn lift_quotient(
    f: &BinaryForm,
    p: Prime,
    num: &BigInt,
    den: &BigInt,
    r: u32,
) -> Result<(Point2, Point2)> {
    let (s, den_unit) = padic::split_valuation(den, p).expect("nonzero denominator");
    // A target with ν = -s needs a denominator of valuation s; the lifting
    // precision absorbs the 2s lost when dividing.
    let precision = r + 2 * s;
    let modulus = p.pow(precision);
    let top = (num * padic::mod_inverse(&den_unit, &modulus)?).mod_floor(&modulus);
    let numerator = lift_to(f, p, &top, precision)?;
    let denominator = lift_to(f, p, &p.pow(s), precision)?;
    Ok((numerator, denominator))
}

fn first_nonzero_point(form: &QuadraticForm) -> Vec<BigInt> {
    // Some unit vector or e_i + e_j is never isotropic for a nonzero form.
    let rank = form.rank();
    let mut candidates = Vec::new();
    for i in 0..rank {
        let mut e = vec![BigInt::zero(); rank];
        e[i] = BigInt::one();
        candidates.push(e);
    }
    for i in 0..rank {
        for j in i + 1..rank {
            let mut e = vec![BigInt::zero(); rank];
            e[i] = BigInt::one();
            e[j] = BigInt::one();
            candidates.push(e);
        }
    }
    candidates
        .into_iter()
        .find(|pt| !form.evaluate(pt).expect("rank matches").is_zero())
        .expect("a nonzero form has a non-isotropic unit or pair vector")
}

fn to_big(point: Vec<i64>) -> Vec<BigInt> {
    point.into_iter().map(BigInt::from).collect()
}

/// A verified witness that `num/den` is approximated to `p^-r` by `R(Q)`.
///
/// `budget` caps the coordinate bound of the enumeration fallback.
pub fn approximate_quotient(
    form: &QuadraticForm,
    p: Prime,
    target_num: &BigInt,
    target_den: &BigInt,
    r: u32,
    budget: u64,
) -> Result<Witness> {
    if r == 0 {
        return Err(Error::invalid("precision must be positive"));
    }
    let verdict = decider::decide(form, p);
    if !verdict.dense {
        return Err(Error::invalid(format!(
            "R(Q) is not dense in Q_{p} for {form} ({}); no witness exists in general",
            verdict.leaf
        )));
    }
    let (num, den) = reduced_target(target_num, target_den)?;
    let target = (&num, &den);

    if num.is_zero() || num == den {
        let base = first_nonzero_point(form);
        let top = if num.is_zero() {
            vec![BigInt::zero(); form.rank()]
        } else {
            base.clone()
        };
        return Witness::new(form, p, top, base, target, r, Strategy::Exact);
    }

    if let Some(binary) = form.as_binary() {
        let constructive = match verdict.leaf {
            Leaf::IsotropicNonsingular => {
                lift_quotient(&binary, p, &num, &den, r).map(|(u, v)| (u, v, Strategy::HenselLift))
            }
            Leaf::OddPrimeResidue | Leaf::TwoEllOneModEight => {
                reduced_lift_quotient(&binary, p, &num, &den, r, verdict.factorization.as_ref())
                    .map(|(u, v)| (u, v, Strategy::ReducedHenselLift))
            }
            _ => Err(Error::internal("no constructive route for this leaf")),
        };
        if let Ok(((x, y), (z, w), strategy)) = constructive {
            if let Ok(w) = Witness::new(form, p, vec![x, y], vec![z, w], target, r, strategy) {
                return Ok(w);
            }
        }
    }

    let ball = Ball::new(p, &num, &den, r as i64)?;
    let (u, v) =
        lattice::search_ball(form, &ball, budget).ok_or(Error::BudgetExceeded { bound: budget })?;
    Witness::new(
        form,
        p,
        to_big(u),
        to_big(v),
        target,
        r,
        Strategy::Enumeration,
    )
}

fn reduced_lift_quotient(
    f: &BinaryForm,
    p: Prime,
    num: &BigInt,
    den: &BigInt,
    r: u32,
    fact: Option<&forms::DiscFactorization>,
) -> Result<(Point2, Point2)> {
    let k = fact
        .map(|f| f.k)
        .ok_or_else(|| Error::internal("missing factorization"))?;
    let reduction: SingularReduction = if p.is_two() {
        forms::reduce_two_singular(f, k)?
    } else {
        forms::reduce_odd_singular(f, p, k)?
    };
    let ((x, y), (z, w)) = lift_quotient(reduction.reduced(), p, num, den, r)?;
    Ok((reduction.map_back(&x, &y), reduction.map_back(&z, &w)))
}

fn smallest_nonresidue(p: Prime) -> BigInt {
    (2..p.get())
        .map(BigInt::from)
        .find(|n| padic::legendre(n, p) == Ok(-1))
        .expect("odd primes have non-residues")
}

/// Certificate of non-density, checked by exhaustive search over coordinates
/// up to `verify_bound`.
pub fn exclusion_certificate(
    form: &QuadraticForm,
    p: Prime,
    verify_bound: u64,
) -> Result<ExclusionCertificate> {
    let verdict = decider::decide(form, p);
    if verdict.dense {
        return Err(Error::invalid(format!(
            "R(Q) is dense in Q_{p} for {form}; nothing to exclude"
        )));
    }
    let k = verdict.factorization.as_ref().map_or(0, |f| f.k);
    let (target, radius) = match verdict.leaf {
        Leaf::Anisotropic | Leaf::OddPrimeNonresidue | Leaf::RankOne => (p.to_bigint(), 1),
        Leaf::OddPrimeExponentOdd => (smallest_nonresidue(p), k),
        Leaf::TwoExponentOdd => (BigInt::from(5), k + 2),
        Leaf::TwoEllNotOneModEight => {
            let ell8 = verdict.factorization.as_ref().expect("binary").ell_mod_8();
            if ell8 == 5 {
                (BigInt::from(2), 1)
            } else {
                (BigInt::from(3), 3)
            }
        }
        leaf => return Err(Error::internal(format!("unexpected non-dense leaf {leaf}"))),
    };
    let ball = Ball::new(p, &target, &BigInt::one(), radius as i64 + 1)?;
    if let Some((u, v)) = lattice::search_ball(form, &ball, verify_bound) {
        return Err(Error::internal(format!(
            "certificate violated: Q({u:?})/Q({v:?}) is within {p}^-{radius} of {target}"
        )));
    }
    Ok(ExclusionCertificate {
        prime: p,
        target_num: target,
        target_den: BigInt::one(),
        radius_exponent: radius,
        justification: verdict.leaf,
        verified_bound: verify_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::GeneralForm;

    fn bf(a: i64, b: i64, c: i64) -> BinaryForm {
        BinaryForm::new(a, b, c).unwrap()
    }

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn lift_examples() {
        let f = bf(1, 1, 1);
        let (x, y) = lift_representation(&f, p(7), &big(3), 2).unwrap();
        assert_eq!(
            Integer::mod_floor(&(f.evaluate(&x, &y) - 3), &big(49)),
            big(0)
        );

        let f = bf(1, 0, 1);
        assert_eq!(
            lift_representation(&f, p(5), &big(0), 1).unwrap(),
            (big(1), big(2))
        );
        let (x, y) = lift_representation(&f, p(5), &big(1), 3).unwrap();
        assert_eq!(
            Integer::mod_floor(&(f.evaluate(&x, &y) - 1), &big(125)),
            big(0)
        );
    }

    #[test]
    fn brute_force_confirms_representability_mod_49() {
        let f = bf(1, 1, 1);
        assert!((0..49i64).any(|x| (0..49i64).any(|y| (x * x + x * y + y * y - 3) % 49 == 0)));
        let _ = f;
    }

    #[test]
    fn lift_rejects_bad_inputs() {
        assert!(lift_representation(&bf(1, 0, 1), p(3), &big(1), 2).is_err());
        assert!(lift_representation(&bf(1, 0, -9), p(3), &big(1), 2).is_err());
        assert!(lift_representation(&bf(1, 0, 1), p(2), &big(1), 2).is_err());
        assert!(lift_representation(&bf(1, 0, 1), p(5), &big(1), 0).is_err());
        assert!(lift_representation_two(&bf(1, 1, 1), &big(1), 2).is_err());
        assert!(lift_representation_two(&bf(1, 0, 1), &big(1), 2).is_err());
    }

    #[test]
    fn lift_two_examples() {
        let f = bf(2, 1, 3);
        let (x, y) = lift_representation_two(&f, &big(5), 4).unwrap();
        assert_eq!(
            Integer::mod_floor(&(f.evaluate(&x, &y) - 5), &big(16)),
            big(0)
        );
        assert!(y.is_odd());
        assert!(
            (0..16i64).any(|x| (0..16i64).any(|y| (2 * x * x + x * y + 3 * y * y - 5) % 16 == 0))
        );

        // base case (n - c, 1)
        let f = bf(2, 1, 1);
        assert_eq!(
            lift_representation_two(&f, &big(0), 1).unwrap(),
            (big(-1), big(1))
        );
        assert_eq!(
            lift_representation_two(&f, &big(7), 1).unwrap(),
            (big(6), big(1))
        );

        // a odd, c even: lifting runs on the swapped form
        let f = bf(3, 1, 2);
        let (x, y) = lift_representation_two(&f, &big(5), 5).unwrap();
        assert_eq!(
            Integer::mod_floor(&(f.evaluate(&x, &y) - 5), &big(32)),
            big(0)
        );
        assert!(two_adic_side_condition(&f, &x, &y));
    }

    #[test]
    fn witness_examples() {
        let f: QuadraticForm = bf(1, 0, 1).into();
        let w = approximate_quotient(&f, p(5), &big(2), &big(1), 2, 50).unwrap();
        assert!(w.achieved.at_least(2));
        assert_eq!(w.strategy, Strategy::HenselLift);

        let w = approximate_quotient(&f, p(5), &big(1), &big(1), 9, 50).unwrap();
        assert_eq!(
            w.binary_coordinates().unwrap(),
            [&big(1), &big(0), &big(1), &big(0)]
        );
        assert_eq!(w.achieved, Valuation::Infinite);

        let g: QuadraticForm = GeneralForm::sum_of_squares(3).unwrap().into();
        let w = approximate_quotient(&g, p(2), &big(7), &big(1), 3, 50).unwrap();
        assert_eq!(w.strategy, Strategy::Enumeration);
        assert!(w.verify(&g, p(2)).unwrap().at_least(3));
    }

    #[test]
    fn witness_for_negative_valuation_targets() {
        let f: QuadraticForm = bf(1, 0, 1).into();
        for (n, d) in [(3, 5), (1, 25), (-7, 125), (2, 15)] {
            let w = approximate_quotient(&f, p(5), &big(n), &big(d), 3, 50).unwrap();
            assert_eq!(w.strategy, Strategy::HenselLift);
            assert!(w.verify(&f, p(5)).unwrap().at_least(3), "{n}/{d}");
        }
    }

    #[test]
    fn singular_dense_witnesses_use_the_reduction() {
        for (form, q) in [
            (bf(1, 0, -9), 3),
            (bf(1, 0, -4), 2),
            (bf(1, 2, -8), 3),
            (bf(1, 0, -17 * 16), 2),
        ] {
            let v = decider::decide_binary_tree(&form, p(q));
            assert!(v.dense, "{form} at {q}");
            let f: QuadraticForm = form.into();
            for target in [2i64, 3, 6, 10, -1] {
                let w = approximate_quotient(&f, p(q), &big(target), &big(1), 4, 10).unwrap();
                assert_eq!(
                    w.strategy,
                    Strategy::ReducedHenselLift,
                    "{f} target {target}"
                );
            }
        }
    }

    #[test]
    fn witness_refuses_non_dense() {
        let f: QuadraticForm = bf(1, 0, 1).into();
        assert!(matches!(
            approximate_quotient(&f, p(3), &big(2), &big(1), 2, 10),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn witness_construction_rechecks() {
        let f: QuadraticForm = bf(1, 0, 1).into();
        let bad = Witness::new(
            &f,
            p(5),
            vec![big(1), big(0)],
            vec![big(1), big(0)],
            (&big(2), &big(1)),
            1,
            Strategy::Exact,
        );
        assert!(matches!(bad, Err(Error::Internal(_))));
        let zero = Witness::new(
            &f,
            p(5),
            vec![big(1), big(0)],
            vec![big(0), big(0)],
            (&big(2), &big(1)),
            1,
            Strategy::Exact,
        );
        assert!(zero.is_err());
    }

    #[test]
    fn certificate_examples() {
        let c = exclusion_certificate(&bf(1, 0, 1).into(), p(3), 20).unwrap();
        assert_eq!((c.target_num.clone(), c.radius_exponent), (big(3), 1));
        assert_eq!(c.justification, Leaf::Anisotropic);

        let c = exclusion_certificate(&bf(1, 0, -3).into(), p(3), 20).unwrap();
        assert_eq!((c.target_num.clone(), c.radius_exponent), (big(2), 1));

        let c = exclusion_certificate(&bf(1, 0, 1).into(), p(2), 20).unwrap();
        assert_eq!((c.target_num.clone(), c.radius_exponent), (big(3), 3));

        assert!(exclusion_certificate(&bf(1, 0, 1).into(), p(5), 20).is_err());
    }

    #[test]
    fn certificate_for_x2_minus_3y2_checked_mod_27() {
        // Independent of the signature machinery: every quotient with
        // coordinates up to 12 satisfies ν_3(q - 2) <= 1.
        let c = exclusion_certificate(&bf(1, 0, -3).into(), p(3), 5).unwrap();
        let q = |x: i64, y: i64| x * x - 3 * y * y;
        for x in -12..=12i64 {
            for y in -12..=12i64 {
                for z in -12..=12i64 {
                    for w in 0..=12i64 {
                        let d = q(z, w);
                        if d == 0 {
                            continue;
                        }
                        assert!(c.excludes(&big(q(x, y)), &big(d)).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn ell_3_or_7_mod_8_form_has_no_primitive_zero_mod_8() {
        // x^2 - l y^2 - 3 z^2 + 3 l w^2 ≢ 0 mod 8 unless all are even.
        for l in [3i64, 7] {
            for x in 0..8i64 {
                for y in 0..8i64 {
                    for z in 0..8i64 {
                        for w in 0..8i64 {
                            if [x, y, z, w].iter().all(|v| v % 2 == 0) {
                                continue;
                            }
                            let v = x * x - l * y * y - 3 * z * z + 3 * l * w * w;
                            assert_ne!(v.rem_euclid(8), 0, "l={l} ({x},{y},{z},{w})");
                        }
                    }
                }
            }
        }
    }
}
